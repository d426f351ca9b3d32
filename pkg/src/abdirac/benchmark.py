"""Benchmark the compiled kernel core against the pure-Python fallback.

Run as ``python -m abdirac.benchmark [--sizes small|full] [--json PATH]``.
Times the three hot layers: scalar/array Bessel evaluation across the
series / recurrence / asymptotic regimes, transform-matrix assembly, and a
full isometry round trip on one channel.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import backend as backend_mod
from .grids import l2_norm, make_energy_grid, make_radial_grid
from .sampling import gaussian_bump


def _available_backends():
    out = []
    for name in ("cython", "python"):
        try:
            backend_mod.get_backend(name)
            out.append(name)
        except ImportError:
            pass
    return out


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(n_array: int, n_grid: int) -> dict:
    results = {}
    rng = np.random.default_rng(0)
    x_series = np.ascontiguousarray(rng.uniform(0.0, 20.0, n_array))
    x_mid = np.ascontiguousarray(rng.uniform(22.0, 55.0, n_array))
    x_asym = np.ascontiguousarray(rng.uniform(60.0, 1600.0, n_array))
    rg = make_radial_grid(40.0, n_grid)
    eg = make_energy_grid(40.0, n_grid)
    phi = gaussian_bump(rg, 8.0, 1.0, 1.0, 0.5j)

    for name in _available_backends():
        impl = backend_mod.get_backend(name)
        out = np.empty(n_array)
        rates = {}
        for label, xs in (("series", x_series), ("recurrence", x_mid),
                          ("asymptotic", x_asym)):
            dt = _time(lambda xs=xs: impl.jv_array(0.7, xs, out))
            rates[f"jv_{label}_Mevals_per_s"] = n_array / dt / 1e6
        mat = np.empty((n_grid, n_grid))
        dt = _time(lambda: impl.jv_outer(0.3, eg.nodes, rg.nodes, mat), repeat=1)
        rates["matrix_assembly_s"] = dt
        rates["matrix_Mevals_per_s"] = n_grid * n_grid / dt / 1e6

        # full channel round trip through this backend
        from . import spectral
        saved = (backend_mod.jv_scalar, backend_mod.jv_array, backend_mod.jv_outer)
        try:
            backend_mod.jv_scalar = impl.jv_scalar
            backend_mod.jv_array = impl.jv_array
            backend_mod.jv_outer = impl.jv_outer
            spectral.clear_caches()
            t0 = time.perf_counter()
            op = spectral.TransformOperator(spectral.Channel(-1, 0.3), rg, eg)
            coeff = op.forward(phi)
            back = op.inverse(coeff)
            rates["transform_round_trip_s"] = time.perf_counter() - t0
            rates["round_trip_rel_err"] = l2_norm(back - phi) / l2_norm(phi)
        finally:
            backend_mod.jv_scalar, backend_mod.jv_array, backend_mod.jv_outer = saved
            spectral.clear_caches()
        results[name] = rates
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", choices=("small", "full"), default="small")
    parser.add_argument("--json", help="also write results to this path")
    args = parser.parse_args(argv)
    n_array, n_grid = (500_000, 1600) if args.sizes == "small" else (2_000_000, 4000)
    results = run(n_array, n_grid)
    width = max(len(k) for rates in results.values() for k in rates)
    header = "metric".ljust(width) + "".join(f"{name:>14}" for name in results)
    print(header)
    print("-" * len(header))
    keys = list(next(iter(results.values())))
    for key in keys:
        row = key.ljust(width)
        for name in results:
            row += f"{results[name][key]:>14.4g}"
        print(row)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=1, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
