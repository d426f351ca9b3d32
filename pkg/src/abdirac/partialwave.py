"""Partial-wave decomposition of 2-spinor fields on R^2 and its inverse.

A field Phi(r, phi) is decomposed per channel l into the angular pair
(e^{i l phi}, e^{i (l+1) phi}): the upper component's l-mode and the lower
component's (l+1)-mode form the channel spinor (f_l, g_l). The published
1/(2 sqrt(pi)) convention is absorbed into a sqrt(2 pi) factor so that the
discrete Parseval identity is exactly

    sum_l ||(f_l, g_l)||^2_{L^2(r dr)} = ||Phi||^2_{L^2(R^2)}.

The angular transform is a direct mode sum (exact on the discrete torus for
band-limited fields; desk scale needs no fast transform).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .grids import RadialGrid, RadialSpinor, l2_norm, make_radial_grid

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def angular_nodes(m: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(m) / m


@dataclass
class SpinorField:
    """2-spinor samples on the polar product grid (r_j, phi_k = 2 pi k / M)."""

    grid: RadialGrid
    values: np.ndarray  # complex, shape (2, n_r, M)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 3 or self.values.shape[0] != 2 \
                or self.values.shape[1] != self.grid.n:
            raise ParameterError("values must have shape (2, n_r, M)")
        if self.m % 2:
            raise ParameterError("angular count M must be even")

    @property
    def m(self) -> int:
        return self.values.shape[2]

    def norm(self) -> float:
        """||Phi||_{L^2(R^2)} by polar-grid quadrature."""
        dphi = 2.0 * np.pi / self.m
        dens = np.sum(np.abs(self.values) ** 2, axis=(0, 2)) * dphi
        return float(np.sqrt(np.sum(self.grid.weights * dens)))

    def rotated(self, theta: float) -> "SpinorField":
        """Phi(r, phi - theta) for theta a multiple of the angular spacing."""
        shift = theta * self.m / (2.0 * np.pi)
        if abs(shift - round(shift)) > 1e-9:
            raise ParameterError("rotation must be a multiple of 2 pi / M")
        return SpinorField(self.grid, np.roll(self.values, int(round(shift)), axis=2))


@dataclass
class ChannelSet:
    """Channels l in [l_min, l_max], each a RadialSpinor."""

    l_min: int
    l_max: int
    channels: dict = field(default_factory=dict)

    def __post_init__(self):
        for l in range(self.l_min, self.l_max + 1):
            if l not in self.channels:
                raise ParameterError(f"missing channel l={l}")

    @classmethod
    def single(cls, l: int, phi: RadialSpinor) -> "ChannelSet":
        return cls(l, l, {l: phi})

    @classmethod
    def zero(cls, l_min: int, l_max: int, grid: RadialGrid) -> "ChannelSet":
        return cls(l_min, l_max,
                   {l: RadialSpinor.zero(grid) for l in range(l_min, l_max + 1)})

    def __getitem__(self, l: int) -> RadialSpinor:
        return self.channels[l]

    def __iter__(self):
        return iter(sorted(self.channels))

    @property
    def grid(self) -> RadialGrid:
        return self.channels[self.l_min].grid

    def norm(self) -> float:
        return float(np.sqrt(sum(l2_norm(self.channels[l]) ** 2 for l in self)))

    def map(self, fn) -> "ChannelSet":
        return ChannelSet(self.l_min, self.l_max,
                          {l: fn(l, self.channels[l]) for l in self})


def required_angular_count(l_min: int, l_max: int) -> int:
    return 2 * (abs(l_min) + abs(l_max) + 2)


def decompose(field_: SpinorField, l_min: int, l_max: int) -> ChannelSet:
    """Project onto channels: f_l from the upper component's e^{i l phi} mode,
    g_l from the lower component's e^{i (l+1) phi} mode."""
    if l_min > l_max:
        raise ParameterError("l_min must be <= l_max")
    m = field_.m
    if m < required_angular_count(l_min, l_max):
        raise ParameterError(
            f"aliasing: M={m} < {required_angular_count(l_min, l_max)} needed "
            f"for l in [{l_min}, {l_max}]")
    phi_k = angular_nodes(m)
    ls = np.arange(l_min, l_max + 1)
    # modes[i, k] = exp(-i l_i phi_k) / M
    modes_f = np.exp(-1j * np.outer(ls, phi_k)) / m
    modes_g = np.exp(-1j * np.outer(ls + 1, phi_k)) / m
    f_all = _SQRT_2PI * field_.values[0] @ modes_f.T  # (n_r, n_l)
    g_all = _SQRT_2PI * field_.values[1] @ modes_g.T
    channels = {
        int(l): RadialSpinor(field_.grid, f_all[:, i], g_all[:, i])
        for i, l in enumerate(ls)
    }
    return ChannelSet(int(l_min), int(l_max), channels)


def synthesize(cset: ChannelSet, m: int, grid: RadialGrid | None = None) -> SpinorField:
    """Rebuild the field: Phi = (1/sqrt(2 pi)) sum_l (f_l e^{i l phi}, g_l e^{i (l+1) phi})."""
    if m < required_angular_count(cset.l_min, cset.l_max):
        raise ParameterError("angular count too small for the channel range")
    grid = grid or cset.grid
    phi_k = angular_nodes(m)
    values = np.zeros((2, grid.n, m), dtype=complex)
    for l in cset:
        ch = cset[l]
        values[0] += np.outer(ch.f, np.exp(1j * l * phi_k))
        values[1] += np.outer(ch.g, np.exp(1j * (l + 1) * phi_k))
    values /= _SQRT_2PI
    return SpinorField(grid, values)


def magnetic_gradient_norm(cset: ChannelSet, alpha: float) -> float:
    """||grad_A Phi||_{L^2}: each angular mode e^{i m phi} h(r) contributes
    integral of |h'|^2 + ((m + alpha)/r)^2 |h|^2 against r dr."""
    r = cset.grid.nodes
    w = cset.grid.weights
    total = 0.0
    for l in cset:
        ch = cset[l]
        df = np.gradient(ch.f, r, edge_order=2)
        dg = np.gradient(ch.g, r, edge_order=2)
        total += float(np.sum(w * (np.abs(df) ** 2
                                   + ((l + alpha) / r) ** 2 * np.abs(ch.f) ** 2)))
        total += float(np.sum(w * (np.abs(dg) ** 2
                                   + ((l + 1 + alpha) / r) ** 2 * np.abs(ch.g) ** 2)))
    return float(np.sqrt(total))


# ---------------------------------------------------------------------------
# JSON serialization (documented external interface)
# ---------------------------------------------------------------------------

def _grid_to_json(grid: RadialGrid) -> dict:
    return {"r_max": grid.r_max, "n": grid.n, "scheme": grid.scheme}


def _grid_from_json(obj: dict) -> RadialGrid:
    return make_radial_grid(obj["r_max"], obj["n"], obj["scheme"])


def _spinor_to_json(phi: RadialSpinor) -> dict:
    return {
        "f_re": phi.f.real.tolist(), "f_im": phi.f.imag.tolist(),
        "g_re": phi.g.real.tolist(), "g_im": phi.g.imag.tolist(),
    }


def _spinor_from_json(obj: dict, grid: RadialGrid) -> RadialSpinor:
    f = np.asarray(obj["f_re"]) + 1j * np.asarray(obj["f_im"])
    g = np.asarray(obj["g_re"]) + 1j * np.asarray(obj["g_im"])
    return RadialSpinor(grid, f, g)


def channelset_to_json(cset: ChannelSet) -> str:
    payload = {
        "grid": _grid_to_json(cset.grid),
        "l_min": cset.l_min,
        "l_max": cset.l_max,
        "channels": {str(l): _spinor_to_json(cset[l]) for l in cset},
    }
    return json.dumps(payload, sort_keys=True)


def channelset_from_json(text: str) -> ChannelSet:
    obj = json.loads(text)
    grid = _grid_from_json(obj["grid"])
    channels = {int(l): _spinor_from_json(s, grid) for l, s in obj["channels"].items()}
    return ChannelSet(obj["l_min"], obj["l_max"], channels)


def spinorfield_to_json(field_: SpinorField) -> str:
    payload = {
        "grid": _grid_to_json(field_.grid),
        "m": field_.m,
        "values_re": field_.values.real.tolist(),
        "values_im": field_.values.imag.tolist(),
    }
    return json.dumps(payload, sort_keys=True)


def spinorfield_from_json(text: str) -> SpinorField:
    obj = json.loads(text)
    grid = _grid_from_json(obj["grid"])
    values = np.asarray(obj["values_re"]) + 1j * np.asarray(obj["values_im"])
    return SpinorField(grid, values)
