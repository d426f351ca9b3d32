import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from abdirac import backend

cython_missing = backend.BACKEND != "cython"


@pytest.mark.skipif(cython_missing, reason="compiled core not built")
class TestBackendParity:
    def test_scalar_parity_lattice(self):
        py = backend.get_backend("python")
        cy = backend.get_backend("cython")
        rng = np.random.default_rng(17)
        nus = np.concatenate([rng.uniform(-0.99, 10, 120), rng.uniform(10, 30, 40)])
        xs = np.concatenate([rng.uniform(0, 30, 120), rng.uniform(30, 1600, 40)])
        for nu, x in zip(nus, xs):
            assert abs(cy.jv_scalar(nu, x) - py.jv_scalar(nu, x)) < 2e-10

    def test_array_parity(self):
        py = backend.get_backend("python")
        cy = backend.get_backend("cython")
        x = np.ascontiguousarray(np.linspace(0.0, 200.0, 4001))
        a = np.empty_like(x)
        b = np.empty_like(x)
        cy.jv_array(1.7, x, a)
        py.jv_array(1.7, x, b)
        assert np.abs(a - b).max() < 2e-10

    def test_outer_parity(self):
        py = backend.get_backend("python")
        cy = backend.get_backend("cython")
        e = np.ascontiguousarray(np.linspace(0.01, 40.0, 80))
        r = np.ascontiguousarray(np.linspace(0.01, 40.0, 90))
        a = np.empty((80, 90))
        b = np.empty((80, 90))
        cy.jv_outer(0.3, e, r, a)
        py.jv_outer(0.3, e, r, b)
        assert np.abs(a - b).max() < 2e-10


class TestBackendSelection:
    def test_active_backend_reported(self):
        assert backend.BACKEND in ("cython", "python")

    def test_forced_python_backend_subprocess(self):
        code = ("import abdirac, sys; "
                "sys.exit(0 if abdirac.BACKEND == 'python' else 3)")
        env = dict(os.environ, ABDIRAC_BACKEND="python")
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              cwd=str(Path(__file__).parent.parent))
        assert proc.returncode == 0

    def test_bad_backend_name_rejected(self):
        code = "import abdirac"
        env = dict(os.environ, ABDIRAC_BACKEND="fortran")
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True,
                              cwd=str(Path(__file__).parent.parent))
        assert proc.returncode != 0

    def test_python_backend_passes_core_math(self):
        # transform isometry through the fallback path, in-process
        py = backend.get_backend("python")
        from abdirac import backend as bk
        orig = (bk.jv_scalar, bk.jv_array, bk.jv_outer)
        try:
            bk.jv_scalar, bk.jv_array, bk.jv_outer = \
                py.jv_scalar, py.jv_array, py.jv_outer
            from abdirac import spectral
            from abdirac.grids import l2_norm, make_energy_grid, make_radial_grid
            from abdirac.sampling import gaussian_bump
            spectral.clear_caches()
            rg = make_radial_grid(40.0, 800)
            eg = make_energy_grid(40.0, 800)
            op = spectral.TransformOperator(spectral.Channel(0, 0.3), rg, eg)
            phi = gaussian_bump(rg, 8.0, 1.0)
            err = abs(op.forward(phi).norm() - l2_norm(phi)) / l2_norm(phi)
            assert err < 1e-3
        finally:
            bk.jv_scalar, bk.jv_array, bk.jv_outer = orig
            from abdirac import spectral
            spectral.clear_caches()
