"""Kernel backend selection: compiled Cython core with pure-Python fallback.

The compiled module ``abdirac._kernels`` carries the hot loops (Bessel-matrix
assembly for the diagonalizing transforms). If it failed to build, or if the
environment variable ``ABDIRAC_BACKEND`` is set to ``"python"``, the
scipy-backed fallback is used instead. ``ABDIRAC_BACKEND="cython"`` demands
the compiled core and raises if it is missing.

Both backends implement::

    jv_scalar(nu, x) -> float
    jv_array(nu, x, out)          # out[i]   = J_nu(x[i])
    jv_outer(nu, a, b, out)       # out[i,j] = J_nu(a[i]*b[j])

for real order nu > -1.
"""

import os

_requested = os.environ.get("ABDIRAC_BACKEND", "auto").lower()

if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"ABDIRAC_BACKEND must be auto|cython|python, got {_requested!r}")

if _requested == "python":
    from . import _purepy as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _purepy as _impl

        BACKEND = "python"

jv_scalar = _impl.jv_scalar
jv_array = _impl.jv_array
jv_outer = _impl.jv_outer


def get_backend(name=None):
    """Return the backend module for `name` ("cython"/"python"/None=active)."""
    if name is None or name == BACKEND:
        return _impl
    if name == "python":
        from . import _purepy

        return _purepy
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
