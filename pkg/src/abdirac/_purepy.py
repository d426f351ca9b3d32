"""Pure-Python (scipy-backed) fallback for the compiled kernels.

Same call signatures as ``abdirac._kernels``; selected at import time by
:mod:`abdirac.backend` when the extension is unavailable or when
``ABDIRAC_BACKEND=python`` is set.
"""

import numpy as np
import scipy.special as _sp


def jv_scalar(nu, x):
    if x <= 0.0:
        return 1.0 if nu == 0.0 else 0.0
    return float(_sp.jv(nu, x))


def jv_array(nu, x, out):
    np.copyto(out, _sp.jv(nu, x))
    if nu != 0.0:
        out[x <= 0.0] = 0.0
    else:
        out[x <= 0.0] = 1.0


def jv_outer(nu, a, b, out):
    np.multiply.outer(a, b, out=out)
    np.copyto(out, _sp.jv(nu, out))
