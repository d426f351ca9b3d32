"""Special functions behind the closed forms: Gamma, Pochhammer, Gauss 2F1, Bessel J.

All functions are real-valued on real arguments. Bessel evaluation dispatches
to the active kernel backend (compiled core or scipy fallback, see
:mod:`abdirac.backend`); Gamma and 2F1 are self-contained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ConvergenceError, DivergenceError, DomainError, ParameterError, PoleError

# Lanczos approximation, g = 7, n = 9 (double-precision classic set).
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_2PI = 2.5066282746310002


def _is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x <= 0.5 and abs(x - round(x)) < tol


def gamma_fn(x: float) -> float:
    """Gamma(x) via Lanczos approximation; reflection formula for x < 0.5.

    Raises
    ------
    PoleError
        If x is a nonpositive integer.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma pole at x={x}")
    if x < 0.5:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc


def gamma_ratio(num: float, den: float) -> float:
    """Gamma(num)/Gamma(den), both arguments away from poles."""
    return gamma_fn(num) / gamma_fn(den)


def pochhammer(q: float, n: int) -> float:
    """Rising factorial (q)_n = q (q+1) ... (q+n-1)."""
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    out = 1.0
    for i in range(n):
        out *= q + i
    return out


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters (a, b; c) of the Gauss hypergeometric series.

    ``converges_at_one`` records whether c - a - b > 0, the condition for the
    series to converge at z = 1.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise ParameterError(f"2F1 undefined for c={self.c} (nonpositive integer)")

    @property
    def converges_at_one(self) -> bool:
        return self.c - self.a - self.b > 0


def _as_params(p) -> HypergeometricParams:
    if isinstance(p, HypergeometricParams):
        return p
    a, b, c = p
    return HypergeometricParams(float(a), float(b), float(c))


def _series_2f1(a: float, b: float, c: float, z: float, rtol: float = 1e-16,
                max_terms: int = 20000) -> float:
    term = 1.0
    acc = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        acc += term
        if abs(term) <= rtol * abs(acc):
            return acc
    raise ConvergenceError(f"2F1 series did not converge at z={z}")


def gauss_2f1(p, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) on 0 <= z < 1.

    Direct series for z <= 0.9; for z in (0.9, 1) the linear transformation
    toward argument 1-z is used (it fails with a ConvergenceError when
    c - a - b is an integer, where the transformation degenerates).
    """
    p = _as_params(p)
    z = float(z)
    if not 0.0 <= z < 1.0:
        raise DomainError(f"gauss_2f1 needs 0 <= z < 1, got {z}")
    if z == 0.0:
        return 1.0
    a, b, c = p.a, p.b, p.c
    if z <= 0.9:
        return _series_2f1(a, b, c, z)
    s = c - a - b
    if abs(s - round(s)) < 1e-8:
        raise ConvergenceError(
            f"linear transformation degenerates: c-a-b={s} is (near-)integer")
    w = 1.0 - z
    # 2F1(a,b;c;z) = G1 * 2F1(a,b;a+b-c+1;1-z) + G2 * (1-z)^(c-a-b) * 2F1(c-a,c-b;c-a-b+1;1-z)
    g1 = gamma_fn(c) * gamma_fn(s) / (gamma_fn(c - a) * gamma_fn(c - b))
    g2 = gamma_fn(c) * gamma_fn(-s) / (gamma_fn(a) * gamma_fn(b))
    return g1 * _series_2f1(a, b, a + b - c + 1.0, w) + \
        g2 * w ** s * _series_2f1(c - a, c - b, s + 1.0, w)


def gauss_2f1_at_one(p) -> float:
    """2F1(a, b; c; 1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).

    Raises
    ------
    DivergenceError
        When c - a - b <= 0 (the series diverges at z = 1).
    """
    p = _as_params(p)
    if not p.converges_at_one:
        raise DivergenceError(
            f"2F1 diverges at z=1 for c-a-b={p.c - p.a - p.b} <= 0")
    return gamma_fn(p.c) * gamma_fn(p.c - p.a - p.b) / (
        gamma_fn(p.c - p.a) * gamma_fn(p.c - p.b))


@dataclass(frozen=True)
class BesselOrder:
    """Bessel order. The package evaluates orders > -1 (signed orders in the
    critical partial-wave channel reach into (-1, 0))."""

    nu: float

    def __post_init__(self):
        if not self.nu > -1.0:
            raise DomainError(f"Bessel order must be > -1, got {self.nu}")


def bessel_j(order, x):
    """Bessel function J_nu(x) for order nu > -1 and x >= 0.

    Accepts a float or :class:`BesselOrder` for `order`, scalar or ndarray
    for `x`. At x = 0: 1 for nu = 0, 0 for nu > 0; for nu < 0 the origin is a
    singular point and raises.
    """
    nu = order.nu if isinstance(order, BesselOrder) else float(order)
    if not nu > -1.0:
        raise DomainError(f"Bessel order must be > -1, got {nu}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("bessel_j needs x >= 0")
    if nu < 0.0 and np.any(arr == 0.0):
        raise DomainError(f"J_nu singular at x=0 for nu={nu} < 0")
    if arr.ndim == 0:
        return backend.jv_scalar(nu, float(arr))
    flat = np.ascontiguousarray(arr.ravel())
    out = np.empty_like(flat)
    backend.jv_array(nu, flat, out)
    return out.reshape(arr.shape)


def bessel_j_outer(order, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix J_nu(a[i] * b[j]); the transform-assembly primitive."""
    nu = order.nu if isinstance(order, BesselOrder) else float(order)
    if not nu > -1.0:
        raise DomainError(f"Bessel order must be > -1, got {nu}")
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    out = np.empty((a.size, b.size))
    backend.jv_outer(nu, a, b, out)
    return out
