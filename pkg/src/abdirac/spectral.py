"""Generalized eigenfunctions, the radial Dirac operator, and its
diagonalizing Bessel-type transform.

Channel conventions
-------------------
For circulation alpha and angular index l, put k = l + alpha. The radial
operator on the channel is::

    D_l = [[0,                        -i(d/dr + (k+1)/r)],
           [-i(d/dr - k/r),            0                ]]

Its generalized eigenfunctions at energy E > 0 are Bessel pairs. Two order
conventions are carried per channel:

* ``paper``: orders (|k|, |k+1|) with relative phase i*eps_l. This is the
  literal published form; for k >= 0 and k <= -1 it solves D_l chi = E chi.
* ``eigen``: the pair that solves the eigenvalue problem in every channel,
  including the critical range -1 < k < 0 where the paper form does not
  close the Bessel recurrence ladder: (J_k, i J_{k+1}) for k > -1/2 and
  (J_{-k}, -i J_{-k-1}) for k <= -1/2 (the self-adjoint realization whose
  singular component has the weaker origin singularity).

The two coincide whenever k >= 0 or k <= -1.

Transform
---------
With a = H_{of}[phi_1], b = H_{og}[phi_2] (scalar Hankel transforms of the
components at the channel orders) the transform and its inverse are::

    P+ = (a - i c b)/sqrt(2),   P- = -(a + i c b)/sqrt(2)
    phi_1 = H_{of}[(P+ - P-)/sqrt(2)],  phi_2 = H_{og}[i c (P+ + P-)/sqrt(2)]

where c is the channel's relative phase. P is exactly unitary
L^2(r dr)^2 -> L^2(E dE)^2; relative to the paper's sqrt(pi/2)-normalized
eigenfunction pairing this is a factor 1/sqrt(pi) (TRANSFORM_NORMALIZATION).

Diagonalization: P D_l = diag(E, -E) P — the minus component carries
eigenvalue -E (MULTIPLIER_SIGNS), settled against the time-stepping oracle.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ParameterError
from .grids import EnergyGrid, RadialGrid, RadialSpinor

#: multiplier signs of P D_l P^{-1} = diag(+E, -E) on the (plus, minus) pair
MULTIPLIER_SIGNS = (+1.0, -1.0)

#: the package transform equals (1/sqrt(pi)) x the paper's eigenfunction pairing
TRANSFORM_NORMALIZATION = 1.0 / math.sqrt(math.pi)

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_SQRT_PI_HALF = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class Channel:
    """One partial-wave channel (l, alpha) with derived order bookkeeping."""

    l: int
    alpha: float

    @property
    def k(self) -> float:
        return self.l + self.alpha

    @property
    def eps_l(self) -> float:
        return 1.0 if self.k >= 0.0 else -1.0

    @property
    def nu_f(self) -> float:
        return abs(self.k)

    @property
    def nu_g(self) -> float:
        return abs(self.k + 1.0)

    @property
    def critical(self) -> bool:
        return -1.0 < self.k < 0.0

    def orders(self, convention: str = "paper") -> tuple[float, float, float]:
        """(order_f, order_g, c): Bessel orders and relative phase i*c of g.

        convention "paper": unsigned orders (|k|, |k+1|), c = eps_l.
        convention "eigen": the solving pair (see module docstring).
        """
        k = self.k
        if convention == "paper":
            return self.nu_f, self.nu_g, self.eps_l
        if convention != "eigen":
            raise ParameterError(f"unknown order convention {convention!r}")
        if k >= 0.0 or (self.critical and k > -0.5):
            return k, k + 1.0, 1.0
        return -k, -(k + 1.0), -1.0


@dataclass(frozen=True)
class FieldSetup:
    """Circulation alpha with derived channel bookkeeping."""

    alpha: float

    @property
    def mu0(self) -> float:
        """Distance from alpha to the nearest integer, clamped to [0, 1/2]."""
        return min(abs(self.alpha - round(self.alpha)), 0.5)

    def channel(self, l: int) -> Channel:
        return Channel(int(l), self.alpha)

    def channels(self, l_min: int, l_max: int) -> list[Channel]:
        return [self.channel(l) for l in range(l_min, l_max + 1)]


@dataclass
class SpectralCoeff:
    """Transform output: (P+ phi, P- phi) sampled on an EnergyGrid."""

    grid: EnergyGrid
    plus: np.ndarray
    minus: np.ndarray

    def __post_init__(self):
        self.plus = np.asarray(self.plus, dtype=complex)
        self.minus = np.asarray(self.minus, dtype=complex)
        if self.plus.shape != (self.grid.n,) or self.minus.shape != (self.grid.n,):
            raise ParameterError("coefficient length must match the energy grid")

    def copy(self) -> "SpectralCoeff":
        return SpectralCoeff(self.grid, self.plus.copy(), self.minus.copy())

    def __add__(self, other: "SpectralCoeff") -> "SpectralCoeff":
        return SpectralCoeff(self.grid, self.plus + other.plus, self.minus + other.minus)

    def norm(self) -> float:
        w = self.grid.weights
        return float(np.sqrt(np.sum(w * (np.abs(self.plus) ** 2 + np.abs(self.minus) ** 2))))


# ---------------------------------------------------------------------------
# Bessel-matrix cache with neighbor-recurrence derivation
# ---------------------------------------------------------------------------

_MATRIX_CACHE: OrderedDict = OrderedDict()
_MATRIX_CACHE_SIZE = 6
_PROD_CACHE: OrderedDict = OrderedDict()
_PROD_CACHE_SIZE = 2

# upward order recurrence is contaminated where x < order + margin
_RECURRENCE_MARGIN = 8.0


def _products(egrid: EnergyGrid, rgrid: RadialGrid) -> np.ndarray:
    key = (egrid.key(), rgrid.key())
    if key in _PROD_CACHE:
        _PROD_CACHE.move_to_end(key)
        return _PROD_CACHE[key]
    x = np.multiply.outer(egrid.nodes, rgrid.nodes)
    _PROD_CACHE[key] = x
    while len(_PROD_CACHE) > _PROD_CACHE_SIZE:
        _PROD_CACHE.popitem(last=False)
    return x


def clear_caches():
    _MATRIX_CACHE.clear()
    _PROD_CACHE.clear()


def bessel_matrix(order: float, egrid: EnergyGrid, rgrid: RadialGrid) -> np.ndarray:
    """J_order(E_i r_j) on the grid product, cached.

    When the two next-lower orders are cached, the matrix is derived from the
    three-term recurrence J_nu = (2(nu-1)/x) J_{nu-1} - J_{nu-2}, with the
    strip x < nu + 8 (where upward recurrence is contaminated by the Y_nu
    admixture) recomputed directly.
    """
    order = float(order)
    key = (round(order, 10), egrid.key(), rgrid.key())
    if key in _MATRIX_CACHE:
        _MATRIX_CACHE.move_to_end(key)
        return _MATRIX_CACHE[key]

    k1 = (round(order - 1.0, 10), egrid.key(), rgrid.key())
    k2 = (round(order - 2.0, 10), egrid.key(), rgrid.key())
    if k1 in _MATRIX_CACHE and k2 in _MATRIX_CACHE:
        x = _products(egrid, rgrid)
        out = (2.0 * (order - 1.0) / x) * _MATRIX_CACHE[k1]
        out -= _MATRIX_CACHE[k2]
        strip = x < (order + _RECURRENCE_MARGIN)
        if strip.any():
            vals = np.empty(int(strip.sum()))
            backend.jv_array(order, np.ascontiguousarray(x[strip]), vals)
            out[strip] = vals
    else:
        out = np.empty((egrid.n, rgrid.n))
        backend.jv_outer(order, egrid.nodes, rgrid.nodes, out)

    out.setflags(write=False)
    _MATRIX_CACHE[key] = out
    while len(_MATRIX_CACHE) > _MATRIX_CACHE_SIZE:
        _MATRIX_CACHE.popitem(last=False)
    return out


def _rmatmul(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Real-matrix @ complex-vector/matrix without complex upcasting of m.

    The real/imag parts are materialized contiguously: strided views of a
    complex array would push numpy off the BLAS fast path (measured 10-50x).
    """
    if np.iscomplexobj(x):
        out = m @ np.ascontiguousarray(x.real)
        out = out.astype(complex)
        out += 1j * (m @ np.ascontiguousarray(x.imag))
        return out
    return m @ x


# ---------------------------------------------------------------------------
# Eigenfunctions and the radial operator
# ---------------------------------------------------------------------------

def eigenfunction(ch: Channel, energy: float, grid: RadialGrid,
                  convention: str = "eigen") -> RadialSpinor:
    """Generalized eigenfunction chi_{l,E} sampled on the grid.

    chi = sqrt(pi/2) * eps_l^l * (J_of(Er), i c J_og(Er)); for negative
    energy use the relations f_{l,-E} = f_{l,E}, g_{l,-E} = -g_{l,E}.
    """
    if energy == 0.0:
        raise ParameterError("eigenfunction needs E != 0")
    of, og, c = ch.orders(convention)
    e_abs = abs(energy)
    x = np.ascontiguousarray(e_abs * grid.nodes)
    jf = np.empty_like(x)
    jg = np.empty_like(x)
    backend.jv_array(of, x, jf)
    backend.jv_array(og, x, jg)
    phase = _SQRT_PI_HALF * ch.eps_l ** ch.l
    sign_g = 1.0 if energy > 0 else -1.0
    return RadialSpinor(grid, phase * jf, 1j * c * phase * sign_g * jg)


def eigen_matrix(ch: Channel, energy: float, r: float,
                 convention: str = "paper") -> np.ndarray:
    """The 2x2 matrix H_l(E r): rows (f_{l,E}, g_{l,E}) and (-f_{l,-E}, -g_{l,-E})."""
    of, og, c = ch.orders(convention)
    x = abs(energy) * r
    jf = _SQRT_PI_HALF * ch.eps_l ** ch.l * backend.jv_scalar(of, x)
    jg = _SQRT_PI_HALF * ch.eps_l ** ch.l * 1j * c * backend.jv_scalar(og, x)
    return np.array([[jf, jg], [-jf, jg]])


def radial_derivative(y: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Second-order first derivative on (possibly nonuniform) nodes."""
    return np.gradient(y, r, edge_order=2)


def apply_radial_dirac(ch: Channel, phi: RadialSpinor) -> RadialSpinor:
    """D_l phi by centered second-order differences (one-sided at the ends)."""
    r = phi.grid.nodes
    k = ch.k
    df = radial_derivative(phi.f, r)
    dg = radial_derivative(phi.g, r)
    out_f = -1j * (dg + (k + 1.0) / r * phi.g)
    out_g = -1j * (df - k / r * phi.f)
    return RadialSpinor(phi.grid, out_f, out_g)


# ---------------------------------------------------------------------------
# The transform
# ---------------------------------------------------------------------------

class TransformOperator:
    """P_l on fixed grids: holds the two Bessel matrices of one channel.

    `forward`/`inverse` work on single spinors; `forward_many`/`inverse_many`
    batch columns through BLAS for sweeps.
    """

    def __init__(self, ch: Channel, rgrid: RadialGrid, egrid: EnergyGrid,
                 convention: str = "paper"):
        self.channel = ch
        self.rgrid = rgrid
        self.egrid = egrid
        self.convention = convention
        self.order_f, self.order_g, self.c = ch.orders(convention)
        self.mf = bessel_matrix(self.order_f, egrid, rgrid)
        self.mg = bessel_matrix(self.order_g, egrid, rgrid)

    def forward_many(self, f: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        wf = self.rgrid.weights[:, None] * f if f.ndim == 2 else self.rgrid.weights * f
        wg = self.rgrid.weights[:, None] * g if g.ndim == 2 else self.rgrid.weights * g
        a = _rmatmul(self.mf, wf)
        b = _rmatmul(self.mg, wg)
        ic_b = (1j * self.c) * b
        plus = _SQRT_HALF * (a - ic_b)
        minus = -_SQRT_HALF * (a + ic_b)
        return plus, minus

    def inverse_many(self, plus: np.ndarray, minus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        wp = self.egrid.weights[:, None] * plus if plus.ndim == 2 else self.egrid.weights * plus
        wm = self.egrid.weights[:, None] * minus if minus.ndim == 2 else self.egrid.weights * minus
        ta = _SQRT_HALF * (wp - wm)
        tb = (1j * self.c * _SQRT_HALF) * (wp + wm)
        f = _rmatmul(self.mf.T, ta)
        g = _rmatmul(self.mg.T, tb)
        return f, g

    def forward(self, phi: RadialSpinor) -> SpectralCoeff:
        plus, minus = self.forward_many(phi.f, phi.g)
        return SpectralCoeff(self.egrid, plus, minus)

    def inverse(self, coeff: SpectralCoeff) -> RadialSpinor:
        f, g = self.inverse_many(coeff.plus, coeff.minus)
        return RadialSpinor(self.rgrid, f, g)


def forward_transform(ch: Channel, phi: RadialSpinor, egrid: EnergyGrid,
                      convention: str = "paper") -> SpectralCoeff:
    """P_l phi: componentwise conjugated pairing with chi_{l,+-E} against r dr."""
    return TransformOperator(ch, phi.grid, egrid, convention).forward(phi)


def inverse_transform(ch: Channel, coeff: SpectralCoeff, rgrid: RadialGrid,
                      convention: str = "paper") -> RadialSpinor:
    """P_l^{-1}: kernel-transposed pairing against E dE."""
    return TransformOperator(ch, rgrid, coeff.grid, convention).inverse(coeff)
