"""Quadrature grids for the measures r dr and E dE, and radial spinors.

The measure weight (r or E) is folded into the quadrature weights at
construction, so ``sum(w * f(nodes))`` approximates the measured integral
directly. The origin is never a node: eigenfunctions carry fractional powers
r^{|l+alpha|} and the estimate weights |x|^{-gamma} are singular there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

GAUSS_PANEL_NODES = 8
SCHEMES = ("composite-gauss", "uniform-trapezoid")

# Default desk-scale grids: resolve J_nu(E r) oscillations up to E*r ~ 1600.
DEFAULT_MAX = 40.0
DEFAULT_N = 4000


def _composite_gauss(upper: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n % GAUSS_PANEL_NODES:
        raise ParameterError(
            f"composite-gauss needs n divisible by {GAUSS_PANEL_NODES}, got {n}")
    n_panels = n // GAUSS_PANEL_NODES
    xg, wg = np.polynomial.legendre.leggauss(GAUSS_PANEL_NODES)
    edges = np.linspace(0.0, upper, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    base = (half[:, None] * wg[None, :]).ravel()
    return nodes, base


def _uniform_trapezoid(upper: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes h, 2h, ..., upper; the measured integrand vanishes at 0, so the
    # trapezoid rule on [0, upper] gives full weight h to every interior node.
    h = upper / n
    nodes = h * np.arange(1, n + 1)
    base = np.full(n, h)
    base[-1] = 0.5 * h
    return nodes, base


def _build(upper: float, n: int, scheme: str) -> tuple[np.ndarray, np.ndarray]:
    if upper <= 0.0:
        raise ParameterError(f"grid upper bound must be positive, got {upper}")
    if n < 16:
        raise ParameterError(f"grid needs n >= 16, got {n}")
    if scheme == "composite-gauss":
        nodes, base = _composite_gauss(upper, n)
    elif scheme == "uniform-trapezoid":
        nodes, base = _uniform_trapezoid(upper, n)
    else:
        raise ParameterError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    weights = base * nodes  # fold in the measure
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class RadialGrid:
    """Nodes r_j > 0 and weights w_j for integrals against r dr."""

    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    scheme: str

    @property
    def n(self) -> int:
        return self.nodes.size

    def key(self) -> tuple:
        """Hashable identity used by the transform-matrix cache."""
        return ("r", self.scheme, self.n, float(self.r_max))


@dataclass(frozen=True)
class EnergyGrid:
    """Nodes E_k > 0 and weights for integrals against E dE."""

    nodes: np.ndarray
    weights: np.ndarray
    e_max: float
    scheme: str

    @property
    def n(self) -> int:
        return self.nodes.size

    def key(self) -> tuple:
        return ("E", self.scheme, self.n, float(self.e_max))


def make_radial_grid(r_max: float = DEFAULT_MAX, n: int = DEFAULT_N,
                     scheme: str = "composite-gauss") -> RadialGrid:
    nodes, weights = _build(r_max, n, scheme)
    return RadialGrid(nodes, weights, float(r_max), scheme)


def make_energy_grid(e_max: float = DEFAULT_MAX, n: int = DEFAULT_N,
                     scheme: str = "composite-gauss") -> EnergyGrid:
    nodes, weights = _build(e_max, n, scheme)
    return EnergyGrid(nodes, weights, float(e_max), scheme)


@dataclass
class RadialSpinor:
    """One partial-wave channel: radial components (f, g) on a RadialGrid."""

    grid: RadialGrid
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=complex)
        self.g = np.asarray(self.g, dtype=complex)
        if self.f.shape != (self.grid.n,) or self.g.shape != (self.grid.n,):
            raise ParameterError("component length must match the grid")

    @classmethod
    def zero(cls, grid: RadialGrid) -> "RadialSpinor":
        return cls(grid, np.zeros(grid.n, complex), np.zeros(grid.n, complex))

    def copy(self) -> "RadialSpinor":
        return RadialSpinor(self.grid, self.f.copy(), self.g.copy())

    def __add__(self, other: "RadialSpinor") -> "RadialSpinor":
        return RadialSpinor(self.grid, self.f + other.f, self.g + other.g)

    def __sub__(self, other: "RadialSpinor") -> "RadialSpinor":
        return RadialSpinor(self.grid, self.f - other.f, self.g - other.g)

    def __mul__(self, scalar) -> "RadialSpinor":
        return RadialSpinor(self.grid, scalar * self.f, scalar * self.g)

    __rmul__ = __mul__

    def time_reflected(self) -> "RadialSpinor":
        """sigma_3-conjugate (f*, -g*): evolves forward like `self` backward."""
        return RadialSpinor(self.grid, np.conj(self.f), -np.conj(self.g))


def l2_norm(phi: RadialSpinor) -> float:
    """sqrt( sum_j w_j (|f_j|^2 + |g_j|^2) )."""
    w = phi.grid.weights
    return float(np.sqrt(np.sum(w * (np.abs(phi.f) ** 2 + np.abs(phi.g) ** 2))))


def inner(phi: RadialSpinor, psi: RadialSpinor) -> complex:
    """Conjugate-linear-in-first-slot inner product on L^2(r dr)^2."""
    w = phi.grid.weights
    return complex(np.sum(w * (np.conj(phi.f) * psi.f + np.conj(phi.g) * psi.g)))


def spectral_norm(coeff_plus: np.ndarray, coeff_minus: np.ndarray,
                  egrid: EnergyGrid) -> float:
    w = egrid.weights
    return float(np.sqrt(np.sum(w * (np.abs(coeff_plus) ** 2 + np.abs(coeff_minus) ** 2))))
