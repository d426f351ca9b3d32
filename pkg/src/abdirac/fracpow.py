"""Fractional powers of the radial operator: spectral route and closed-form kernels.

The integral kernel of the channel operator raised to a power is, entrywise,

    S_l^g(r, s) = integral_0^inf H_l(E r) . H_l^*(E s) E^{1+g} dE
                = [[F, G], [G, F]],   F = A + B,  G = -A + B,

with A and B the even Weber-Schafheitlin integrals of the channel's two
Bessel orders (paper normalization sqrt(pi/2) on the eigenfunctions, so
A = (pi/2) W(order_f), B = (pi/2) W(order_g)). `g` is the literal exponent
of the E^{1+g} measure; the closed form converges for

    -2 - 2*min(order_f, order_g) < g < 0.

The local-smoothing application selects g = -2*gamma with gamma > 1/2.

The runtime path for applying a fractional power is the spectral route
(transform, multiply by E^gamma, invert); the kernel is the test oracle.

Note on the matrix structure: |D_l|^g itself acts componentwise — its kernel
is the diagonal pair (2A/pi, 2B/pi), since |D_l|^2 decouples into the two
Bessel operators of orders (order_f, order_g). The assembled F/G matrix is
the published composition integral H(Er) . H*(Es) E^{1+g} dE, which equals
the diagonal form conjugated by the constant unitary [[1, 1], [-1, 1]]/sqrt(2);
both share the diagonal values and trace that enter the smoothing bound.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.special as _sp

from .errors import ConvergenceError, DomainError, ParameterError
from .grids import EnergyGrid, RadialSpinor
from .partialwave import ChannelSet
from .specfun import bessel_j, gamma_fn, gauss_2f1, gauss_2f1_at_one
from .spectral import Channel, TransformOperator

from dataclasses import dataclass


@dataclass(frozen=True)
class KernelValue:
    """Entries of the symmetric-role 2x2 kernel ((F, G), (G, F)) at (r, s)."""

    F: float
    G: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.F, self.G], [self.G, self.F]])


@dataclass(frozen=True)
class KernelABParts:
    """A/B split: F = A + B, G = -A + B."""

    A: float
    B: float

    @property
    def F(self) -> float:
        return self.A + self.B

    @property
    def G(self) -> float:
        return -self.A + self.B


def weber_schafheitlin(nu: float, mu: float, lam: float, r: float, s: float) -> float:
    """Closed form of integral_0^inf J_nu(r t) J_mu(s t) t^{-lam} dt, 0 < r < s.

    Requires nu + mu - lam + 1 > 0 and lam > -1.
    """
    if not 0.0 < r:
        raise DomainError("weber_schafheitlin needs r > 0")
    if r >= s:
        raise DomainError(
            f"weber_schafheitlin needs r < s (got r={r}, s={s}); "
            "swap the roles of r and s for the other region")
    if nu + mu - lam + 1.0 <= 0.0:
        raise ParameterError(
            f"convergence range violated: nu+mu-lam+1 = {nu + mu - lam + 1.0} <= 0")
    if lam <= -1.0:
        raise ParameterError(f"convergence range violated: lam = {lam} <= -1")
    a = 0.5 * (nu + mu - lam + 1.0)
    b = 0.5 * (nu - mu - lam + 1.0)
    c = nu + 1.0
    pref = r ** nu * gamma_fn(a) / (
        2.0 ** lam * s ** (nu - lam + 1.0)
        * gamma_fn(0.5 * (-nu + mu + lam + 1.0)) * gamma_fn(c))
    return pref * gauss_2f1((a, b, c), (r / s) ** 2)


def weber_schafheitlin_quadrature(nu: float, mu: float, lam: float,
                                  r: float, s: float,
                                  deltas=(0.02, 0.01, 0.005),
                                  points_per_radian: float = 4.0) -> tuple[float, float]:
    """Oracle for the closed form: damped quadrature plus delta -> 0 Richardson.

    Integrates J_nu(r t) J_mu(s t) t^{-lam} e^{-delta t} dt on composite
    Gauss panels sized to the (r+s) oscillation, then extrapolates linearly
    from the two smallest deltas. Returns (value, instability estimate); the
    estimate compares extrapolations from consecutive delta pairs.
    """
    deltas = sorted(set(float(d) for d in deltas), reverse=True)
    if any(d < 0 for d in deltas):
        raise DomainError("deltas must be >= 0")
    if deltas == [0.0]:
        t_max = 2000.0 / max(s - r, 0.05)
    else:
        t_max = 28.0 / min(d for d in deltas if d > 0)
    # head (0, t0]: the integrand is t^{nu+mu-lam} x analytic; a Gauss-Jacobi
    # rule with that exact endpoint power avoids the algebraic-singularity
    # error a plain panel would make
    t0 = min(2.5 / (r + s), 1.0)
    beta = nu + mu - lam
    xj, wj = _sp.roots_jacobi(48, 0.0, beta)
    tj = t0 * 0.5 * (xj + 1.0)
    smooth = bessel_j(nu, r * tj) * bessel_j(mu, s * tj) / tj ** (nu + mu)
    jac_scale = (t0 * 0.5) ** (beta + 1.0)
    # body [t0, t_max]: composite Gauss, <= 2.5 radians of (r+s)t per panel
    width = 2.5 / (r + s)
    n_panels = max(64, int(np.ceil((t_max - t0) / width)))
    xg, wg = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(t0, t_max, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    t = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    core = bessel_j(nu, r * t) * bessel_j(mu, s * t) * t ** (-lam) * w
    vals = [jac_scale * float(np.sum(wj * smooth * np.exp(-d * tj)))
            + float(np.sum(core * np.exp(-d * t)))
            for d in deltas]
    if len(deltas) == 1:
        return vals[0], 0.0
    # polynomial extrapolation to delta = 0: quadratic through three damped
    # values when available (the two-point Richardson residual c2*d1*d2 is
    # too large at the 1e-3 target), two-point otherwise
    pairwise = [v2 + (v2 - v1) * d2 / (d1 - d2)
                for (d1, v1), (d2, v2)
                in zip(zip(deltas, vals), zip(deltas[1:], vals[1:]))]
    if len(deltas) >= 3:
        coeffs = np.linalg.solve(np.vander(np.asarray(deltas[-3:]), 3),
                                 np.asarray(vals[-3:]))
        value = float(coeffs[-1])
    else:
        value = pairwise[-1]
    return value, abs(value - pairwise[-1])


def _check_kernel_power(ch: Channel, power: float, convention: str) -> tuple[float, float]:
    of, og, _ = ch.orders(convention)
    low = -2.0 - 2.0 * min(of, og)
    if not low < power < 0.0:
        raise ParameterError(
            f"kernel power must lie in ({low}, 0) for channel orders "
            f"({of}, {og}); got {power}")
    return of, og


def _ws_even(order: float, power: float, r: float, s: float) -> float:
    """(pi/2) * integral J_order(Er) J_order(Es) E^{1+power} dE, 0 < r < s."""
    return 0.5 * math.pi * weber_schafheitlin(order, order, -1.0 - power, r, s)


def kernel_closed_form(ch: Channel, power: float, r: float, s: float,
                       convention: str = "paper") -> KernelValue:
    """Closed-form kernel entries via the Weber-Schafheitlin formula.

    `power` is the literal exponent g of the E^{1+g} spectral measure.
    """
    if not 0.0 < r < s:
        raise DomainError(
            f"kernel_closed_form needs 0 < r < s (got r={r}, s={s}); the "
            "region r > s follows from S(r,s)^T = S(s,r)")
    of, og = _check_kernel_power(ch, power, convention)
    parts = KernelABParts(A=_ws_even(of, power, r, s), B=_ws_even(og, power, r, s))
    return KernelValue(F=parts.F, G=parts.G)


def kernel_ab_parts(ch: Channel, power: float, r: float, s: float,
                    convention: str = "paper") -> KernelABParts:
    of, og = _check_kernel_power(ch, power, convention)
    return KernelABParts(A=_ws_even(of, power, r, s), B=_ws_even(og, power, r, s))


def _ws_even_diagonal(order: float, power: float, tau: float) -> float:
    """(pi/2) W(order) at r = s = tau: the 2F1 factor becomes its z=1 value
    (needs power < -1) and both prefactor ratios reduce to tau^{-power-2}."""
    a = order + 0.5 * power + 1.0
    b = 0.5 * power + 1.0
    c = order + 1.0
    pref = 2.0 ** (1.0 + power) * gamma_fn(a) / (gamma_fn(-0.5 * power) * gamma_fn(c))
    return 0.5 * math.pi * pref * tau ** (-power - 2.0) * gauss_2f1_at_one((a, b, c))


def kernel_diagonal(ch: Channel, power: float, tau: float,
                    convention: str = "paper") -> KernelValue:
    """Closed-form kernel entries at coincidence r = s = tau (power < -1)."""
    if power >= -1.0:
        raise ParameterError(
            f"the diagonal kernel value converges only for power < -1, got {power}")
    of, og = _check_kernel_power(ch, power, convention)
    a_val = _ws_even_diagonal(of, power, tau)
    b_val = _ws_even_diagonal(og, power, tau)
    return KernelValue(F=a_val + b_val, G=-a_val + b_val)


def kernel_quadrature(ch: Channel, power: float, r: float, s: float,
                      deltas=(0.02, 0.01, 0.005),
                      convention: str = "paper",
                      instability_tol: float = 5e-3) -> KernelValue:
    """Independent oracle for `kernel_closed_form`: damped E-quadrature.

    Evaluates (pi/2) * integral (J_of(Er) J_of(Es) +- J_og(Er) J_og(Es))
    E^{1+power} e^{-delta E} dE and extrapolates delta -> 0. Raises
    ConvergenceError when the extrapolation is unstable.
    """
    if r == s:
        raise DomainError("kernel_quadrature needs r != s")
    lo, hi = min(r, s), max(r, s)
    of, og, _ = ch.orders(convention)
    lam = -1.0 - power
    a_val, a_err = weber_schafheitlin_quadrature(of, of, lam, lo, hi, deltas)
    b_val, b_err = weber_schafheitlin_quadrature(og, og, lam, lo, hi, deltas)
    scale = 0.5 * math.pi
    ref = abs(a_val) + abs(b_val) + 1e-300
    if (a_err + b_err) / ref > instability_tol:
        raise ConvergenceError(
            f"delta extrapolation unstable: spread {(a_err + b_err) * scale:g} "
            f"vs value {ref * scale:g}")
    return KernelValue(F=scale * (a_val + b_val), G=scale * (-a_val + b_val))


def apply_fractional_power(ch: Channel, gamma: float, phi: RadialSpinor,
                           egrid: EnergyGrid, convention: str = "paper",
                           signed: bool = False) -> RadialSpinor:
    """|D_l|^gamma phi through the spectral route (transform, E^gamma, invert).

    With ``signed=True`` (integer gamma only) the minus component is
    multiplied by (-E)^gamma instead, so gamma=1 reproduces D_l itself.
    """
    op = TransformOperator(ch, phi.grid, egrid, convention)
    coeff = op.forward(phi)
    mult = op.egrid.nodes ** gamma
    if signed:
        if abs(gamma - round(gamma)) > 1e-12:
            raise ParameterError("signed fractional powers need integer gamma")
        minus_sign = (-1.0) ** int(round(gamma))
    else:
        minus_sign = 1.0
    coeff.plus = coeff.plus * mult
    coeff.minus = coeff.minus * (minus_sign * mult)
    return op.inverse(coeff)


def angular_multiplier(s: float, cset: ChannelSet) -> ChannelSet:
    """Lambda_omega^s = (1 - Delta_omega)^{s/2} componentwise: the f component
    of channel l is an e^{i l phi} mode, the g component an e^{i (l+1) phi} mode."""
    def scale(l: int, phi: RadialSpinor) -> RadialSpinor:
        return RadialSpinor(phi.grid,
                            (1.0 + l * l) ** (0.5 * s) * phi.f,
                            (1.0 + (l + 1) * (l + 1)) ** (0.5 * s) * phi.g)
    return cset.map(scale)
