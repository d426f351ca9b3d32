"""Time evolution e^{-i t D_l} per channel, plus an implicit time-stepping
oracle and space-time norm evaluation.

Spectral route: transform, phase multiplication, inverse transform. The
validated sign convention ("opposite") multiplies the plus component by
e^{-iEt} and the minus component by e^{+iEt} (the minus branch carries
eigenvalue -E); the rejected candidate from the published diagonalization
statement ("same": e^{-iEt} on both) stays available behind the switch.

Oracle route: implicit midpoint (Crank-Nicolson) on the finite-difference
radial operator. The Cayley form (I + i dt/2 D) u' = (I - i dt/2 D) u is
exactly norm-preserving whenever D is discretely symmetric, which holds on
interior nodes; runs are restricted to times before the wavefront reaches
the boundaries (finite propagation speed), homogeneous Dirichlet at r_max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .errors import DomainError, ParameterError
from .grids import EnergyGrid, RadialGrid, RadialSpinor, make_energy_grid
from .partialwave import ChannelSet
from .spectral import Channel, SpectralCoeff, TransformOperator

SIGN_CONVENTIONS = ("opposite", "same")


def _phases(egrid: EnergyGrid, t: float, convention: str) -> tuple[np.ndarray, np.ndarray]:
    if convention not in SIGN_CONVENTIONS:
        raise ParameterError(f"convention must be one of {SIGN_CONVENTIONS}")
    plus = np.exp(-1j * egrid.nodes * t)
    minus = np.exp(+1j * egrid.nodes * t) if convention == "opposite" else plus
    return plus, minus


def evolve_spectral(ch: Channel, phi0: RadialSpinor, t: float,
                    egrid: EnergyGrid | None = None,
                    convention: str = "opposite",
                    orders: str = "eigen") -> RadialSpinor:
    """e^{-i t D_l} phi0 by phase multiplication in the transform domain."""
    egrid = egrid or make_energy_grid()
    op = TransformOperator(ch, phi0.grid, egrid, orders)
    coeff = op.forward(phi0)
    ph_p, ph_m = _phases(egrid, t, convention)
    return op.inverse(SpectralCoeff(egrid, coeff.plus * ph_p, coeff.minus * ph_m))


def evolve_spectral_many(ch: Channel, phi0: RadialSpinor, times: np.ndarray,
                         egrid: EnergyGrid | None = None,
                         convention: str = "opposite",
                         orders: str = "eigen") -> list[RadialSpinor]:
    """Snapshots at the given times, batched through BLAS."""
    egrid = egrid or make_energy_grid()
    times = np.asarray(times, dtype=float)
    op = TransformOperator(ch, phi0.grid, egrid, orders)
    coeff = op.forward(phi0)
    ph = np.exp(-1j * np.outer(egrid.nodes, times))
    plus_t = coeff.plus[:, None] * ph
    minus_t = coeff.minus[:, None] * (np.conj(ph) if convention == "opposite" else ph)
    f_t, g_t = op.inverse_many(plus_t, minus_t)
    return [RadialSpinor(phi0.grid, f_t[:, i], g_t[:, i]) for i in range(times.size)]


# ---------------------------------------------------------------------------
# Implicit-midpoint oracle
# ---------------------------------------------------------------------------

def _derivative_matrix(r: np.ndarray) -> sparse.csr_matrix:
    """Second-order first-derivative matrix on (possibly nonuniform) nodes,
    one-sided at the two boundary rows."""
    n = r.size
    rows, cols, vals = [], [], []

    def put(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v)

    for i in range(1, n - 1):
        hs = r[i] - r[i - 1]
        hd = r[i + 1] - r[i]
        put(i, i - 1, -hd / (hs * (hs + hd)))
        put(i, i, (hd - hs) / (hs * hd))
        put(i, i + 1, hs / (hd * (hs + hd)))
    h0, h1 = r[1] - r[0], r[2] - r[1]
    put(0, 0, -(2 * h0 + h1) / (h0 * (h0 + h1)))
    put(0, 1, (h0 + h1) / (h0 * h1))
    put(0, 2, -h0 / (h1 * (h0 + h1)))
    hm, hm1 = r[-1] - r[-2], r[-2] - r[-3]
    put(n - 1, n - 1, (2 * hm + hm1) / (hm * (hm + hm1)))
    put(n - 1, n - 2, -(hm + hm1) / (hm * hm1))
    put(n - 1, n - 3, hm / (hm1 * (hm + hm1)))
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def radial_dirac_matrix(ch: Channel, grid: RadialGrid) -> sparse.csr_matrix:
    """The 2n x 2n finite-difference matrix of D_l (block off-diagonal)."""
    r = grid.nodes
    d = _derivative_matrix(r)
    k = ch.k
    upper = -1j * (d + sparse.diags((k + 1.0) / r))
    lower = -1j * (d - sparse.diags(k / r))
    return sparse.bmat([[None, upper], [lower, None]], format="csr")


def _symmetrized_dirac_matrix(ch: Channel, grid: RadialGrid) -> sparse.csc_matrix:
    """The weight-Hermitian part (D + W^{-1} D^H W)/2 of the finite-difference
    operator. The discarded anti-Hermitian part is O(h^2) (same continuum
    operator),
    and with it removed the Cayley step preserves the discrete norm exactly."""
    d = radial_dirac_matrix(ch, grid).tocsc()
    w = np.concatenate([grid.weights, grid.weights])
    adj = sparse.diags(1.0 / w) @ d.conj().T @ sparse.diags(w)
    return (0.5 * (d + adj)).tocsc()


class CrankNicolson:
    """Factorized implicit-midpoint stepper for i du/dt = D_l u."""

    def __init__(self, ch: Channel, grid: RadialGrid, dt: float):
        if dt <= 0:
            raise ParameterError("dt must be positive")
        self.grid = grid
        self.dt = dt
        d = _symmetrized_dirac_matrix(ch, grid)
        n2 = 2 * grid.n
        eye = sparse.identity(n2, dtype=complex, format="csc")
        self._rhs = (eye - 0.5j * dt * d).tocsr()
        try:
            self._solve = spla.factorized((eye + 0.5j * dt * d).tocsc())
        except RuntimeError as exc:  # singular / ill-conditioned factorization
            raise DomainError(f"Crank-Nicolson system factorization failed: {exc}")

    def step(self, phi: RadialSpinor) -> RadialSpinor:
        u = np.concatenate([phi.f, phi.g])
        u = self._solve(self._rhs @ u)
        n = self.grid.n
        return RadialSpinor(self.grid, u[:n], u[n:])


def evolve_oracle(ch: Channel, phi0: RadialSpinor, t: float,
                  dt: float = 1e-3) -> RadialSpinor:
    """Implicit-midpoint evolution to time t (independent of the transform)."""
    n_steps = max(1, int(round(abs(t) / dt)))
    stepper = CrankNicolson(ch, phi0.grid, t / n_steps)
    phi = phi0.copy()
    for _ in range(n_steps):
        phi = stepper.step(phi)
    return phi


# ---------------------------------------------------------------------------
# Trajectories and mixed space-time norms
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    """Snapshots of a (multi-channel) state at ascending times."""

    times: np.ndarray
    states: list  # list[ChannelSet]
    alpha: float

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if np.any(np.diff(self.times) <= 0):
            raise ParameterError("times must be strictly ascending")
        if len(self.states) != self.times.size:
            raise ParameterError("one state per time")


@dataclass
class NormRecord:
    """A computed mixed space-time norm."""

    kind: str
    weight: float
    window: tuple[float, float]
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ParameterError("norms are nonnegative")


def evolve_channels(alpha: float, cset: ChannelSet, times: np.ndarray,
                    egrid: EnergyGrid | None = None,
                    convention: str = "opposite",
                    orders: str = "eigen") -> Trajectory:
    """Evolve every channel of `cset` and assemble snapshots."""
    times = np.asarray(times, dtype=float)
    per_channel = {
        l: evolve_spectral_many(Channel(l, alpha), cset[l], times, egrid,
                                convention, orders)
        for l in cset
    }
    states = [
        ChannelSet(cset.l_min, cset.l_max, {l: per_channel[l][i] for l in cset})
        for i in range(times.size)
    ]
    return Trajectory(times, states, alpha)


def _radial_weight(kind: str, weight: float, r: np.ndarray) -> np.ndarray:
    if kind == "homogeneous":
        return r ** weight
    if kind == "japanese":
        return (1.0 + r * r) ** (0.5 * weight)
    raise ParameterError(f"unsupported weight kind {kind!r}")


def _spatial_sq(state: ChannelSet, wgt: np.ndarray) -> float:
    w = state.grid.weights
    total = 0.0
    for l in state:
        ch = state[l]
        total += float(np.sum(w * wgt * wgt * (np.abs(ch.f) ** 2 + np.abs(ch.g) ** 2)))
    return total


def mixed_norm(traj: Trajectory, weight: float, kind: str,
               gamma: float | None = None, q: float | None = None,
               egrid: EnergyGrid | None = None) -> NormRecord:
    """Space-time norm over the trajectory window (trapezoid in time).

    kinds: "homogeneous" |x|^weight and "japanese" <x>^weight give
    L^2_t L^2_x; "smoothing" computes ||Omega^{-gamma} |D|^{1/2-gamma} u||
    (weight ignored, gamma required); "strichartz" gives the
    L^q_t L^q_{r dr} L^2_omega norm with radial weight r^weight.
    """
    window = (float(traj.times[0]), float(traj.times[-1]))
    if kind in ("homogeneous", "japanese"):
        wgt = _radial_weight(kind, weight, traj.states[0].grid.nodes)
        sq = np.array([_spatial_sq(s, wgt) for s in traj.states])
        return NormRecord(kind, weight, window, float(np.sqrt(np.trapezoid(sq, traj.times))))
    if kind == "smoothing":
        if gamma is None:
            raise ParameterError("smoothing norm needs gamma")
        from .fracpow import apply_fractional_power  # local import: avoid cycle
        egrid = egrid or make_energy_grid()
        wgt = traj.states[0].grid.nodes ** (-gamma)
        sq = np.empty(traj.times.size)
        for i, s in enumerate(traj.states):
            frac = s.map(lambda l, phi: apply_fractional_power(
                Channel(l, traj.alpha), 0.5 - gamma, phi, egrid))
            sq[i] = _spatial_sq(frac, wgt)
        return NormRecord(kind, gamma, window, float(np.sqrt(np.trapezoid(sq, traj.times))))
    if kind == "strichartz":
        if q is None:
            raise ParameterError("strichartz norm needs q")
        grid = traj.states[0].grid
        wgt = grid.nodes ** weight
        vals = np.empty(traj.times.size)
        for i, s in enumerate(traj.states):
            # L^2_omega density per radius, then L^q(r dr) with the weight
            dens = np.zeros(grid.n)
            for l in s:
                ch = s[l]
                dens += np.abs(ch.f) ** 2 + np.abs(ch.g) ** 2
            vals[i] = float(np.sum(grid.weights * (wgt * np.sqrt(dens)) ** q))
        return NormRecord(kind, weight, window,
                          float(np.trapezoid(vals, traj.times) ** (1.0 / q)))
    raise ParameterError(f"unsupported norm kind {kind!r}")
