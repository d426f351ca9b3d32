"""Numerical verification harness for the dispersive estimates.

Every `verify_*` routine returns an :class:`EstimateReport` carrying the
measured left-hand side, the analytic bound it is compared against, their
ratio, a pass flag at the stated tolerance, and enough metadata (grids,
seed, per-sample values) to reproduce the run bit for bit.

Local smoothing. The global-in-time weighted norm admits an exact spectral
form: per channel with transform orders (of, og),

    || |x|^{-gamma} |D|^{1/2-gamma} u ||^2_{L^2_t(R) L^2_x}
        = pi * kappa * || P f ||^2,
    kappa = integral_0^inf x^{1-2 gamma} (J_of(x)^2 + J_og(x)^2) dx
          = 2 * (D_of + D_og),
    D_nu  = Gamma(2g-1) Gamma(nu-g+1) / (2^{2g} Gamma(g)^2 Gamma(nu+g)),

so the sharp bound is 2 * pi * (D_of + D_og) * ||f||^2, which equals twice
the published closed-form constant when og = of + 1 (channels with
l + alpha >= 0). The primary route below measures kappa by an independent
quadrature (Gauss-Jacobi start, composite Gauss body, asymptotic-average
tail) and the sample's spectral data, and gates the ratio against the
closed-form bound; the secondary route time-steps a finite window and
cross-checks with a power-law tail estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.special as _sp

from .errors import DivergenceError, ParameterError
from .fracpow import apply_fractional_power, angular_multiplier
from .grids import EnergyGrid, l2_norm, make_energy_grid, make_radial_grid
from .partialwave import ChannelSet, magnetic_gradient_norm
from .propagator import Trajectory, evolve_channels, evolve_spectral_many
from .sampling import gaussian_bump, random_bumps, random_channel_set
from .specfun import bessel_j, gamma_fn
from .spectral import Channel, TransformOperator, apply_radial_dirac

DEFAULT_SEED = 42


@dataclass
class SmoothingConfig:
    """Parameters of one local-smoothing verification run."""

    alpha: float
    l: int
    gamma: float
    samples: int = 20
    seed: int = DEFAULT_SEED
    r_max: float = 40.0
    n_r: int = 4000
    e_max: float = 40.0
    n_e: int = 4000
    convention: str = "paper"
    time_check_samples: int = 0   # 0 disables the time-domain cross-check
    time_window: float = 50.0

    def __post_init__(self):
        m = abs(self.l + self.alpha)
        if not 0.5 < self.gamma < 1.0 + m:
            raise ParameterError(
                f"gamma={self.gamma} outside the admissible range "
                f"(1/2, {1.0 + m}) for |l+alpha|={m}")


@dataclass
class EstimateReport:
    """Outcome of one estimate verification."""

    name: str
    lhs: float
    rhs_bound: float
    ratio: float
    passed: bool
    tolerance: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = self.ratio <= 1.0 + self.tolerance
        if self.passed != expected:
            raise ParameterError("pass flag must equal ratio <= 1 + tolerance")

    @classmethod
    def from_ratio(cls, name, lhs, rhs_bound, tolerance, metadata=None):
        ratio = lhs / rhs_bound if rhs_bound else (0.0 if lhs == 0 else math.inf)
        return cls(name, float(lhs), float(rhs_bound), float(ratio),
                   ratio <= 1.0 + tolerance, tolerance, metadata or {})

    def to_dict(self) -> dict:
        return {
            "name": self.name, "lhs": self.lhs, "rhs_bound": self.rhs_bound,
            "ratio": self.ratio, "passed": self.passed,
            "tolerance": self.tolerance, "metadata": self.metadata,
        }


# ---------------------------------------------------------------------------
# Closed-form constants
# ---------------------------------------------------------------------------

def _d_coefficient(nu: float, gamma: float) -> float:
    """D_nu = Gamma(2g-1) Gamma(nu-g+1) / (2^{2g} Gamma(g)^2 Gamma(nu+g))."""
    if gamma <= 0.5:
        raise DivergenceError(f"gamma={gamma} <= 1/2: Gamma(2 gamma - 1) pole")
    if gamma >= nu + 1.0:
        raise DivergenceError(
            f"gamma={gamma} >= 1 + {nu}: weighted Bessel integral diverges")
    return (gamma_fn(2.0 * gamma - 1.0) * gamma_fn(nu - gamma + 1.0)
            / (2.0 ** (2.0 * gamma) * gamma_fn(gamma) ** 2 * gamma_fn(nu + gamma)))


def smoothing_constant(gamma: float, alpha: float, l: int) -> float:
    """The published closed-form constant

        pi Gamma(2g-1) / (2^{2g} Gamma(g)^2) *
            [Gamma(m-g+1)/Gamma(m+g) + Gamma(m-g+2)/Gamma(m+g+1)],  m = |l+alpha|.

    Finite exactly on 1/2 < gamma < 1 + m; raises DivergenceError outside.
    """
    m = abs(l + alpha)
    if gamma >= m + 1.0:
        raise DivergenceError(f"gamma={gamma} >= 1+|l+alpha|={1.0 + m}")
    return math.pi * (_d_coefficient(m, gamma) + _d_coefficient(m + 1.0, gamma))


def channel_smoothing_bound(ch: Channel, gamma: float, convention: str = "paper") -> float:
    """The same closed form applied to the channel's actual order pair;
    equals smoothing_constant(gamma, alpha, l) whenever l + alpha >= 0."""
    of, og, _ = ch.orders(convention)
    return math.pi * (_d_coefficient(of, gamma) + _d_coefficient(og, gamma))


def corollary_gamma_range(alpha: float) -> tuple[float, float]:
    """Admissible gamma interval (1/2, 1 + mu0) for generic L^2 data, with
    mu0 the distance from alpha to the nearest integer: the worst channel is
    the one closest to the circulation. Noninteger flux widens the range
    past the free case (mu0 = 0)."""
    from .spectral import FieldSetup

    return 0.5, 1.0 + FieldSetup(alpha).mu0


# ---------------------------------------------------------------------------
# kappa quadrature (independent of the Gamma closed forms)
# ---------------------------------------------------------------------------

def _kappa_quadrature(nu: float, gamma: float, x_cut: float = 2000.0) -> float:
    """integral_0^inf x^{1-2g} J_nu(x)^2 dx by quadrature.

    (0,1]: Gauss-Jacobi with the exact endpoint power x^{1-2g+2nu};
    [1,x_cut]: composite Gauss resolving the oscillation; beyond x_cut the
    oscillation average J_nu^2 ~ 1/(pi x) integrates in closed form.
    """
    beta = 1.0 - 2.0 * gamma + 2.0 * nu
    if beta <= -1.0:
        raise DivergenceError(f"x^{beta} not integrable at 0 (gamma >= 1+nu)")
    xj, wj = _sp.roots_jacobi(48, 0.0, beta)
    xs = 0.5 * (xj + 1.0)
    smooth = (bessel_j(nu, xs) / xs ** nu) ** 2
    head = float(np.sum(wj * smooth)) / 2.0 ** (beta + 1.0)

    xg, wg = np.polynomial.legendre.leggauss(8)
    n_panels = int(x_cut)  # ~2 radians of the doubled Bessel phase per panel
    edges = np.linspace(1.0, x_cut, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    body = float(np.sum(w * x ** (1.0 - 2.0 * gamma) * bessel_j(nu, x) ** 2))

    tail = x_cut ** (1.0 - 2.0 * gamma) / (math.pi * (2.0 * gamma - 1.0))
    return head + body + tail


# ---------------------------------------------------------------------------
# Local smoothing (Theorem-level gate) and endpoint
# ---------------------------------------------------------------------------

def verify_local_smoothing(cfg: SmoothingConfig) -> EstimateReport:
    """Gate the global-in-time weighted norm against the closed-form bound.

    Primary (Plancherel) route: lhs^2 = pi * kappa_quad * ||P f||^2 per unit
    ||f||^2; bound^2 = 2 * channel_smoothing_bound. Secondary route
    (`time_check_samples` > 0): finite-window time integration with a
    power-law tail estimate, logged in the metadata.
    """
    ch = Channel(cfg.l, cfg.alpha)
    of, og, _ = ch.orders(cfg.convention)
    bound = channel_smoothing_bound(ch, cfg.gamma, cfg.convention)
    kappa = _kappa_quadrature(of, cfg.gamma) + _kappa_quadrature(og, cfg.gamma)

    rgrid = make_radial_grid(cfg.r_max, cfg.n_r)
    egrid = make_energy_grid(cfg.e_max, cfg.n_e)
    op = TransformOperator(ch, rgrid, egrid, cfg.convention)
    rng = np.random.default_rng(cfg.seed)
    ratios = []
    for phi in random_bumps(rng, rgrid, cfg.samples):
        coeff = op.forward(phi)
        lhs_sq = math.pi * kappa * coeff.norm() ** 2
        ratios.append(lhs_sq / (2.0 * bound * l2_norm(phi) ** 2))
    worst = max(ratios)

    meta = {
        "alpha": cfg.alpha, "l": cfg.l, "gamma": cfg.gamma,
        "orders": [of, og], "seed": cfg.seed, "samples": cfg.samples,
        "kappa_quadrature": kappa, "kappa_closed_form": 2.0 / math.pi * bound,
        "channel_bound": bound,
        "spec_constant": smoothing_constant(cfg.gamma, cfg.alpha, cfg.l),
        "per_sample_ratio": ratios,
        "grids": {"r_max": cfg.r_max, "n_r": cfg.n_r,
                  "e_max": cfg.e_max, "n_e": cfg.n_e},
    }
    if cfg.time_check_samples > 0:
        meta["time_route"] = _smoothing_time_check(cfg, ch, bound)
    return EstimateReport.from_ratio(
        "local_smoothing", worst * 2.0 * bound, 2.0 * bound, 0.05, meta)


def _smoothing_time_check(cfg: SmoothingConfig, ch: Channel, bound: float) -> dict:
    """Time-domain cross-check on reduced grids: integrate over [-T, T] via
    the reflection identity and estimate the |t|^{-2 gamma} tail."""
    t_end = cfg.time_window
    rgrid = make_radial_grid(max(cfg.r_max, 25.0 + t_end + 10.0), 2400)
    egrid = make_energy_grid(16.0, 1200)
    times = np.linspace(0.0, t_end, 201)
    wgt_sq = rgrid.nodes ** (-2.0 * cfg.gamma)
    of, og, _ = ch.orders(cfg.convention)
    kappa = _kappa_quadrature(of, cfg.gamma) + _kappa_quadrature(og, cfg.gamma)
    op = TransformOperator(ch, rgrid, egrid, cfg.convention)
    rng = np.random.default_rng(cfg.seed + 1)
    rows = []
    for phi in random_bumps(rng, rgrid, cfg.time_check_samples):
        frac = apply_fractional_power(ch, 0.5 - cfg.gamma, phi, egrid,
                                      cfg.convention)
        total_sq = 0.0
        tail_sq = 0.0
        for start in (frac, frac.time_reflected()):
            snaps = evolve_spectral_many(ch, start, times, egrid,
                                         orders=cfg.convention)
            dens = np.array([
                float(np.sum(rgrid.weights * wgt_sq
                             * (np.abs(s.f) ** 2 + np.abs(s.g) ** 2)))
                for s in snaps])
            total_sq += float(np.trapezoid(dens, times))
            # |t|^{-2 gamma} tail fitted on the final snapshot
            amp = dens[-1] * times[-1] ** (2.0 * cfg.gamma)
            tail_sq += amp * times[-1] ** (1.0 - 2.0 * cfg.gamma) / (2.0 * cfg.gamma - 1.0)
        norm_sq = l2_norm(phi) ** 2
        global_sq = math.pi * kappa * op.forward(phi).norm() ** 2
        rows.append({
            "windowed_sq": total_sq / norm_sq,
            "tail_estimate_sq": tail_sq / norm_sq,
            "global_plancherel_sq": global_sq / norm_sq,
        })
    return {"window": cfg.time_window, "samples": rows}


def verify_endpoint(alpha: float, l: int, r_list, t_margin: float = 12.0,
                    seed: int = DEFAULT_SEED, r0: float = 20.0,
                    sigma: float = 0.8, modulation: float = 6.0,
                    dt: float = 0.25) -> EstimateReport:
    """sup_R R^{-1/2} ||u||_{L^2_t L^2_{|x|<=R}} / ||f|| plateau check.

    The time integral runs over (-T, T) via the reflection identity with
    T = r0 + max(R) + t_margin (the wavepacket has fully transited every
    R-ball by then). Pass = every R-doubling changes the scaled value by
    less than 10%.
    """
    r_list = sorted(float(r) for r in r_list)
    ch = Channel(l, alpha)
    t_end = r0 + r_list[-1] + t_margin
    r_max = r0 + t_end + 8.0
    n_r = int(np.ceil(r_max / 0.045 / 8.0)) * 8
    rgrid = make_radial_grid(r_max, n_r)
    egrid = make_energy_grid(16.0, 1600)
    phi = gaussian_bump(rgrid, r0, sigma, 1.0, 0.6j, modulation)
    phi = (1.0 / l2_norm(phi)) * phi
    times = np.arange(0.0, t_end + dt, dt)

    masses = np.zeros((times.size, len(r_list)))
    for start in (phi, phi.time_reflected()):
        snaps = evolve_spectral_many(ch, start, times, egrid)
        dens = np.stack([np.abs(s.f) ** 2 + np.abs(s.g) ** 2 for s in snaps])
        for j, r_ball in enumerate(r_list):
            sel = rgrid.nodes <= r_ball
            masses[:, j] += dens[:, sel] @ rgrid.weights[sel]
    values = np.sqrt(np.trapezoid(masses, times, axis=0) / np.asarray(r_list))

    steps = np.abs(values[1:] / values[:-1] - 1.0)
    worst = float(steps.max()) if steps.size else 0.0
    meta = {
        "alpha": alpha, "l": l, "r_list": r_list,
        "scaled_values": values.tolist(), "doubling_deviation": steps.tolist(),
        "seed": seed, "r0": r0, "sigma": sigma, "modulation": modulation,
        "t_end": t_end,
    }
    return EstimateReport.from_ratio(
        "endpoint_plateau", worst, 0.10, 0.0, meta)


# ---------------------------------------------------------------------------
# Bessel bounds
# ---------------------------------------------------------------------------

def bessel_average(lam: float, r_ball: float) -> float:
    """(1/R) integral_0^R J_lam(r)^2 r dr by composite Gauss quadrature."""
    if r_ball <= 0:
        raise ParameterError("R must be positive")
    n_panels = max(32, int(np.ceil(r_ball * 6.0 / math.pi)))
    xg, wg = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(0.0, r_ball, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    r = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel() * r
    return float(np.sum(w * bessel_j(lam, r) ** 2)) / r_ball


def landau_sup(lam: float, r_max: float | None = None, step: float = 0.01) -> float:
    """sup over the grid of sqrt(r) |J_lam(r)|."""
    needed = 4.0 * lam * lam + 50.0
    if r_max is None:
        r_max = needed
    if r_max < needed:
        raise ParameterError(f"r_max must be >= 4 lam^2 + 50 = {needed}")
    r = np.arange(step, r_max, step)
    return float(np.max(np.sqrt(r) * np.abs(bessel_j(lam, r))))


# ---------------------------------------------------------------------------
# KSS and weighted Strichartz
# ---------------------------------------------------------------------------

def _fit_exponent(t_values: np.ndarray, norms: np.ndarray) -> float:
    slope, _ = np.polyfit(np.log(t_values), np.log(norms), 1)
    return float(slope)


def kss_reference_exponents(mu: float) -> dict:
    """The growth-law candidates of A_mu(T), statement vs proof."""
    if mu < -0.5:
        return {"case": "bounded", "statement": 0.0, "proof": 0.0}
    if mu == -0.5:
        return {"case": "sqrt-log", "statement": None, "proof": None}
    return {"case": "power", "statement": 0.5 - mu, "proof": 0.5 + mu}


def verify_kss(alpha: float, mu: float, t_list, kind: str = "japanese",
               seed: int = DEFAULT_SEED, l_range=(-1, 1), r0: float = 0.0,
               sigma: float = 1.0, modulation: float = 5.0,
               dt: float = 0.25, target: float | None = None,
               tolerance: float = 0.1) -> EstimateReport:
    """Fit the T-growth exponent of ||w(x) u||_{L^2_T L^2} over the T list.

    The default data is an origin-centered modulated packet: with no
    approach phase the weighted density decays monotonically from t = 0, so
    the saturating (mu < -1/2) and power-law regimes are visible from the
    smallest window on. `target` defaults to the proof-side exponent
    (0.5 + mu, clipped at 0 for mu < -1/2); the report carries both the
    statement and proof candidates and a discrepancy flag — the published
    statement and proof disagree for -1/2 < mu < 0 and this harness does
    not adjudicate.
    """
    if mu > 0:
        raise ParameterError("KSS weights need mu <= 0")
    t_list = sorted(float(t) for t in t_list)
    if t_list[0] < 1.0:
        raise ParameterError("KSS windows need T >= 1")
    t_end = t_list[-1]
    r_max = r0 + t_end + 10.0
    n_r = int(np.ceil(r_max / 0.045 / 8.0)) * 8
    rgrid = make_radial_grid(r_max, n_r)
    egrid = make_energy_grid(14.0, 1200)
    rng = np.random.default_rng(seed)
    cset = random_channel_set(rng, rgrid, l_range[0], l_range[1],
                              r0_range=(0.9 * r0, 1.1 * r0),
                              sigma_range=(sigma, sigma + 0.1),
                              support=(0.5, 20.0), modulation=modulation)
    times = np.arange(0.0, t_end + dt, dt)
    traj = evolve_channels(alpha, cset, times, egrid)

    if kind == "japanese":
        wgt = (1.0 + rgrid.nodes ** 2) ** (0.5 * mu)
    elif kind == "homogeneous":
        wgt = rgrid.nodes ** mu
    else:
        raise ParameterError(f"unsupported KSS weight kind {kind!r}")
    dens = np.zeros(times.size)
    for i, state in enumerate(traj.states):
        total = 0.0
        for l in state:
            chs = state[l]
            total += float(np.sum(rgrid.weights * wgt * wgt
                                  * (np.abs(chs.f) ** 2 + np.abs(chs.g) ** 2)))
        dens[i] = total
    cum = np.concatenate([[0.0], np.cumsum(
        0.5 * (dens[1:] + dens[:-1]) * np.diff(times))])
    norms = np.array([math.sqrt(np.interp(t, times, cum)) for t in t_list])

    fitted = _fit_exponent(np.asarray(t_list), norms)
    refs = kss_reference_exponents(mu)
    if target is None:
        target = max(0.0, 0.5 + mu) if refs["case"] != "sqrt-log" else 0.0
    deviation = abs(fitted - target)
    meta = {
        "alpha": alpha, "mu": mu, "kind": kind, "seed": seed,
        "t_list": t_list, "norms": norms.tolist(),
        "fitted_exponent": fitted, "target_exponent": target,
        "candidates": refs,
        "statement_proof_discrepancy_flagged": refs["case"] == "power"
                                               and mu != 0.0,
        "l_range": list(l_range), "r0": r0, "sigma": sigma,
        "modulation": modulation,
    }
    return EstimateReport.from_ratio("kss_exponent", deviation, tolerance, 0.0, meta)


def _strichartz_lhs(traj: Trajectory, weight: float, q: float) -> float:
    grid = traj.states[0].grid
    wgt = grid.nodes ** weight
    vals = np.empty(traj.times.size)
    for i, state in enumerate(traj.states):
        dens = np.zeros(grid.n)
        for l in state:
            chs = state[l]
            dens += np.abs(chs.f) ** 2 + np.abs(chs.g) ** 2
        vals[i] = float(np.sum(grid.weights * wgt ** q * dens ** (0.5 * q)))
    return float(np.trapezoid(vals, traj.times))


def verify_weighted_strichartz(alpha: float, q: float, epsilon: float,
                               samples: int = 5, seed: int = DEFAULT_SEED,
                               l_range=(-2, 2), t_end: float = 40.0,
                               dt: float = 0.25, refine: float = 1.0) -> EstimateReport:
    """Ratio of || r^{1/2-eps-2/q} u ||_{L^q_t L^q_{rdr} L^2_omega} to
    || |D|^{1/2+eps-1/q} Lambda_omega^{-eps+eps/q} f ||_{L^2}.

    The report's lhs is the worst sample ratio; rhs_bound is the recorded
    reference level (first sample's ratio), so `ratio` tracks sample
    uniformity rather than an absolute constant (the theorem fixes no
    explicit C).
    """
    if q < 2.0:
        raise ParameterError("q must be >= 2")
    if q == math.inf:
        raise ParameterError("q = inf is covered by verify_sobolev_trace")
    if not 0.0 < epsilon < 0.5:
        raise ParameterError("epsilon must lie in (0, 1/2)")
    scale = refine
    r_max = 18.0 + t_end + 8.0
    n_r = int(np.ceil(scale * r_max / 0.045 / 8.0)) * 8
    n_e = int(np.ceil(scale * 1200.0 / 8.0)) * 8
    rgrid = make_radial_grid(r_max, n_r)
    egrid = make_energy_grid(14.0, n_e)
    rng = np.random.default_rng(seed)
    times = np.arange(0.0, t_end + dt, dt)
    w_exp = 0.5 - epsilon - 2.0 / q
    s_frac = 0.5 + epsilon - 1.0 / q
    s_ang = -epsilon + epsilon / q
    ratios = []
    for _ in range(samples):
        cset = random_channel_set(rng, rgrid, l_range[0], l_range[1],
                                  modulation=4.0)
        lhs_q = 0.0
        for start_sign in (1, -1):
            start = cset if start_sign == 1 else cset.map(
                lambda l, phi: phi.time_reflected())
            traj = evolve_channels(alpha, start, times, egrid)
            lhs_q += _strichartz_lhs(traj, w_exp, q)
        lhs = lhs_q ** (1.0 / q)
        smooth = angular_multiplier(s_ang, cset)
        rhs_sq = 0.0
        for l in smooth:
            op = TransformOperator(Channel(l, alpha), rgrid, egrid, "eigen")
            coeff = op.forward(smooth[l])
            mult = egrid.nodes ** s_frac
            rhs_sq += float(np.sum(egrid.weights * mult * mult
                                   * (np.abs(coeff.plus) ** 2
                                      + np.abs(coeff.minus) ** 2)))
        ratios.append(lhs / math.sqrt(rhs_sq))
    reference = ratios[0]
    worst = max(ratios)
    meta = {
        "alpha": alpha, "q": q, "epsilon": epsilon, "seed": seed,
        "ratios": ratios, "reference_ratio": reference,
        "weight_exponent": w_exp, "fractional_order": s_frac,
        "angular_order": s_ang, "t_end": t_end, "samples": samples,
        "grids": {"n_r": n_r, "n_e": n_e, "r_max": r_max},
    }
    return EstimateReport.from_ratio(
        "weighted_strichartz", worst, reference, 0.5, meta)


def verify_sobolev_trace(epsilon: float, cset: ChannelSet, alpha: float,
                         egrid: EnergyGrid | None = None) -> EstimateReport:
    """sup_r r^{1/2-eps} ||f(r omega)||_{L^2_omega} against
    || |D|^{1/2+eps} Lambda_omega^{-eps} f ||."""
    if not 0.0 < epsilon < 0.5:
        raise ParameterError("epsilon must lie in (0, 1/2)")
    egrid = egrid or make_energy_grid()
    grid = cset.grid
    dens = np.zeros(grid.n)
    for l in cset:
        phi = cset[l]
        dens += np.abs(phi.f) ** 2 + np.abs(phi.g) ** 2
    lhs = float(np.max(grid.nodes ** (0.5 - epsilon) * np.sqrt(dens)))
    smooth = angular_multiplier(-epsilon, cset)
    rhs_sq = 0.0
    for l in smooth:
        op = TransformOperator(Channel(l, alpha), grid, egrid, "eigen")
        coeff = op.forward(smooth[l])
        mult = egrid.nodes ** (0.5 + epsilon)
        rhs_sq += float(np.sum(egrid.weights * mult * mult
                               * (np.abs(coeff.plus) ** 2 + np.abs(coeff.minus) ** 2)))
    rhs = math.sqrt(rhs_sq)
    meta = {"epsilon": epsilon, "alpha": alpha}
    # no explicit constant in the inequality: report the raw ratio, pass if finite
    ratio = lhs / rhs if rhs else math.inf
    tolerance = max(ratio, 1.0) if math.isfinite(ratio) else 0.0
    return EstimateReport("sobolev_trace", lhs, rhs, ratio,
                          math.isfinite(ratio), tolerance, meta)


def verify_norm_identity(cset: ChannelSet, alpha: float,
                         tolerance: float = 1e-3) -> EstimateReport:
    """|| D_A f || computed channelwise against || grad_A f || (Pauli
    anticommutation identity); relative difference gated at `tolerance`."""
    dirac_sq = 0.0
    for l in cset:
        out = apply_radial_dirac(Channel(l, alpha), cset[l])
        dirac_sq += l2_norm(out) ** 2
    lhs = math.sqrt(dirac_sq)
    rhs = magnetic_gradient_norm(cset, alpha)
    rel = abs(lhs - rhs) / rhs if rhs else 0.0
    meta = {"alpha": alpha, "dirac_norm": lhs, "gradient_norm": rhs,
            "relative_difference": rel}
    return EstimateReport.from_ratio("norm_identity", rel, tolerance, 0.0, meta)
