"""Seeded random data ensembles for the verification harness.

Gaussian bumps with r0 in [3, 15] and sigma in [0.5, 2], jointly constrained
so the 4-sigma support stays inside r in [1, 20] (the documented window for
the default grids' oscillation budget), with independent complex amplitudes
per spinor component. Optional radial modulation exp(i E0 r) shifts the
energy content for transit-style experiments.
"""

from __future__ import annotations

import numpy as np

from .grids import RadialGrid, RadialSpinor, l2_norm
from .partialwave import ChannelSet

R0_RANGE = (3.0, 15.0)
SIGMA_RANGE = (0.5, 2.0)
SUPPORT = (1.0, 20.0)


def gaussian_bump(grid: RadialGrid, r0: float, sigma: float,
                  amp_f: complex = 1.0, amp_g: complex = 0.0,
                  modulation: float = 0.0) -> RadialSpinor:
    env = np.exp(-((grid.nodes - r0) ** 2) / (2.0 * sigma ** 2))
    if modulation:
        env = env * np.exp(1j * modulation * grid.nodes)
    return RadialSpinor(grid, amp_f * env, amp_g * env)


def _draw_shape(rng: np.random.Generator, r0_range, sigma_range,
                support) -> tuple[float, float]:
    r0 = rng.uniform(*r0_range)
    sig_max = min(sigma_range[1], (r0 - support[0]) / 4.0, (support[1] - r0) / 4.0)
    sigma = rng.uniform(sigma_range[0], max(sigma_range[0] + 1e-6, sig_max))
    return r0, sigma


def random_bumps(rng: np.random.Generator, grid: RadialGrid, count: int,
                 two_component: bool = True, normalize: bool = True,
                 r0_range=R0_RANGE, sigma_range=SIGMA_RANGE, support=SUPPORT,
                 modulation: float = 0.0) -> list[RadialSpinor]:
    """`count` random spinor bumps (normalized to unit L^2 norm by default)."""
    out = []
    for _ in range(count):
        r0, sigma = _draw_shape(rng, r0_range, sigma_range, support)
        amp_f = complex(rng.standard_normal(), rng.standard_normal())
        amp_g = complex(rng.standard_normal(), rng.standard_normal()) if two_component else 0.0
        phi = gaussian_bump(grid, r0, sigma, amp_f, amp_g, modulation)
        if normalize:
            phi = (1.0 / l2_norm(phi)) * phi
        out.append(phi)
    return out


def random_channel_set(rng: np.random.Generator, grid: RadialGrid,
                       l_min: int, l_max: int, normalize: bool = True,
                       r0_range=R0_RANGE, sigma_range=SIGMA_RANGE,
                       support=SUPPORT, modulation: float = 0.0) -> ChannelSet:
    """A multi-channel sample with an independent bump per channel."""
    channels = {
        l: random_bumps(rng, grid, 1, normalize=False, r0_range=r0_range,
                        sigma_range=sigma_range, support=support,
                        modulation=modulation)[0]
        for l in range(l_min, l_max + 1)
    }
    cset = ChannelSet(l_min, l_max, channels)
    if normalize:
        scale = 1.0 / cset.norm()
        cset = cset.map(lambda l, phi: scale * phi)
    return cset
