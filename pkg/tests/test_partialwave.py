import math

import numpy as np
import pytest

from abdirac import partialwave as pw
from abdirac.errors import ParameterError
from abdirac.grids import RadialSpinor, l2_norm, make_radial_grid


def make_field(grid, m, fn):
    """fn(r, phi) -> (comp1, comp2) on the polar product grid."""
    phi_k = pw.angular_nodes(m)
    r = grid.nodes[:, None]
    p = phi_k[None, :]
    c1, c2 = fn(r, p)
    values = np.stack([np.broadcast_to(c1, (grid.n, m)),
                       np.broadcast_to(c2, (grid.n, m))]).astype(complex)
    return pw.SpinorField(grid, values)


@pytest.fixture(scope="module")
def grid():
    return make_radial_grid(30.0, 1200)


class TestDecompose:
    def test_angle_independent(self, grid):
        h = np.exp(-(grid.nodes - 5.0) ** 2)
        field = make_field(grid, 16, lambda r, p: (np.exp(-(r - 5.0) ** 2), 0.0))
        cset = pw.decompose(field, -3, 3)
        for l in cset:
            if l == 0:
                ratio = cset[0].f / h
                assert np.allclose(ratio, ratio[0])
                assert np.allclose(cset[0].g, 0.0)
            else:
                assert l2_norm(cset[l]) < 1e-12

    def test_basis_convention_lower_component(self, grid):
        # Phi_2 = h(r) e^{i phi} lands in channel l = 0's g
        field = make_field(grid, 16,
                           lambda r, p: (0.0, np.exp(-(r - 5.0) ** 2) * np.exp(1j * p)))
        cset = pw.decompose(field, -2, 2)
        assert l2_norm(cset[0]) > 0.1
        assert np.allclose(cset[0].f, 0.0)
        for l in cset:
            if l != 0:
                assert l2_norm(cset[l]) < 1e-12

    def test_parseval_random_bandlimited(self, grid, rng):
        m = 32
        field = make_field(grid, m, lambda r, p: (0.0, 0.0))
        for l in range(-4, 5):
            a = rng.standard_normal() + 1j * rng.standard_normal()
            b = rng.standard_normal() + 1j * rng.standard_normal()
            env = np.exp(-(grid.nodes[:, None] - 4.0 - 0.8 * (l + 4)) ** 2)
            field.values[0] += a * env * np.exp(1j * l * pw.angular_nodes(m))[None, :]
            field.values[1] += b * env * np.exp(1j * (l + 1) * pw.angular_nodes(m))[None, :]
        cset = pw.decompose(field, -5, 5)
        total = sum(l2_norm(cset[l]) ** 2 for l in cset)
        # independent oracle: direct 2D polar quadrature of the field norm
        assert total == pytest.approx(field.norm() ** 2, rel=1e-10)

    def test_aliasing_guard(self, grid):
        field = make_field(grid, 8, lambda r, p: (np.exp(-r), 0.0))
        with pytest.raises(ParameterError):
            pw.decompose(field, -4, 4)


class TestSynthesize:
    def test_empty_set_is_zero_field(self, grid):
        cset = pw.ChannelSet.zero(-1, 1, grid)
        field = pw.synthesize(cset, 12)
        assert field.norm() == 0.0

    def test_round_trip_identity(self, grid, rng):
        m = 24
        cset = pw.ChannelSet.zero(-2, 2, grid)
        for l in cset:
            cset.channels[l] = RadialSpinor(
                grid,
                rng.standard_normal(grid.n) * np.exp(-(grid.nodes - 6) ** 2 / 4),
                1j * rng.standard_normal(grid.n) * np.exp(-(grid.nodes - 8) ** 2 / 4))
        field = pw.synthesize(cset, m)
        back = pw.decompose(field, -2, 2)
        for l in cset:
            assert l2_norm(back[l] - cset[l]) < 1e-10 * max(l2_norm(cset[l]), 1.0)
        # two-channel field round trip in the other direction, sup-norm
        field2 = pw.synthesize(back, m)
        assert np.abs(field2.values - field.values).max() < 1e-10

    def test_rotation_phases(self, grid):
        m = 16
        h = np.exp(-(grid.nodes - 5.0) ** 2)
        field = make_field(grid, m,
                           lambda r, p: (np.exp(-(r - 5.0) ** 2) * np.exp(2j * p), 0.0))
        theta = 2.0 * math.pi * 3 / m
        rotated = field.rotated(theta)
        c0 = pw.decompose(field, 2, 2)[2]
        c1 = pw.decompose(rotated, 2, 2)[2]
        assert np.allclose(c1.f, c0.f * np.exp(-2j * theta))

    def test_parseval_unitarity_invariant(self, grid, rng):
        m = 32
        field = make_field(grid, m, lambda r, p: (0.0, 0.0))
        for l in (-3, 0, 2):
            env = np.exp(-(grid.nodes[:, None] - 6.0) ** 2 / 2)
            field.values[0] += env * np.exp(1j * l * pw.angular_nodes(m))[None, :] \
                * (rng.standard_normal() + 1j * rng.standard_normal())
        cset = pw.decompose(field, -6, 6)
        total = sum(l2_norm(cset[l]) ** 2 for l in cset)
        assert abs(total - field.norm() ** 2) / field.norm() ** 2 < 1e-10


class TestMagneticGradient:
    def test_zero_field(self, grid):
        cset = pw.ChannelSet.zero(0, 0, grid)
        assert pw.magnetic_gradient_norm(cset, 0.3) == 0.0

    def test_gaussian_mode_zero(self):
        # alpha=0, single mode m=0, h = exp(-r^2/2): integral |h'|^2 r dr = 1/2
        g = make_radial_grid(40.0, 4000, "uniform-trapezoid")
        h = np.exp(-g.nodes ** 2 / 2.0)
        cset = pw.ChannelSet.single(0, RadialSpinor(g, h, np.zeros(g.n)))
        assert pw.magnetic_gradient_norm(cset, 0.0) == pytest.approx(
            math.sqrt(0.5), rel=1e-4)


class TestSerialization:
    def test_channelset_round_trip(self, grid, rng):
        cset = pw.ChannelSet.zero(-1, 1, grid)
        for l in cset:
            cset.channels[l] = RadialSpinor(
                grid, rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n),
                rng.standard_normal(grid.n))
        back = pw.channelset_from_json(pw.channelset_to_json(cset))
        for l in cset:
            assert np.allclose(back[l].f, cset[l].f)
            assert np.allclose(back[l].g, cset[l].g)
        assert back.grid.scheme == grid.scheme

    def test_spinorfield_round_trip(self, grid):
        field = make_field(grid, 8, lambda r, p: (np.exp(-r) * np.exp(1j * p), 1.0))
        back = pw.spinorfield_from_json(pw.spinorfield_to_json(field))
        assert np.allclose(back.values, field.values)
