import math

import numpy as np
import pytest

from abdirac import spectral
from abdirac.grids import (RadialSpinor, inner, l2_norm, make_energy_grid,
                           make_radial_grid)
from abdirac.sampling import gaussian_bump
from abdirac.specfun import gamma_fn

SQRT_PI_HALF = math.sqrt(math.pi / 2.0)


class TestChannel:
    def test_bookkeeping_example(self):
        ch = spectral.Channel(-1, 0.5)
        assert ch.eps_l == -1.0
        assert ch.nu_f == pytest.approx(0.5)
        assert ch.nu_g == pytest.approx(0.5)
        assert ch.critical

    def test_critical_flag(self):
        assert spectral.Channel(-1, 0.3).critical
        assert not spectral.Channel(0, 0.3).critical
        assert not spectral.Channel(-2, 0.3).critical

    def test_conventions_coincide_off_critical(self):
        for l, alpha in [(0, 0.3), (3, 0.7), (-2, 0.4), (-5, 0.99)]:
            ch = spectral.Channel(l, alpha)
            assert ch.orders("paper") == pytest.approx(ch.orders("eigen"))

    def test_eigen_orders_critical(self):
        of, og, c = spectral.Channel(-1, 0.3).orders("eigen")  # k = -0.7
        assert (of, og, c) == pytest.approx((0.7, -0.3, -1.0))
        of, og, c = spectral.Channel(-1, 0.99).orders("eigen")  # k = -0.01
        assert (of, og, c) == pytest.approx((-0.01, 0.99, 1.0))

    def test_mu0(self):
        assert spectral.FieldSetup(0.3).mu0 == pytest.approx(0.3)
        assert spectral.FieldSetup(1.7).mu0 == pytest.approx(0.3)
        assert spectral.FieldSetup(0.5).mu0 == pytest.approx(0.5)
        assert spectral.FieldSetup(2.0).mu0 == 0.0


class TestEigenfunction:
    def test_small_r_law(self, rgrid):
        ch = spectral.Channel(2, 0.3)
        energy = 1.0
        chi = spectral.eigenfunction(ch, energy, rgrid)
        r = rgrid.nodes[:15]
        lead = (energy * r) ** ch.nu_f / (2.0 ** ch.nu_f * gamma_fn(1.0 + ch.nu_f))
        got = chi.f[:15].real / (SQRT_PI_HALF * ch.eps_l ** ch.l)
        assert np.allclose(got, lead, rtol=5e-3)

    def test_negative_energy_relations(self, rgrid):
        for l, alpha in [(1, 0.3), (-2, 0.5), (-1, 0.3)]:
            ch = spectral.Channel(l, alpha)
            plus = spectral.eigenfunction(ch, 2.0, rgrid)
            minus = spectral.eigenfunction(ch, -2.0, rgrid)
            assert np.allclose(minus.f, plus.f)
            assert np.allclose(minus.g, -plus.g)

    def test_eigen_matrix_rows(self):
        ch = spectral.Channel(1, 0.3)
        h = spectral.eigen_matrix(ch, 1.5, 2.0)
        assert h[1, 0] == pytest.approx(-h[0, 0])
        assert h[1, 1] == pytest.approx(h[0, 1])

    @pytest.mark.parametrize("l,alpha", [(0, 0.3), (2, 0.5), (-3, 0.3),
                                         (-1, 0.3), (-1, 0.5), (-1, 0.99)])
    def test_solves_eigen_problem(self, l, alpha):
        # fine uniform grid; residual on interior nodes only
        grid = make_radial_grid(20.0, 4000, "uniform-trapezoid")
        ch = spectral.Channel(l, alpha)
        chi = spectral.eigenfunction(ch, 1.0, grid)
        out = spectral.apply_radial_dirac(ch, chi)
        sel = (grid.nodes > 1.0) & (grid.nodes < 18.0)
        res = np.abs(out.f - chi.f)[sel].max() + np.abs(out.g - chi.g)[sel].max()
        assert res < 5e-5

    def test_residual_second_order(self):
        ch = spectral.Channel(0, 0.3)
        sups = []
        hs = []
        for n in (500, 1000, 2000):
            grid = make_radial_grid(20.0, n, "uniform-trapezoid")
            chi = spectral.eigenfunction(ch, 1.0, grid)
            out = spectral.apply_radial_dirac(ch, chi)
            sel = (grid.nodes > 0.5) & (grid.nodes < 18.0)
            sups.append(np.abs(out.f - chi.f)[sel].max()
                        + np.abs(out.g - chi.g)[sel].max())
            hs.append(20.0 / n)
        order = np.polyfit(np.log(hs), np.log(sups), 1)[0]
        assert order >= 1.8


class TestRadialDirac:
    def test_zero(self, rgrid):
        out = spectral.apply_radial_dirac(spectral.Channel(0, 0.3),
                                          RadialSpinor.zero(rgrid))
        assert l2_norm(out) == 0.0

    def test_symmetry(self):
        grid = make_radial_grid(30.0, 3000, "uniform-trapezoid")
        ch = spectral.Channel(1, 0.4)
        phi = gaussian_bump(grid, 10.0, 1.0, 1.0, 0.5j)
        psi = gaussian_bump(grid, 12.0, 1.5, 0.3 - 0.2j, 1.0)
        lhs = inner(psi, spectral.apply_radial_dirac(ch, phi))
        rhs = inner(spectral.apply_radial_dirac(ch, psi), phi)
        assert abs(lhs - rhs) < 1e-6 * abs(lhs)


class TestTransform:
    def test_zero(self, rgrid, egrid):
        coeff = spectral.forward_transform(spectral.Channel(0, 0.5),
                                           RadialSpinor.zero(rgrid), egrid)
        assert coeff.norm() == 0.0

    def test_isometry_gaussian(self, rgrid, egrid):
        ch = spectral.Channel(0, 0.3)
        phi = gaussian_bump(rgrid, 5.0, 1.0 / math.sqrt(2.0))  # exp(-(r-5)^2)
        coeff = spectral.forward_transform(ch, phi, egrid)
        n = l2_norm(phi)
        assert abs(coeff.norm() - n) / n < 1e-3

    @pytest.mark.parametrize("convention", ["paper", "eigen"])
    def test_round_trip_critical(self, rgrid, egrid, convention):
        ch = spectral.Channel(-1, 0.3)
        phi = gaussian_bump(rgrid, 8.0, 1.0, 1.0, 0.7j)
        op = spectral.TransformOperator(ch, rgrid, egrid, convention)
        back = op.inverse(op.forward(phi))
        assert l2_norm(back - phi) / l2_norm(phi) < 1e-3

    def test_zero_coefficients_invert_to_zero(self, rgrid, egrid):
        ch = spectral.Channel(1, 0.5)
        zero = spectral.SpectralCoeff(egrid, np.zeros(egrid.n, complex),
                                      np.zeros(egrid.n, complex))
        out = spectral.inverse_transform(ch, zero, rgrid)
        assert l2_norm(out) == 0.0

    def test_linearity(self, rgrid, egrid):
        ch = spectral.Channel(2, 0.5)
        op = spectral.TransformOperator(ch, rgrid, egrid)
        c1 = op.forward(gaussian_bump(rgrid, 6.0, 1.0))
        c2 = op.forward(gaussian_bump(rgrid, 9.0, 0.8, 0.4j, 1.0))
        both = spectral.SpectralCoeff(egrid, c1.plus + c2.plus, c1.minus + c2.minus)
        direct = op.inverse(both)
        split = op.inverse(c1) + op.inverse(c2)
        assert l2_norm(direct - split) < 1e-12

    def test_diagonalization_signs(self, egrid):
        grid = make_radial_grid(40.0, 2400, "uniform-trapezoid")
        for l, alpha in [(0, 0.3), (-2, 0.5), (-1, 0.3)]:
            ch = spectral.Channel(l, alpha)
            op = spectral.TransformOperator(ch, grid, egrid, "eigen")
            phi = gaussian_bump(grid, 9.0, 1.2, 1.0, 0.6j)
            dphi = spectral.apply_radial_dirac(ch, phi)
            c0 = op.forward(phi)
            cd = op.forward(dphi)
            e = egrid.nodes
            w = egrid.weights
            err_plus = np.sqrt(np.sum(w * np.abs(cd.plus - e * c0.plus) ** 2)
                               / np.sum(w * np.abs(cd.plus) ** 2))
            err_minus = np.sqrt(np.sum(w * np.abs(cd.minus + e * c0.minus) ** 2)
                                / np.sum(w * np.abs(cd.minus) ** 2))
            wrong = np.sqrt(np.sum(w * np.abs(cd.minus - e * c0.minus) ** 2)
                            / np.sum(w * np.abs(cd.minus) ** 2))
            assert err_plus < 1e-2
            assert err_minus < 1e-2
            assert wrong > 1.0  # the published +E claim on the minus branch fails

    def test_smeared_normalization_overlap(self, rgrid, egrid):
        ch = spectral.Channel(1, 0.3)
        op = spectral.TransformOperator(ch, rgrid, egrid)

        def packet(e0):
            g = np.exp(-(egrid.nodes - e0) ** 2 / (2 * 0.3 ** 2))
            return spectral.SpectralCoeff(egrid, g.astype(complex),
                                          np.zeros(egrid.n, complex))

        p1, p2 = packet(5.0), packet(5.3)
        phi1, phi2 = op.inverse(p1), op.inverse(p2)
        got = inner(phi1, phi2)
        want = np.sum(egrid.weights * np.conj(p1.plus) * p2.plus)
        assert abs(got - want) / abs(want) < 1e-2

    def test_cross_channel_orthogonality(self, rgrid):
        # different channels occupy orthogonal angular modes: exact zero
        from abdirac.partialwave import ChannelSet, synthesize
        phi = gaussian_bump(rgrid, 6.0, 1.0, 1.0, 0.5)
        f1 = synthesize(ChannelSet.single(0, phi), 16)
        f2 = synthesize(ChannelSet.single(1, phi), 16)
        dphi = 2 * math.pi / 16
        overlap = np.sum(rgrid.weights[None, :, None]
                         * np.conj(f1.values) * f2.values) * dphi
        assert abs(overlap) < 1e-14


class TestMatrixCache:
    def test_recurrence_parity(self):
        rg = make_radial_grid(40.0, 320)
        eg = make_energy_grid(40.0, 320)
        spectral.clear_caches()
        spectral.bessel_matrix(0.3, eg, rg)
        spectral.bessel_matrix(1.3, eg, rg)
        derived = spectral.bessel_matrix(2.3, eg, rg).copy()
        spectral.clear_caches()
        direct = spectral.bessel_matrix(2.3, eg, rg)
        assert np.abs(derived - direct).max() < 1e-10

    def test_lru_bounded(self):
        rg = make_radial_grid(10.0, 64)
        eg = make_energy_grid(10.0, 64)
        spectral.clear_caches()
        for k in range(12):
            spectral.bessel_matrix(0.25 * k, eg, rg)
        assert len(spectral._MATRIX_CACHE) <= spectral._MATRIX_CACHE_SIZE
