import math
from fractions import Fraction

import numpy as np
import pytest

from phasequant.grid import GridSpec, PhasePoint, Signal, fourier, l2_inner, phase_space_inner, symplectic_fourier
from phasequant.quantizers import HeisenbergParams, build_op_tau, heisenberg_apply, weak_matrix_element
from phasequant.signals import Gaussian, Hermite, two_gaussian
from phasequant.transforms import (
    born_jordan_distribution,
    cross_ambiguity,
    cross_wigner,
    direct_tau_wigner_oracle,
    marginals,
    rihaczek,
    tau_symbol_of_projector,
    tau_wigner,
    theta_multiplier,
    theta_tau_kernel,
)
from phasequant.oracles import simpson_bj_distribution

from conftest import random_gaussian


def _px(grid):
    return np.outer(grid.x, grid.p)


class TestCrossWigner:
    def test_gaussian_closed_form(self, grid):
        psi = Gaussian.normalized().sample(grid)
        X, P = grid.mesh()
        expected = np.exp(-(X ** 2 + P ** 2)) / math.pi
        assert np.max(np.abs(cross_wigner(psi, psi).samples - expected)) <= 1e-8

    def test_real_for_equal_signals(self, grid):
        psi = Gaussian.normalized(complex(1.0, 0.4), 0.8, -0.6).sample(grid)
        assert np.max(np.abs(cross_wigner(psi, psi).samples.imag)) <= 1e-12

    def test_normalisation(self, grid):
        psi = Hermite(2).sample(grid)
        w = cross_wigner(psi, psi)
        assert grid.dx * grid.dp * w.samples.sum() == pytest.approx(1.0, abs=1e-8)

    def test_hermitian(self, grid):
        psi = Gaussian.normalized(1.0, 0.5, 0.2).sample(grid)
        phi = Hermite(1).sample(grid)
        a = cross_wigner(psi, phi).samples
        b = cross_wigner(phi, psi).samples
        assert np.max(np.abs(a - np.conj(b))) <= 1e-12

    def test_direct_two_dimensional_quadrature(self):
        # independent brute-force evaluation of the defining integral for a
        # shifted Gaussian pair at a few points
        grid = GridSpec(128, -12.0, 12.0)
        g1, g2 = Gaussian.normalized(1.0, 0.5, 0.3), Gaussian.normalized(1.2, -0.2, -0.1)
        w = cross_wigner(g1.sample(grid), g2.sample(grid)).samples
        y = np.linspace(-16, 16, 8001)
        dy = y[1] - y[0]
        for i, k in ((64, 64), (70, 60), (58, 69)):
            x, p = grid.x[i], grid.p[k]
            integrand = np.exp(-1j * p * y) * g1(x + y / 2) * np.conj(g2(x - y / 2))
            ref = dy * integrand.sum() / (2 * math.pi)
            assert w[i, k] == pytest.approx(ref, abs=1e-10)


class TestTauWigner:
    def test_half_is_cross_wigner(self, grid):
        psi, phi = Hermite(1).sample(grid), Gaussian.normalized(1.0, 0.4).sample(grid)
        a = tau_wigner(psi, phi, 0.5).samples
        assert np.max(np.abs(a - cross_wigner(psi, phi).samples)) <= 1e-13

    def test_zero_is_rihaczek(self, grid):
        g = Gaussian.normalized(complex(1.1, 0.2), 0.5, -0.3)
        psi = g.sample(grid)
        X, P = grid.mesh()
        expected = np.exp(-1j * X * P) * g(X) * np.conj(g.ft(P)) / math.sqrt(2 * math.pi)
        assert np.max(np.abs(tau_wigner(psi, psi, 0.0).samples - expected)) <= 1e-8
        assert np.max(np.abs(rihaczek(psi, psi).samples - expected)) <= 1e-8

    def test_matches_literal_oracle(self, grid, rng):
        for _ in range(2):
            psi, phi = random_gaussian(rng).sample(grid), random_gaussian(rng).sample(grid)
            fast = tau_wigner(psi, phi, 0.3).samples
            slow = direct_tau_wigner_oracle(psi, phi, (3, 10)).samples
            assert np.max(np.abs(fast - slow)) <= 1e-6

    def test_conjugation_symmetry(self, grid):
        psi, phi = Gaussian.normalized(1.0, 0.5, 0.3).sample(grid), Hermite(2).sample(grid)
        for tau in (0.0, 0.3, 0.75):
            a = tau_wigner(phi, psi, tau).samples
            b = np.conj(tau_wigner(psi, phi, 1 - tau).samples)
            assert np.max(np.abs(a - b)) <= 1e-10

    @pytest.mark.parametrize("tau", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_marginals(self, grid, tau):
        for psi in (Gaussian.normalized(1.3, 0.8, -0.5).sample(grid), Hermite(3).sample(grid)):
            mx, mp = marginals(tau_wigner(psi, psi, tau))
            assert grid.dx * np.sum(np.abs(mx - np.abs(psi.samples) ** 2)) <= 1e-6
            assert grid.dp * np.sum(np.abs(mp - np.abs(fourier(psi).samples) ** 2)) <= 1e-6

    def test_moyal(self, grid, rng):
        quad = [random_gaussian(rng).sample(grid) for _ in range(4)]
        for tau in (0.0, 0.3, 0.5, 1.0):
            lhs = phase_space_inner(tau_wigner(quad[0], quad[1], tau), tau_wigner(quad[2], quad[3], tau))
            rhs = l2_inner(quad[0], quad[2]) * np.conj(l2_inner(quad[1], quad[3])) / (2 * math.pi)
            assert abs(lhs - rhs) / abs(rhs) <= 1e-8

    def test_translation_covariance(self, grid):
        psi = Gaussian.normalized(1.0, 0.5, 0.25).sample(grid)
        sx, sp = 12, -7
        z0 = PhasePoint(sx * grid.dx, sp * grid.dp)
        moved = heisenberg_apply(HeisenbergParams(z0, 0.5), psi)
        for tau in (0.0, 0.3, 0.5):
            lhs = tau_wigner(moved, moved, tau).samples
            rhs = tau_wigner(psi, psi, tau).shifted(sx, sp).samples
            assert np.max(np.abs(lhs - rhs)) <= 1e-8

    @pytest.mark.parametrize("tau", [0.2, 0.5, 0.8])
    def test_bounded_at_origin(self, grid, tau):
        psi = Gaussian.normalized(1.0, 0.0, 0.0).sample(grid)
        phi = Gaussian.normalized(0.8, 0.1, 0.1).sample(grid)
        w0 = abs(tau_wigner(psi, phi, tau).samples[grid.n // 2, grid.n // 2])
        bound = psi.norm() * phi.norm() / (2 * math.pi * math.sqrt(tau * (1 - tau)))
        assert w0 <= bound * (1 + 1e-6)


class TestLiteralOracle:
    def test_half(self, grid):
        psi = Gaussian.normalized(1.0, 0.3, 0.2).sample(grid)
        phi = Hermite(1).sample(grid)
        slow = direct_tau_wigner_oracle(psi, phi, (1, 2)).samples
        assert np.max(np.abs(slow - cross_wigner(psi, phi).samples)) <= 1e-8

    def test_zero(self, grid):
        g = Gaussian.normalized(1.0, 0.4, -0.2)
        psi = g.sample(grid)
        X, P = grid.mesh()
        expected = np.exp(-1j * X * P) * g(X) * np.conj(g.ft(P)) / math.sqrt(2 * math.pi)
        assert np.max(np.abs(direct_tau_wigner_oracle(psi, psi, (0, 1)).samples - expected)) <= 1e-8

    def test_quarter_conjugate_three_quarters(self, grid):
        psi = Gaussian.normalized(1.0, 0.4, 0.3).sample(grid)
        phi = Gaussian.normalized(1.3, -0.2, 0.0).sample(grid)
        a = direct_tau_wigner_oracle(phi, psi, Fraction(1, 4)).samples
        b = direct_tau_wigner_oracle(psi, phi, Fraction(3, 4)).samples
        assert np.max(np.abs(a - np.conj(b))) <= 1e-10

    def test_rejects_incompatible_refinement(self, grid):
        psi = Hermite(0).sample(grid)
        with pytest.raises(ValueError):
            direct_tau_wigner_oracle(psi, psi, (1, 4), refine=2)


class TestBornJordanDistribution:
    def test_real(self, grid):
        psi = Gaussian.normalized(complex(1.0, 0.3), 0.5, -0.2).sample(grid)
        assert np.max(np.abs(born_jordan_distribution(psi, psi).samples.imag)) <= 1e-10

    def test_marginals(self, grid):
        psi = Hermite(2).sample(grid)
        mx, mp = marginals(born_jordan_distribution(psi, psi))
        assert grid.dx * np.sum(np.abs(mx - np.abs(psi.samples) ** 2)) <= 1e-6
        assert grid.dp * np.sum(np.abs(mp - np.abs(fourier(psi).samples) ** 2)) <= 1e-6

    def test_simpson_oracle(self, grid):
        psi = Gaussian.normalized(1.0, 0.5).sample(grid)
        q = born_jordan_distribution(psi, psi).samples
        assert np.max(np.abs(q - simpson_bj_distribution(psi, psi, 65).samples)) <= 1e-6

    def test_interference_suppressed(self, grid):
        psi = two_gaussian(8.0).sample(grid)
        strip = np.abs(grid.x) < 1
        w = np.abs(cross_wigner(psi, psi).samples)[strip].max()
        q = np.abs(born_jordan_distribution(psi, psi).samples)[strip].max()
        assert q < w


class TestMultipliers:
    def test_theta_axes_and_bound(self, grid):
        th = theta_multiplier(grid).samples
        assert np.all(th[grid.n // 2, :] == 1.0)
        assert np.all(th[:, grid.n // 2] == 1.0)
        assert np.max(np.abs(th)) <= 1 + 1e-12

    def test_theta_zero(self):
        grid = GridSpec(256, -16.0, 16.0)
        # x = 2 (index 144), p = pi (index 144): px = 2 pi hbar
        th = theta_multiplier(grid).samples
        assert grid.x[144] * grid.p[144] == pytest.approx(2 * math.pi)
        assert abs(th[144, 144]) <= 1e-12

    def test_theta_tau_kernel(self, grid):
        for tau in (0.0, 0.25, 1.0):
            k = theta_tau_kernel(grid, tau).samples
            assert np.allclose(np.abs(k), 1 / (abs(2 * tau - 1) * math.pi))
            # evenness: index reflection about the origin
            n = grid.n
            idx = (n - np.arange(n)) % n
            assert np.max(np.abs(k[idx][:, idx] - k)[1:, 1:]) <= 1e-12
        with pytest.raises(ValueError):
            theta_tau_kernel(grid, 0.5)

    @pytest.mark.parametrize("tau", [1.5, -0.5])
    def test_theta_tau_fourier(self, grid, tau):
        # chirp rate 2/(2 tau - 1) = +-1 maps the lattice onto itself, so the
        # discrete sigma-Fourier transform resolves the chirp exactly
        f = symplectic_fourier(theta_tau_kernel(grid, tau)).samples
        expected = np.exp(0.5j * (2 * tau - 1) * _px(grid)) / (2 * math.pi)
        assert np.max(np.abs(f - expected)) <= 1e-8


class TestAmbiguity:
    def test_origin(self, grid):
        psi, phi = Hermite(0).sample(grid), Gaussian.normalized(1.0, 0.7, 0.2).sample(grid)
        a = cross_ambiguity(psi, phi).samples[grid.n // 2, grid.n // 2]
        assert a == pytest.approx(l2_inner(psi, phi) / (2 * math.pi), abs=1e-12)

    def test_toggle(self, grid):
        psi, phi = Gaussian.normalized(1.0, 0.5, 0.2).sample(grid), Hermite(1).sample(grid)
        fa = symplectic_fourier(cross_ambiguity(psi, phi)).samples
        assert np.max(np.abs(fa - cross_wigner(psi, phi).samples)) <= 1e-8

    @pytest.mark.parametrize("tau", [0.0, 0.3, 0.5, 1.0])
    def test_heisenberg_inner_products(self, grid, rng, tau):
        psi = Gaussian.normalized(1.0, 0.5, 0.2).sample(grid)
        phi = Gaussian.normalized(1.2, -0.4, 0.1).sample(grid)
        a = cross_ambiguity(psi, phi, tau).samples
        for _ in range(10):
            i, k = rng.integers(grid.n // 2 - 20, grid.n // 2 + 20, 2)
            z = PhasePoint(grid.x[i], grid.p[k])
            ref = l2_inner(psi, heisenberg_apply(HeisenbergParams(z, tau), phi)) / (2 * math.pi)
            assert a[i, k] == pytest.approx(ref, abs=1e-8)


class TestProjectorSymbol:
    def test_weak_form(self, grid, rng):
        psi = Gaussian.normalized(1.0, 0.3, -0.2).sample(grid)
        phi = Hermite(1).sample(grid)
        for tau in (0.0, 0.3, 0.5, 1.0):
            sym = tau_symbol_of_projector(psi, phi, tau)
            for _ in range(5):
                u, v = random_gaussian(rng).sample(grid), random_gaussian(rng).sample(grid)
                got = weak_matrix_element(sym, u, v, tau)
                ref = l2_inner(u, phi) * l2_inner(psi, v)
                assert abs(got - ref) <= 1e-6 * abs(ref)

    def test_trace(self, grid):
        psi = Gaussian.normalized(1.0, 0.3).sample(grid)
        op = build_op_tau(tau_symbol_of_projector(psi, psi, 0.3), 0.3, grid)
        assert grid.dx * np.trace(op.entries) == pytest.approx(1.0, abs=1e-8)

    def test_weyl_case(self, grid):
        psi = Hermite(2).sample(grid)
        sym = tau_symbol_of_projector(psi, psi, 0.5).samples
        assert np.max(np.abs(sym - 2 * math.pi * cross_wigner(psi, psi).samples)) <= 1e-14
