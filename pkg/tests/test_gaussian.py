"""Gaussian-trace correlators: pair values, tower resummations, kernels."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sqmlab.gaussian import (
    GaussianWeight,
    PoleError,
    feynman_kernel,
    feynman_kernel_closed,
    feynman_propagator_grid,
    gaussian_pair_correlator,
    tau_mode_correlator,
    two_time_closed_form,
    two_time_contraction,
)
from sqmlab.grids import ModeGrid, frequency_tower
from sqmlab.oracles import thermal_pair_bruteforce, timeordered_two_point_ed

LAMBDAS = st.builds(complex, st.floats(0.5, 4.0), st.floats(-3.0, 3.0))


class TestPairCorrelator:
    def test_weight_requires_positive_real_part(self):
        with pytest.raises(ValueError):
            GaussianWeight((0.5, -0.1))
        with pytest.raises(ValueError):
            GaussianWeight((1j,))

    def test_off_diagonal_vanishes(self):
        w = GaussianWeight((1.0, 2.0))
        assert gaussian_pair_correlator(w, 0, 1) == 0.0

    def test_pole_guard(self):
        with pytest.raises(PoleError):
            gaussian_pair_correlator(GaussianWeight((1e-13,)), 0, 0)

    @settings(max_examples=40, deadline=None)
    @given(LAMBDAS)
    def test_matches_truncated_fock_bruteforce(self, lam):
        analytic = gaussian_pair_correlator(GaussianWeight((lam,)), 0, 0)
        brute = thermal_pair_bruteforce(lam, n_max=80)
        assert analytic == pytest.approx(brute, abs=1e-12)

    def test_twenty_pinned_couplings_against_bruteforce(self):
        # real parts start at 0.6: at 0.5 the n_max=40 geometric tail is
        # ~5e-8, outside the 1e-8 budget this comparison pins
        lams = [0.6 + 0.35 * k for k in range(10)]
        lams += [0.6 + 0.3j * k for k in range(1, 6)]
        lams += [1.5 - 0.45j, 2.0 + 2.0j, 0.75 - 1.2j, 3.0 + 0.05j, 0.9 + 0.9j]
        assert len(lams) == 20
        for lam in lams:
            analytic = gaussian_pair_correlator(GaussianWeight((lam,)), 0, 0)
            brute = thermal_pair_bruteforce(lam, n_max=40)
            assert analytic == pytest.approx(brute, abs=1e-8)

    def test_four_point_factorization_against_dense_trace(self):
        # Gaussian moment <a†a†aa> = 2 <a†a>^2, checked against an
        # explicit truncated thermal trace at lam = 4 (truncation tail
        # e^{-lam*n_max} far below the tolerance)
        lam, n_max = 4.0, 8
        a = np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1)
        weight = np.diag(np.exp(-lam * np.arange(n_max + 1)))
        z = np.trace(weight)
        four = np.trace(weight @ a.T @ a.T @ a @ a) / z
        pair = gaussian_pair_correlator(GaussianWeight((lam,)), 0, 0)
        assert four == pytest.approx(2.0 * pair**2, abs=5e-11)


class TestTowerResummation:
    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(2, 40),
        st.floats(0.02, 0.5),
        st.floats(0.01, 0.4),
        st.floats(0.1, 2.5),
        st.integers(-45, 45),
    )
    def test_two_time_matches_closed_form(self, N, tau, eps_i, E, dt):
        grid = frequency_tower(N * tau, tau, energies=[E])
        lhs = two_time_contraction(grid, tau, eps_i, dt, 0)
        rhs = two_time_closed_form(N, tau, eps_i, E, dt)
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(2, 40),
        st.floats(0.02, 0.5),
        st.floats(0.01, 0.4),
        st.floats(0.1, 2.5),
        st.integers(-45, 45),
    )
    def test_feynman_matches_closed_form(self, N, tau, eps_i, E, dt):
        grid = frequency_tower(N * tau, tau, energies=[E])
        lhs = feynman_kernel(grid, tau, eps_i, dt)
        rhs = feynman_kernel_closed(N, tau, eps_i, E, dt)
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))

    def test_equal_time_contraction_is_unit(self):
        N, tau, eps_i, E = 400, 0.05, 0.4, 1.3
        val = two_time_closed_form(N, tau, eps_i, E, 0)
        assert val == pytest.approx(1.0, abs=2 * math.exp(-eps_i * N * tau))

    def test_anti_ordered_branch_is_conjugate(self):
        N, tau, eps_i, E, dt = 24, 0.1, 0.2, 0.9, 5
        fwd = two_time_closed_form(N, tau, eps_i, E, dt)
        rev = two_time_closed_form(N, -tau, -eps_i, E, dt)
        assert rev == pytest.approx(fwd.conjugate(), abs=1e-14)

    def test_kernel_even_in_time(self):
        N, tau, eps_i, E = 30, 0.08, 0.15, 1.1
        for dt in (1, 4, 13):
            assert feynman_kernel_closed(N, tau, eps_i, E, dt) == pytest.approx(
                feynman_kernel_closed(N, tau, eps_i, E, -dt), abs=1e-15
            )


class TestModeCorrelatorLimit:
    def test_tau_scaled_value_approaches_resolvent(self):
        grid = ModeGrid(T=2 * math.pi, modes=((2,),), energy_override=(1.2,))
        gap, eps_i = grid.gap(0), 0.05
        target = 1j / (gap + 1j * eps_i)
        errs = []
        for tau in (0.02, 0.01, 0.005):
            val = tau * tau_mode_correlator(grid, tau, eps_i, 0, 0)
            errs.append(abs(val - target))
        assert errs[0] / abs(target) < 0.01
        for k in range(2):
            assert errs[k + 1] / errs[k] == pytest.approx(0.5, abs=0.05)

    def test_onshell_value_grows_like_inverse_tau(self):
        T = 2 * math.pi
        grid = ModeGrid(T=T, modes=((2,),), energy_override=(2.0,))  # gap = 0
        tau, eps_i = 0.01, 0.05
        val = tau_mode_correlator(grid, tau, eps_i, 0, 0)
        assert val == pytest.approx(1.0 / (math.exp(tau * eps_i) - 1.0), rel=1e-12)

    def test_pole_without_regulator(self):
        grid = ModeGrid(T=2 * math.pi, modes=((2,),), energy_override=(2.0,))
        with pytest.raises(PoleError):
            tau_mode_correlator(grid, 0.1, 0.0, 0, 0)

    def test_distinct_modes_uncorrelated(self):
        grid = ModeGrid(T=5.0, modes=((1,), (2,)), energy_override=(1.0, 1.1))
        assert tau_mode_correlator(grid, 0.1, 0.05, 0, 1) == 0.0


class TestPropagatorGrid:
    def test_against_dense_hamiltonian_evolution(self):
        T, tau, eps_i = 100.0, 0.05, 0.07
        energies = [1.0, 1.7]
        grid = frequency_tower(T, tau, spatial=((0,), (1,)), M_sites=2, energies=energies)
        for dt in (0, 1, 2, 3):
            val = feynman_propagator_grid(grid, tau, eps_i, (dt, 0), (0, 0))
            oracle = timeordered_two_point_ed(2, energies, 0, 0, tau * dt, n_max=4)
            assert abs(val - oracle) <= 0.02 * abs(oracle)

    def test_spatial_exchange_symmetry(self):
        T, tau, eps_i = 40.0, 0.1, 0.1
        grid = frequency_tower(T, tau, spatial=((0,), (1,)), M_sites=2,
                               energies=[0.9, 1.4])
        a = feynman_propagator_grid(grid, tau, eps_i, (3, 1), (0, 0))
        b = feynman_propagator_grid(grid, tau, eps_i, (3, 0), (0, 1))
        assert a == pytest.approx(b, abs=1e-12)

    def test_requires_site_lattice(self):
        grid = frequency_tower(4.0, 0.5, energies=[1.0])
        with pytest.raises(ValueError):
            feynman_propagator_grid(grid, 0.5, 0.1, (1, 0), (0, 0))
