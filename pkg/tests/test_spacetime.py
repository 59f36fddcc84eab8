"""Spacetime density operator: marginals, witnesses, region reductions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sqmlab.linalg import rand_hermitian, rand_ket
from sqmlab.spacetime import (
    build_R,
    causality_witness,
    causality_witness_oracle,
    insertion_trace,
    marginal,
    power_and_pseudoentropy,
    reduce_to_region,
    renyi_pseudoentropy,
)

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def _state(seed: int, d: int = 2, N: int = 3, eps: float = 0.29):
    rng = np.random.default_rng(seed)
    return build_R(rand_ket(rng, d), rand_hermitian(rng, d), eps, N)


class TestMarginals:
    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(2, 4), SEEDS)
    def test_marginal_is_evolved_projector(self, d, N, seed):
        rng = np.random.default_rng(seed)
        st_state = build_R(rand_ket(rng, d), rand_hermitian(rng, d), 0.29, N)
        for t in range(N):
            marg = marginal(st_state, t).mat
            proj = st_state.evolved(t).outer().mat
            np.testing.assert_allclose(marg, proj, atol=1e-12)

    def test_unit_trace_powers(self):
        st_state = _state(1, d=3, N=3)
        for k in range(1, 7):
            _, tr = power_and_pseudoentropy(st_state, k)
            assert tr == pytest.approx(1.0, abs=1e-10)

    def test_renyi_vanishes(self):
        st_state = _state(2, d=2, N=4)
        for k in range(2, 7):
            assert abs(renyi_pseudoentropy(st_state, k)) <= 1e-10


class TestCausalityWitness:
    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(2, 4), SEEDS)
    def test_matches_heisenberg_commutator(self, d, N, seed):
        rng = np.random.default_rng(seed)
        st_state = build_R(rand_ket(rng, d), rand_hermitian(rng, d), 0.33, N)
        A, B = rand_hermitian(rng, d), rand_hermitian(rng, d)
        for t in range(1, N):
            w = causality_witness(st_state, A, B, t)
            o = causality_witness_oracle(st_state, A, B, t)
            assert w == pytest.approx(o, abs=1e-10 * max(1.0, abs(o)))

    def test_commuting_pair_gives_zero(self):
        # B built to commute with its own evolution: H diagonal, A = B = diag
        rng = np.random.default_rng(3)
        d, N = 3, 3
        from sqmlab.linalg import Operator

        H = Operator(np.diag([0.3, 1.1, 2.4]))
        A = Operator(np.diag([1.0, -2.0, 0.5]))
        st_state = build_R(rand_ket(rng, d), H, 0.4, N)
        assert abs(causality_witness(st_state, A, A, 1)) <= 1e-12

    def test_rejects_non_later_slice(self):
        st_state = _state(4)
        A = rand_hermitian(np.random.default_rng(0), 2)
        with pytest.raises(ValueError):
            causality_witness(st_state, A, A, 0)


class TestInsertionTrace:
    def test_single_insertion_is_heisenberg_expectation(self):
        rng = np.random.default_rng(5)
        d, N, eps = 2, 4, 0.25
        psi = rand_ket(rng, d)
        H = rand_hermitian(rng, d)
        st_state = build_R(psi, H, eps, N)
        O = rand_hermitian(rng, d)
        for t in range(N):
            val = insertion_trace(st_state, [(O, t)])
            expected = st_state.evolved(t).expectation(O)
            assert val == pytest.approx(expected, abs=1e-12)


class TestRegions:
    def test_equal_time_region_is_state_like(self):
        report = reduce_to_region(_state(6, d=3, N=3), [(1, 0)])
        assert report.is_state_like
        assert report.operator.trace() == pytest.approx(1.0, abs=1e-10)

    def test_cross_time_region_is_generically_not_hermitian(self):
        report = reduce_to_region(_state(7, d=2, N=4), [(0, 0), (2, 0)])
        assert report.herm_deviation > 1e-3
        assert not report.is_state_like

    def test_rejects_empty_and_out_of_range(self):
        st_state = _state(8)
        with pytest.raises(ValueError):
            reduce_to_region(st_state, [])
        with pytest.raises(ValueError):
            reduce_to_region(st_state, [(99, 0)])
