"""Slice-lattice action: cyclic shift, trace identity, constraint expectation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sqmlab.linalg import expm, kron, rand_hermitian, rand_ket
from sqmlab.timeslab import (
    SliceLayout,
    build_action,
    constraint_expectation,
    cycle_shift,
    embed_at_slice,
    trace_theorem_lhs,
    trace_theorem_rhs,
)

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


class TestLayout:
    def test_dims_and_total(self):
        lay = SliceLayout(d=3, N=4, eps=0.1)
        assert lay.dims == (3, 3, 3, 3)
        assert lay.total_dim == 81

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            SliceLayout(d=3, N=9, eps=0.1)  # 3^9 > 4096


class TestCycleShift:
    def test_two_qubit_shift_is_swap(self):
        S = cycle_shift(SliceLayout(d=2, N=2, eps=0.1))
        swap = np.array([
            [1, 0, 0, 0],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
        ], dtype=complex)
        np.testing.assert_array_equal(S.mat, swap)

    def test_order_n(self):
        lay = SliceLayout(d=2, N=3, eps=0.1)
        S = cycle_shift(lay)
        acc = S
        for _ in range(2):
            acc = acc @ S
        np.testing.assert_allclose(acc.mat, np.eye(lay.total_dim), atol=1e-14)

    def test_moves_slice_operator(self):
        lay = SliceLayout(d=2, N=3, eps=0.1)
        S = cycle_shift(lay)
        O = rand_hermitian(np.random.default_rng(0), 2)
        lhs = S @ embed_at_slice(O, 0, lay) @ S.dag()
        rhs = embed_at_slice(O, 1, lay)
        np.testing.assert_allclose(lhs.mat, rhs.mat, atol=1e-14)


class TestTraceTheorem:
    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(1, 5), st.integers(0, 3), SEEDS)
    def test_lhs_equals_rhs(self, d, N, n_inserts, seed):
        rng = np.random.default_rng(seed)
        qa = build_action(SliceLayout(d=d, N=N, eps=0.41), rand_hermitian(rng, d))
        k = min(n_inserts, N)
        slots = rng.choice(N, size=k, replace=False)
        inserts = [(rand_hermitian(rng, d), int(t)) for t in slots]
        lhs = trace_theorem_lhs(qa, inserts)
        rhs = trace_theorem_rhs(qa, inserts)
        assert lhs == pytest.approx(rhs, abs=1e-10 * max(1.0, abs(rhs)))

    def test_no_insertions_reduces_to_evolution_trace(self):
        rng = np.random.default_rng(1)
        d, N, eps = 3, 4, 0.2
        H = rand_hermitian(rng, d)
        qa = build_action(SliceLayout(d=d, N=N, eps=eps), H)
        lhs = trace_theorem_lhs(qa, [])
        direct = complex(np.trace(expm(-1j * eps * N * H).mat))
        assert lhs == pytest.approx(direct, abs=1e-12)

    def test_duplicate_slices_rejected(self):
        rng = np.random.default_rng(2)
        qa = build_action(SliceLayout(d=2, N=3, eps=0.1), rand_hermitian(rng, 2))
        O = rand_hermitian(rng, 2)
        with pytest.raises(ValueError):
            trace_theorem_lhs(qa, [(O, 1), (O, 1)])

    def test_exp_action_factorizes(self):
        rng = np.random.default_rng(3)
        d, N, eps = 2, 3, 0.3
        H = rand_hermitian(rng, d)
        lay = SliceLayout(d=d, N=N, eps=eps)
        qa = build_action(lay, H)
        V = expm(-1j * eps * H)
        expected = cycle_shift(lay) @ kron(V, V, V)
        np.testing.assert_allclose(qa.exp_action.mat, expected.mat, atol=1e-13)


class TestConstraintTheorem:
    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(2, 5), SEEDS, st.booleans())
    def test_expectation_vanishes(self, d, N, seed, with_boundary):
        rng = np.random.default_rng(seed)
        qa = build_action(SliceLayout(d=d, N=N, eps=0.37), rand_hermitian(rng, d))
        O = rand_hermitian(rng, d)
        if with_boundary:
            t = int(rng.integers(0, N - 1))
            boundary = (rand_ket(rng, d), rand_ket(rng, d))
        else:
            t = int(rng.integers(0, N))
            boundary = None
        value = constraint_expectation(qa, O, t, boundary)
        assert abs(value) <= 1e-10

    def test_boundary_requires_interior_slice(self):
        rng = np.random.default_rng(4)
        d, N = 2, 3
        qa = build_action(SliceLayout(d=d, N=N, eps=0.1), rand_hermitian(rng, d))
        O = rand_hermitian(rng, d)
        boundary = (rand_ket(rng, d), rand_ket(rng, d))
        with pytest.raises(ValueError):
            constraint_expectation(qa, O, N - 1, boundary)
