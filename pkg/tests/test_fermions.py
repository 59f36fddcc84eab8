"""Tests for the gamma algebra, Jordan-Wigner lattice, fermionic cycle,
parity-weighted Gaussian traces, and the matrix-valued mode propagator."""

import math

import numpy as np
import pytest

from sqmlab.fermions import (
    FERMION_DIM_CAP,
    METRIC,
    FermionLayout,
    dirac_mode_propagator,
    dirac_propagator_limit,
    fermionic_cycle,
    fswap,
    gamma_set,
    jw_annihilator,
    parity_operator,
    parity_pair_correlator,
    parity_weighted_trace,
    quadratic_action,
    regulated_mass,
)
from sqmlab.linalg import Operator, SingularMatrixError

EYE4 = np.eye(4)


# ---------------------------------------------------------------------------
# gamma algebra


def test_clifford_relations_exact():
    g = gamma_set()
    for mu in range(4):
        for nu in range(4):
            anti = g.gamma(mu) @ g.gamma(nu) + g.gamma(nu) @ g.gamma(mu)
            assert np.max(np.abs(anti - 2.0 * METRIC[mu, nu] * EYE4)) <= 1e-14


def test_gamma_traces():
    g = gamma_set()
    for mu in range(4):
        assert np.trace(g.gamma(mu)) == 0.0
        for nu in range(4):
            tr = np.trace(g.gamma(mu) @ g.gamma(nu))
            assert tr == pytest.approx(4.0 * METRIC[mu, nu], abs=1e-14)


def test_slash_conventions():
    g = gamma_set()
    assert np.array_equal(g.slash((1.0, 0.0, 0.0, 0.0)), g.gamma(0))
    # lowering a spatial index flips its sign in the (+,-,-,-) signature
    assert np.array_equal(g.slash((0.0, 1.0, 0.0, 0.0)), -g.gamma(1))
    p = (0.9, 0.3, -0.2, 0.1)
    sq = g.slash(p) @ g.slash(p)
    p_sq = p[0] ** 2 - p[1] ** 2 - p[2] ** 2 - p[3] ** 2
    assert np.allclose(sq, p_sq * EYE4, atol=1e-14)
    with pytest.raises(ValueError):
        g.slash((1.0, 0.0))


# ---------------------------------------------------------------------------
# fswap and the Jordan-Wigner layout


def test_fswap_matrix_entries():
    expected = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    F = fswap()
    assert isinstance(F, Operator)
    assert np.array_equal(F.mat, expected)
    # squares to the fermionic double exchange, not the identity
    assert np.array_equal((F @ F).mat, np.diag([1.0, -1.0, -1.0, 1.0]))


def test_fswap_conjugation_is_gaussian():
    layout = FermionLayout(2, 1)
    F = fswap().mat
    c0 = jw_annihilator(layout, 0, 0).mat
    c1 = jw_annihilator(layout, 1, 0).mat
    assert np.array_equal(F @ c0 @ F.conj().T, c1)
    assert np.array_equal(F @ c1 @ F.conj().T, -c0)


def test_layout_legs_and_bounds():
    layout = FermionLayout(3, 2)
    assert layout.legs == 6
    assert layout.dim == 64
    assert layout.leg(0, 0) == 0
    assert layout.leg(2, 1) == 5
    with pytest.raises(ValueError):
        layout.leg(3, 0)
    with pytest.raises(ValueError):
        layout.leg(0, 2)


def test_layout_cap_and_validation():
    assert FermionLayout(12, 1).dim == FERMION_DIM_CAP
    with pytest.raises(ValueError, match="cap"):
        FermionLayout(13, 1)
    with pytest.raises(ValueError):
        FermionLayout(0, 1)


def test_canonical_anticommutators():
    layout = FermionLayout(2, 2)
    eye = np.eye(layout.dim)
    cs = [jw_annihilator(layout, t, m).mat for t in range(2) for m in range(2)]
    for a, ca in enumerate(cs):
        for b, cb in enumerate(cs):
            acc = ca @ cb.conj().T + cb.conj().T @ ca
            assert np.array_equal(acc, (eye if a == b else 0.0 * eye))
            assert np.array_equal(ca @ cb + cb @ ca, 0.0 * eye)


def test_anticommutators_on_eight_legs():
    layout = FermionLayout(4, 2)
    eye = np.eye(layout.dim)
    c_first = jw_annihilator(layout, 0, 0).mat
    c_last = jw_annihilator(layout, 3, 1).mat
    assert np.array_equal(c_first @ c_last + c_last @ c_first, 0.0 * eye)
    assert np.array_equal(
        c_first @ c_first.conj().T + c_first.conj().T @ c_first, eye
    )
    assert np.array_equal(
        c_first @ c_last.conj().T + c_last.conj().T @ c_first, 0.0 * eye
    )


def test_parity_operator_grades_the_algebra():
    layout = FermionLayout(2, 2)
    P = parity_operator(layout).mat
    assert np.array_equal(P @ P, np.eye(layout.dim))
    for t in range(2):
        for m in range(2):
            c = jw_annihilator(layout, t, m).mat
            assert np.array_equal(P @ c @ P, -c)


# ---------------------------------------------------------------------------
# fermionic cyclic shift


def test_cycle_two_slices_is_fswap():
    layout = FermionLayout(2, 1)
    U, signs = fermionic_cycle(layout)
    assert signs == (1, -1)
    assert np.allclose(U.mat, fswap().mat, atol=1e-14)


def test_cycle_single_slice_is_identity():
    layout = FermionLayout(1, 3)
    U, signs = fermionic_cycle(layout)
    assert signs == (1, 1, 1)
    assert np.array_equal(U.mat, np.eye(layout.dim))


def test_cycle_three_slices():
    layout = FermionLayout(3, 1)
    U, signs = fermionic_cycle(layout)
    assert signs == (1, 1, 1)
    P = parity_operator(layout).mat
    assert np.allclose(U.mat @ P - P @ U.mat, 0.0, atol=1e-14)
    # third power closes with sign +1 on both parity sectors
    U3 = U.mat @ U.mat @ U.mat
    assert np.allclose(U3, np.eye(layout.dim), atol=1e-12)


def test_cycle_two_slices_two_modes():
    layout = FermionLayout(2, 2)
    U, signs = fermionic_cycle(layout)
    assert signs == (1, 1, -1, -1)
    # unitary, commutes with parity
    assert np.allclose(U.mat @ U.mat.conj().T, np.eye(layout.dim), atol=1e-13)
    P = parity_operator(layout).mat
    assert np.allclose(U.mat @ P, P @ U.mat, atol=1e-13)


def test_cycle_conjugation_moves_every_leg():
    layout = FermionLayout(3, 2)
    U, signs = fermionic_cycle(layout)
    L = layout.legs
    for t in range(3):
        for m in range(2):
            leg = layout.leg(t, m)
            c = jw_annihilator(layout, t, m).mat
            target = jw_annihilator(layout, (t + 1) % 3, m).mat
            moved = U.mat @ c @ U.mat.conj().T
            err = np.max(np.abs(moved - signs[leg] * target))
            assert err <= 1e-12


# ---------------------------------------------------------------------------
# parity-weighted Gaussian traces


def test_normalized_trace_without_insertions_is_one():
    layout = FermionLayout(2, 1)
    S = quadratic_action(layout, np.diag([0.7, -0.4]))
    assert parity_weighted_trace(layout, S, []) == pytest.approx(1.0, abs=1e-15)


def test_odd_insertion_traces_vanish():
    layout = FermionLayout(2, 1)
    S = quadratic_action(layout, np.array([[0.7, 0.2], [0.1, -0.4]]))
    for leg in ((0, 0), (1, 0)):
        c = jw_annihilator(layout, *leg)
        assert abs(parity_weighted_trace(layout, S, [c])) <= 1e-14


def test_pair_correlator_matches_dense_trace():
    layout = FermionLayout(2, 2)
    rng = np.random.default_rng(7)
    L = layout.legs
    A = 0.3 * (rng.normal(size=(L, L)) + 1j * rng.normal(size=(L, L)))
    S = quadratic_action(layout, A)
    law = parity_pair_correlator(A)
    ladders = [
        jw_annihilator(layout, t, m) for t in range(2) for m in range(2)
    ]
    worst = 0.0
    for a in range(L):
        for b in range(L):
            dense = parity_weighted_trace(
                layout, S, [ladders[a], ladders[b].dag()]
            )
            worst = max(worst, abs(dense - law[a, b]))
    assert worst <= 1e-10


def test_quadratic_action_shape_validation():
    layout = FermionLayout(2, 1)
    with pytest.raises(ValueError, match="2x2"):
        quadratic_action(layout, np.eye(3))


def test_trace_space_validation():
    layout = FermionLayout(2, 1)
    other = FermionLayout(3, 1)
    S_other = quadratic_action(other, np.diag([0.3, 0.2, 0.1]))
    with pytest.raises(ValueError, match="wrong space"):
        parity_weighted_trace(layout, S_other, [])
    S = quadratic_action(layout, np.diag([0.3, 0.2]))
    with pytest.raises(ValueError, match="wrong space"):
        parity_weighted_trace(layout, S, [jw_annihilator(other, 0, 0)])


def test_vanishing_normalization_raises():
    layout = FermionLayout(1, 1)
    S = quadratic_action(layout, np.array([[0.0]]))
    with pytest.raises(ZeroDivisionError):
        parity_weighted_trace(layout, S, [])


def test_singular_gaussian_law_raises():
    with pytest.raises(SingularMatrixError):
        parity_pair_correlator(np.array([[0.0]]))


# ---------------------------------------------------------------------------
# Dirac mode propagator


def test_regulated_mass():
    assert regulated_mass(1.0, 0.0) == 1.0
    m_c = regulated_mass(1.0, 1e-3)
    assert m_c.imag < 0
    assert m_c**2 == pytest.approx(1.0 - 1e-3j, rel=1e-15)


def test_rest_frame_propagator_closed_form():
    p0, m, eps_i, tau = 0.35, 1.0, 1e-3, 0.01
    m_c = regulated_mass(m, eps_i)
    got = dirac_mode_propagator((p0, 0.0, 0.0, 0.0), m, tau, eps_i)
    upper = 1.0 / (1.0 - np.exp(1j * tau * (p0 - m_c)))
    lower = 1.0 / (1.0 - np.exp(1j * tau * (p0 + m_c)))
    expected = np.diag([upper, upper, lower, lower]) @ gamma_set().gamma(0)
    assert np.max(np.abs(got - expected)) <= 1e-12


def test_limit_satisfies_dirac_equation():
    g = gamma_set()
    p = (0.9, 0.3, -0.2, 0.1)
    eps_i = 1e-3
    m_c = regulated_mass(1.0, eps_i)
    lim = dirac_propagator_limit(p, 1.0, eps_i)
    assert np.allclose((g.slash(p) - m_c * EYE4) @ lim, 1j * EYE4, atol=1e-13)


@pytest.mark.parametrize("p", [(0.35, 0.0, 0.0, 0.0), (0.9, 0.3, -0.2, 0.1)])
def test_propagator_linear_in_tau_toward_limit(p):
    m, eps_i = 1.0, 1e-3
    lim = dirac_propagator_limit(p, m, eps_i)
    errs = []
    for tau in (0.01, 0.005, 0.0025):
        val = tau * dirac_mode_propagator(p, m, tau, eps_i)
        errs.append(np.linalg.norm(val - lim))
    # first-order error: each halving of tau halves the deviation
    for e_big, e_small in zip(errs, errs[1:]):
        assert abs(e_small / e_big - 0.5) <= 0.05


def test_propagator_argument_guards():
    with pytest.raises(ValueError):
        dirac_mode_propagator((0.35, 0.0, 0.0, 0.0), 1.0, 0.0, 1e-3)
    # exactly on shell with no regulator the pair matrix is singular
    with pytest.raises(SingularMatrixError):
        dirac_mode_propagator((1.0, 0.0, 0.0, 0.0), 1.0, 0.01, 0.0)
