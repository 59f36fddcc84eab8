"""Classical mode-space brackets, constraint classification, Dirac brackets.

The classical phase space is spanned by complex normal-mode pairs
(a_n, a*_n) with {a_n, a*_n'} = -i delta_{nn'}.  Demanding the Hamilton
equations hold as constraints on the covariant mode space produces one
pair of linear constraints per mode,

    phi_1 = (w_n - E_n) a_n,    phi_2 = (w_n - E_n) a*_n,

whose bracket matrix is block-antidiagonal with entries ±i*gap^2.  The
dichotomy is sharp: off-shell modes (gap != 0) give invertible blocks —
second-class constraints that Dirac-reduce the pair away entirely
({a, a*}_DB = 0) — while on-shell modes give identically vanishing
constraints and keep their canonical bracket.  Equal-time field/momentum
brackets rebuilt from the surviving modes come out exactly Kronecker.

Also here: the residual form of the discrete Hamilton equations for a
particle action on a periodic time grid with a Fourier derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .grids import ModeGrid

ONSHELL_TOL = 1e-12
CONDITIONING_BAND = 1e-6


class LinearObservable:
    """Finite complex combination of the symbols a_k and a*_k.

    Supports +, -, and scalar multiplication; the bracket engine works
    on this linear span only.
    """

    __slots__ = ("coeff_a", "coeff_s")

    def __init__(self, coeff_a: dict[int, complex] | None = None,
                 coeff_s: dict[int, complex] | None = None):
        self.coeff_a = {k: complex(v) for k, v in (coeff_a or {}).items() if v != 0}
        self.coeff_s = {k: complex(v) for k, v in (coeff_s or {}).items() if v != 0}

    def __add__(self, other: "LinearObservable") -> "LinearObservable":
        ca = dict(self.coeff_a)
        cs = dict(self.coeff_s)
        for k, v in other.coeff_a.items():
            ca[k] = ca.get(k, 0.0) + v
        for k, v in other.coeff_s.items():
            cs[k] = cs.get(k, 0.0) + v
        return LinearObservable(ca, cs)

    def __sub__(self, other: "LinearObservable") -> "LinearObservable":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "LinearObservable":
        z = complex(scalar)
        return LinearObservable(
            {k: z * v for k, v in self.coeff_a.items()},
            {k: z * v for k, v in self.coeff_s.items()},
        )

    __rmul__ = __mul__

    def __repr__(self):
        return f"LinearObservable(a={self.coeff_a}, a*={self.coeff_s})"


def mode_a(k: int) -> LinearObservable:
    return LinearObservable({k: 1.0}, None)


def mode_astar(k: int) -> LinearObservable:
    return LinearObservable(None, {k: 1.0})


def poisson_bracket(f: LinearObservable, g: LinearObservable) -> complex:
    """Bilinear extension of {a_k, a*_k'} = -i delta_{kk'}."""
    total = 0.0 + 0.0j
    for k, fa in f.coeff_a.items():
        gs = g.coeff_s.get(k)
        if gs is not None:
            total += -1j * fa * gs
    for k, fs in f.coeff_s.items():
        ga = g.coeff_a.get(k)
        if ga is not None:
            total += 1j * fs * ga
    return complex(total)


@dataclass(frozen=True)
class ConstraintSet:
    """Per-mode linear constraints phi = gap * (a, a*) with their C-matrix.

    `second_class` lists mode positions whose 2x2 block is invertible;
    modes with |gap| <= 1e-12 carry identically vanishing constraints
    and are excluded from the Dirac correction.
    """

    grid: ModeGrid
    gaps: tuple[float, ...]
    second_class: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        sc = tuple(k for k, d in enumerate(self.gaps) if abs(d) > ONSHELL_TOL)
        object.__setattr__(self, "second_class", sc)

    def phi_pair(self, k: int) -> tuple[LinearObservable, LinearObservable]:
        d = self.gaps[k]
        return d * mode_a(k), d * mode_astar(k)

    def c_block(self, k: int) -> np.ndarray:
        d2 = self.gaps[k] ** 2
        return np.array([[0.0, -1j * d2], [1j * d2, 0.0]])


def build_constraints(grid: ModeGrid) -> ConstraintSet:
    return ConstraintSet(grid, tuple(grid.gap(k) for k in range(len(grid))))


@dataclass(frozen=True)
class ModeClassification:
    mode: tuple[int, ...]
    gap: float
    kind: str  # 'second-class' | 'identically-zero'
    conditioning_warning: bool


def classify(cs: ConstraintSet) -> list[ModeClassification]:
    """Per-mode constraint class; scale-invariant in the gaps.

    No first-class constraints can occur here — the C-matrix blocks are
    either invertible or exactly zero — but near-on-shell second-class
    modes (|gap| < 1e-6) are flagged since the Dirac correction involves
    gap^{-2}.
    """
    out = []
    for k, d in enumerate(cs.gaps):
        second = abs(d) > ONSHELL_TOL
        out.append(
            ModeClassification(
                mode=cs.grid.modes[k],
                gap=d,
                kind="second-class" if second else "identically-zero",
                conditioning_warning=second and abs(d) < CONDITIONING_BAND,
            )
        )
    return out


def dirac_bracket(f: LinearObservable, g: LinearObservable, cs: ConstraintSet) -> complex:
    """{f,g} - sum_AB {f,phi_A} (C^{-1})_AB {phi_B,g} over second-class blocks."""
    total = poisson_bracket(f, g)
    for k in cs.second_class:
        p1, p2 = cs.phi_pair(k)
        row = np.array([poisson_bracket(f, p1), poisson_bracket(f, p2)])
        col = np.array([poisson_bracket(p1, g), poisson_bracket(p2, g)])
        if not (row.any() or col.any()):
            continue
        cinv = np.linalg.inv(cs.c_block(k))
        total -= row @ cinv @ col
    return complex(total)


# ---------------------------------------------------------------------------
# equal-time field/momentum bracket reconstruction


def _onshell_field_pair(grid: ModeGrid, x: int, t: float, y: int, tp: float):
    """(phi(t,x), pi(t',y)) expanded over the grid's on-shell modes."""
    if grid.M_sites is None:
        raise ValueError("position-space fields need a grid with M_sites set")
    M = grid.M_sites
    onshell = [k for k in range(len(grid)) if abs(grid.gap(k)) <= ONSHELL_TOL]
    if not onshell:
        raise ValueError("grid has no on-shell modes to expand fields in")
    spatial = sorted(grid.modes[k][1] % M for k in onshell)
    if spatial != list(range(M)):
        raise ValueError("on-shell modes must cover each spatial momentum exactly once")
    phi = LinearObservable()
    pi = LinearObservable()
    for k in onshell:
        E = grid.energy(k)
        if E <= 0:
            raise ValueError("zero-energy on-shell mode: field coefficients diverge")
        p = grid.momentum(k)[0]
        th_x = p * x - E * t
        th_y = p * y - E * tp
        cphi = 1.0 / math.sqrt(2.0 * E * M)
        cpi = -1j * math.sqrt(E / (2.0 * M))
        phi = phi + LinearObservable({k: cphi * np.exp(1j * th_x)},
                                     {k: cphi * np.exp(-1j * th_x)})
        pi = pi + LinearObservable({k: cpi * np.exp(1j * th_y)},
                                   {k: -cpi * np.exp(-1j * th_y)})
    return phi, pi


def equal_time_bracket_reconstruction(
    grid: ModeGrid, x: int, y: int, t: float, tp: float
) -> complex:
    """{phi(t,x), pi(t',y)}_DB via the on-shell mode sum.

    At t = t' this is (1/M) sum_p cos(p(x-y)) = Kronecker delta_{xy} by
    discrete Fourier completeness; at unequal times it is the classical
    propagator mode sum (1/M) sum_p cos(p(x-y) - E_p(t-t')).
    """
    phi, pi = _onshell_field_pair(grid, x, t, y, tp)
    return dirac_bracket(phi, pi, build_constraints(grid))


# ---------------------------------------------------------------------------
# discrete Hamilton-equation residuals


@dataclass(frozen=True)
class ActionSpec:
    """Particle action S = eps*sum_t [p q' - p^2/(2m) - V(q)] on a periodic grid.

    V is polynomial: potential_coeffs[k] multiplies q^k.  The velocity
    q' is the Fourier discrete derivative on the N-point grid (for even
    N the single Nyquist label sits at -N/2, as in fftfreq).
    """

    mass: float
    potential_coeffs: tuple[float, ...]
    N: int
    T: float

    @property
    def eps(self) -> float:
        return self.T / self.N

    def vprime(self, q: np.ndarray) -> np.ndarray:
        out = np.zeros_like(q)
        for k, c in enumerate(self.potential_coeffs):
            if k and c:
                out = out + k * c * q ** (k - 1)
        return out

    def omegas(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.N, d=self.eps)

    def derivative_matrix(self) -> np.ndarray:
        F = np.fft.fft(np.eye(self.N), axis=0)
        return np.fft.ifft((1j * self.omegas())[:, None] * F, axis=0)


def hamilton_constraint_residual(
    action: ActionSpec, q: Sequence[complex], p: Sequence[complex]
) -> float:
    """max_t of |{q_t, S}| and |{p_t, S}| at the supplied trajectory.

    {q_t, S} = eps (q'_t - p_t/m) and {p_t, S} = eps (V'(q_t) - (D^T p)_t);
    both vanish identically on exact discrete solutions (constant free
    trajectories, grid-frequency normal modes of the harmonic action).
    """
    q = np.asarray(q, dtype=complex)
    p = np.asarray(p, dtype=complex)
    if q.shape != (action.N,) or p.shape != (action.N,):
        raise ValueError(f"trajectory must supply {action.N} (q, p) samples")
    D = action.derivative_matrix()
    r_q = action.eps * (D @ q - p / action.mass)
    r_p = action.eps * (action.vprime(q) - D.T @ p)
    return float(max(np.max(np.abs(r_q)), np.max(np.abs(r_p))))
