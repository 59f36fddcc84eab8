"""Discrete-clock history states and conditioning.

A system evolving under H for N steps of size eps is encoded as one
normalized vector on clock ⊗ system,

    |Psi> = (1/sqrt(N)) sum_t |t> ⊗ U^t |psi0>,   U = exp(-i eps H),

and ordinary Schrödinger expectation values are recovered by
conditioning on the clock reading.  The residual form of the Heisenberg
equation of motion holds exactly slice by slice: shifting the clock
projector by one step is the same as conjugating the observable by U.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Ket, Operator, basis_ket, expm, mpow


@dataclass(frozen=True)
class ClockSystem:
    """N clock levels driving a finite-dimensional system.

    Attributes
    ----------
    N : int
        Number of clock readings (time slices), N >= 1.
    eps : float
        Time step per clock tick (hbar = 1).
    H : Operator
        System Hamiltonian; must be hermitian to 1e-12.
    psi0 : Ket
        Normalized initial system state.
    """

    N: int
    eps: float
    H: Operator
    psi0: Ket
    U: Operator = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("need at least one clock level")
        if not self.H.is_hermitian(1e-12):
            raise ValueError("Hamiltonian must be hermitian (tol 1e-12)")
        if abs(self.psi0.norm() - 1.0) > 1e-12:
            raise ValueError("initial state must be normalized to 1e-12")
        if self.H.dim != self.psi0.dim:
            raise ValueError("H and psi0 live on different spaces")
        object.__setattr__(self, "U", expm(-1j * self.eps * self.H))

    @property
    def system_dim(self) -> int:
        return self.H.dim

    def evolved(self, t: int) -> Ket:
        """U^t |psi0> (Schrödinger oracle used by the conditioning checks)."""
        return mpow(self.U, t) @ self.psi0


def history_state(cs: ClockSystem) -> Ket:
    """The flat-window history vector (1/sqrt(N)) sum_t |t> ⊗ U^t|psi0>."""
    d = cs.system_dim
    vec = np.zeros(cs.N * d, dtype=complex)
    psi = cs.psi0.vec
    for t in range(cs.N):
        vec[t * d : (t + 1) * d] = psi
        psi = cs.U.mat @ psi
    return Ket(vec / np.sqrt(cs.N), (cs.N, d))


def conditioned_expectation(cs: ClockSystem, O: Operator, t: int) -> complex:
    """N * <Psi| (|t><t| ⊗ O) |Psi>, i.e. <psi(t)|O|psi(t)>.

    The factor N undoes the uniform 1/N clock weight, so the result is
    exactly the Schrödinger expectation at slice t.
    """
    if not 0 <= t < cs.N:
        raise ValueError(f"slice index {t} out of range [0, {cs.N})")
    d = cs.system_dim
    psi_t = history_state(cs).vec[t * d : (t + 1) * d]
    return complex(cs.N * np.vdot(psi_t, O.mat @ psi_t))


def geometric_heisenberg_residual(cs: ClockSystem, O: Operator, t: int) -> complex:
    """<Psi|(|t+1><t+1| ⊗ O - |t><t| ⊗ U†OU)|Psi>; identically zero.

    This is the discrete equation of motion in residual form: the
    observable at the next clock reading equals the Heisenberg-rotated
    observable at the current one, inside the history expectation.
    """
    if not 0 <= t < cs.N - 1:
        raise ValueError(f"need 0 <= t < N-1, got t={t}, N={cs.N}")
    d = cs.system_dim
    psi = history_state(cs).vec
    nxt = psi[(t + 1) * d : (t + 2) * d]
    cur = psi[t * d : (t + 1) * d]
    rotated = cs.U.mat.conj().T @ O.mat @ cs.U.mat
    return complex(np.vdot(nxt, O.mat @ nxt) - np.vdot(cur, rotated @ cur))


def universe_constraint_residual(cs: ClockSystem, periodic: bool = False) -> float:
    """Norm of (S_clock ⊗ U - I)|Psi> with S_clock the clock step.

    With the open (default) window the single wraparound term at
    t = N-1 is dropped and the residual is exactly 1/sqrt(N) (the
    unmatched slice-0 amplitude); with `periodic=True` the clock step
    wraps and the residual is ||U^N psi0 - psi0||/sqrt(N), vanishing
    identically whenever U^N acts as identity on the initial state.
    """
    d = cs.system_dim
    psi = history_state(cs).vec.reshape(cs.N, d)
    shifted = np.zeros_like(psi)
    for t in range(cs.N):
        tnext = (t + 1) % cs.N
        if t == cs.N - 1 and not periodic:
            continue
        shifted[tnext] += cs.U.mat @ psi[t]
    return float(np.linalg.norm(shifted - psi))
