"""Tensor products across time slices and the cyclic-shift action.

The state space here is h^{⊗N}: one copy of a d-dimensional local space
per time slice, slice 0 leftmost.  The central object is the unitary

    E = C · (V ⊗ V ⊗ ... ⊗ V),      V = exp(-i eps H),

where C cyclically shifts the slices.  Two exact identities are
implemented and cross-checked:

* trace identity — a trace of E against one operator insertion per
  slice collapses to a single-slice time-ordered trace,
      Tr[E · prod_t embed(O_t, t)] = tr[V^N · O_H(eps(N-1)) ... O_H(0)],
  with O_H(t) = e^{iHt} O e^{-iHt};
* shift identity — conjugating by E moves an insertion one slice up
  while Heisenberg-rotating it, so the slice-local equation of motion
  holds as an exact operator statement inside traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .linalg import Ket, Operator, expm, identity, kron, mpow

DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class SliceLayout:
    """N time slices of local dimension d with step eps, slice 0 first."""

    d: int
    N: int
    eps: float
    cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError("need d >= 1 and N >= 1")
        if self.d**self.N > self.cap:
            raise ValueError(f"total dimension {self.d}**{self.N} exceeds cap {self.cap}")

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.d,) * self.N

    @property
    def total_dim(self) -> int:
        return self.d**self.N


def cycle_shift(layout: SliceLayout) -> Operator:
    """Permutation unitary sending |i0 i1 ... i_{N-1}> to |i_{N-1} i0 ... i_{N-2}>.

    For N = 2, d = 2 this is the 4x4 SWAP.  Its N-th power is the
    identity, and conjugation by it advances slice labels by one.
    """
    d, N = layout.d, layout.N
    size = layout.total_dim
    cols = np.arange(size)
    digits = np.array(np.unravel_index(cols, layout.dims))  # shape (N, size)
    rows = np.ravel_multi_index(tuple(np.roll(digits, 1, axis=0)), layout.dims)
    mat = np.zeros((size, size))
    mat[rows, cols] = 1.0
    return Operator(mat, layout.dims)


def embed_at_slice(O: Operator, t: int, layout: SliceLayout) -> Operator:
    """I^{⊗t} ⊗ O ⊗ I^{⊗(N-1-t)}."""
    if O.dim != layout.d:
        raise ValueError(f"insertion is {O.dim}-dimensional, slices are {layout.d}")
    if not 0 <= t < layout.N:
        raise ValueError(f"slice index {t} out of range [0, {layout.N})")
    left = identity((layout.d,) * t) if t else None
    right = identity((layout.d,) * (layout.N - 1 - t)) if t < layout.N - 1 else None
    factors = [f for f in (left, O, right) if f is not None]
    return kron(*factors)


@dataclass(frozen=True)
class QuantumAction:
    """The action exponential E = cycle_shift · ⊗_t exp(-i eps H)."""

    layout: SliceLayout
    H: Operator
    V: Operator = field(init=False, repr=False)  # single-slice step
    exp_action: Operator = field(init=False, repr=False)

    def __post_init__(self):
        if self.H.dim != self.layout.d:
            raise ValueError("H must act on a single slice")
        if not self.H.is_hermitian(1e-12):
            raise ValueError("H must be hermitian")
        V = expm(-1j * self.layout.eps * self.H)
        W = kron(*([V] * self.layout.N)) if self.layout.N > 1 else V.reshaped(self.layout.dims)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "exp_action", cycle_shift(self.layout) @ W)


def build_action(layout: SliceLayout, H: Operator) -> QuantumAction:
    return QuantumAction(layout, H)


def _check_inserts(layout: SliceLayout, inserts: Sequence[tuple[Operator, int]]):
    seen = set()
    for O, t in inserts:
        if not 0 <= t < layout.N:
            raise ValueError(f"slice index {t} out of range [0, {layout.N})")
        if t in seen:
            raise ValueError(f"duplicate insertion at slice {t}; one operator per slice")
        if O.dim != layout.d:
            raise ValueError("insertion dimension mismatch")
        seen.add(t)


def trace_theorem_lhs(qa: QuantumAction, inserts: Sequence[tuple[Operator, int]]) -> complex:
    """Tr[exp_action · prod embed(O_t, t)], inserts multiplied ascending in slice."""
    _check_inserts(qa.layout, inserts)
    prod = np.eye(qa.layout.total_dim, dtype=complex)
    for O, t in sorted(inserts, key=lambda item: item[1]):
        prod = prod @ embed_at_slice(O, t, qa.layout).mat
    return complex(np.trace(qa.exp_action.mat @ prod))


def trace_theorem_rhs(qa: QuantumAction, inserts: Sequence[tuple[Operator, int]]) -> complex:
    """Single-slice oracle tr[exp(-i eps N H) · O_H(eps t_k) ... O_H(eps t_1)].

    Later slices stand to the left (time ordering), O_H(t) = e^{iHt} O e^{-iHt}.
    """
    _check_inserts(qa.layout, inserts)
    eps, N = qa.layout.eps, qa.layout.N
    prod = np.eye(qa.layout.d, dtype=complex)
    for O, t in sorted(inserts, key=lambda item: item[1]):
        plus = expm(1j * eps * t * qa.H).mat
        prod = (plus @ O.mat @ plus.conj().T) @ prod
    return complex(np.trace(expm(-1j * eps * N * qa.H).mat @ prod))


def constraint_expectation(
    qa: QuantumAction,
    O: Operator,
    t: int,
    boundary: Optional[tuple[Ket, Ket]] = None,
) -> complex:
    """Tr[B · E · (E·embed(O,t)·E† - embed(O,t))]; identically zero.

    Without a boundary the statement is pure trace cyclicity and holds
    for every slice.  With a boundary B = |q><q'| at slice 0 the shifted
    insertion must stay clear of the boundary slice, so 0 <= t < N-1 is
    required; the bracket then reduces to the Heisenberg equation of
    motion V·O_H((t+1)eps)·V† - O_H(t eps) = 0 evaluated inside the
    boundary trace.
    """
    layout = qa.layout
    if boundary is not None and not 0 <= t < layout.N - 1:
        raise ValueError(f"with a boundary need 0 <= t < N-1, got t={t}, N={layout.N}")
    if not 0 <= t < layout.N:
        raise ValueError(f"slice index {t} out of range [0, {layout.N})")
    E = qa.exp_action.mat
    X = embed_at_slice(O, t, layout).mat
    bracket = E @ X @ E.conj().T - X
    if boundary is None:
        return complex(np.trace(E @ bracket))
    q, qp = boundary
    B = embed_at_slice(q.outer(qp), 0, layout).mat
    return complex(np.trace(B @ E @ bracket))
