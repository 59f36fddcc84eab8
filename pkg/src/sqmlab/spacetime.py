"""Normalized spacetime density operators over time slices.

A single operator R on h^{⊗N} encodes a whole finite history: its
slice marginals are the Schrödinger-evolved states, ordinary two-point
functions appear as traces against slice-local insertions with time
ordering built in, and the antihermitian part witnesses causal order.

Construction: with V = exp(-i eps H) and the cyclic slice shift C,

    R ∝ embed(|psi0><psi0| · V^{-N}, 0) · C · (V ⊗ ... ⊗ V),

normalized to unit trace.  The boundary factor V^{-N} = exp(+i eps N H)
undoes the net winding of the cycle so that Tr[R · embed(A, s)] equals
<psi|A_H(eps s)|psi> exactly; with it, all slice marginals are genuine
pure-state projectors even though R itself is not hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .linalg import Ket, Operator, expm, kron, mpow, partial_trace
from .timeslab import SliceLayout, build_action, cycle_shift, embed_at_slice


@dataclass(frozen=True)
class SpacetimeState:
    """Unit-trace (generally non-hermitian) operator over N time slices.

    `site_dims` optionally factorizes each slice into spatial sites,
    enabling reductions onto spacetime regions of (slice, site) cells.
    """

    R: Operator
    layout: SliceLayout
    psi0: Ket
    H: Operator
    raw_trace: complex
    site_dims: Optional[tuple[int, ...]] = None

    @property
    def N(self) -> int:
        return self.layout.N

    @property
    def eps(self) -> float:
        return self.layout.eps

    def evolved(self, t: int) -> Ket:
        """Schrödinger oracle exp(-i H eps t)|psi0>."""
        U = expm(-1j * self.eps * t * self.H)
        return U @ self.psi0


def build_R(
    psi0: Ket,
    H: Operator,
    eps: float,
    N: int,
    site_dims: Optional[Sequence[int]] = None,
) -> SpacetimeState:
    """Assemble and normalize the spacetime state for (psi0, H, eps, N)."""
    if abs(psi0.norm() - 1.0) > 1e-12:
        raise ValueError("psi0 must be normalized")
    if not H.is_hermitian(1e-12):
        raise ValueError("H must be hermitian")
    layout = SliceLayout(d=psi0.dim, N=N, eps=eps)
    qa = build_action(layout, H)
    boundary = psi0.outer() @ expm(1j * eps * N * H)
    raw = embed_at_slice(boundary, 0, layout) @ qa.exp_action
    tr = raw.trace()
    if abs(tr) < 1e-14:
        raise ValueError("spacetime state has numerically zero trace")
    R = (1.0 / tr) * raw
    if site_dims is not None:
        site_dims = tuple(int(s) for s in site_dims)
        if int(np.prod(site_dims)) != layout.d:
            raise ValueError("site_dims must factorize the slice dimension")
        R = R.reshaped(site_dims * N)
    return SpacetimeState(R=R, layout=layout, psi0=psi0, H=H, raw_trace=tr, site_dims=site_dims)


def _slice_factors(st: SpacetimeState) -> int:
    return len(st.site_dims) if st.site_dims is not None else 1


def marginal(st: SpacetimeState, t: int) -> Operator:
    """Partial trace onto slice t; equals the evolved pure-state projector."""
    if not 0 <= t < st.N:
        raise ValueError(f"slice index {t} out of range [0, {st.N})")
    k = _slice_factors(st)
    keep = range(t * k, (t + 1) * k)
    return partial_trace(st.R, keep)


def insertion_trace(st: SpacetimeState, inserts: Sequence[tuple[Operator, int]]) -> complex:
    """Tr[R · prod_t embed(O_t, t)] — the time-ordered correlator form."""
    layout = st.layout
    prod = np.eye(layout.total_dim, dtype=complex)
    for O, t in sorted(inserts, key=lambda item: item[1]):
        prod = prod @ embed_at_slice(O, t, layout).mat
    return complex(np.trace(st.R.mat @ prod))


def causality_witness(st: SpacetimeState, A: Operator, B: Operator, t: int = 1) -> complex:
    """Tr[(R - R†) · embed(A,0)·embed(B,t)].

    For hermitian A, B this equals <psi|[B_H(eps t), A]|psi>: the
    difference between the time-ordered and anti-time-ordered pair
    correlators, i.e. a direct witness of causal (non)commutation.
    """
    if not 0 < t < st.N:
        raise ValueError(f"need a strictly later slice 0 < t < {st.N}")
    layout = st.layout
    X = (embed_at_slice(A, 0, layout) @ embed_at_slice(B, t, layout)).mat
    delta = st.R.mat - st.R.mat.conj().T
    return complex(np.trace(delta @ X))


def causality_witness_oracle(st: SpacetimeState, A: Operator, B: Operator, t: int = 1) -> complex:
    """Heisenberg-picture oracle <psi|[B_H(eps t), A]|psi>."""
    Ut = expm(-1j * st.eps * t * st.H).mat
    BH = Ut.conj().T @ B.mat @ Ut
    comm = BH @ A.mat - A.mat @ BH
    return complex(np.vdot(st.psi0.vec, comm @ st.psi0.vec))


def power_and_pseudoentropy(st: SpacetimeState, k: int) -> tuple[Operator, complex]:
    """(R^k, Tr[R^k]).  For pure unitary provenance Tr[R^k] = 1 for all k."""
    if k < 1:
        raise ValueError("need k >= 1")
    Rk = mpow(st.R, k)
    return Rk, Rk.trace()


def renyi_pseudoentropy(st: SpacetimeState, k: int) -> complex:
    """-(1/(k-1))·log Tr[R^k] for integer k >= 2; vanishes for pure histories."""
    if k < 2:
        raise ValueError("Rényi order must be >= 2")
    _, tr = power_and_pseudoentropy(st, k)
    return complex(-np.log(tr) / (k - 1))


@dataclass(frozen=True)
class RegionReport:
    """Reduction of a spacetime state onto a set of (slice, site) cells."""

    operator: Operator
    region: tuple[tuple[int, int], ...]
    herm_deviation: float  # ||R_reg - R_reg†|| / ||R_reg||, Frobenius
    spectrum: tuple[complex, ...]  # eigenvalues, sorted by real part descending

    @property
    def is_state_like(self) -> bool:
        """Hermitian to 1e-10 with spectrum >= -1e-10 and unit trace."""
        eigs = np.array(self.spectrum)
        tr_ok = abs(np.sum(eigs) - 1.0) <= 1e-10
        return self.herm_deviation <= 1e-10 and float(np.min(eigs.real)) >= -1e-10 and tr_ok


def reduce_to_region(st: SpacetimeState, region: Iterable[tuple[int, int]]) -> RegionReport:
    """Partial trace onto the given spacetime region, with diagnostics.

    Equal-time regions always come out as valid density operators;
    regions extended across slices generically pick up a nonzero
    hermiticity deviation — that deviation is the point of the report.
    """
    cells = tuple(sorted(set((int(a), int(b)) for a, b in region)))
    if not cells:
        raise ValueError("region must contain at least one (slice, site) cell")
    k = _slice_factors(st)
    for t, x in cells:
        if not (0 <= t < st.N and 0 <= x < k):
            raise ValueError(f"cell ({t},{x}) outside the {st.N}x{k} slice/site grid")
    keep = [t * k + x for t, x in cells]
    reduced = partial_trace(st.R, keep)
    num = np.linalg.norm(reduced.mat - reduced.mat.conj().T)
    den = np.linalg.norm(reduced.mat)
    eigs = np.linalg.eigvals(reduced.mat)
    eigs = tuple(sorted((complex(z) for z in eigs), key=lambda z: -z.real))
    return RegionReport(
        operator=reduced,
        region=cells,
        herm_deviation=float(num / den) if den else 0.0,
        spectrum=eigs,
    )
