"""Dense complex operators on tensor-product spaces.

Everything downstream (history states, time slabs, spacetime density
operators, Wick engines) manipulates operators on a tensor product of
small local Hilbert spaces.  This module fixes the single global index
convention — factor 0 is the slowest-varying (leftmost) kron index —
and supplies the plumbing: kron, partial traces over arbitrary factor
subsets, matrix exponentials/inverses/powers, and seeded random
operator ensembles.

Dense storage only; the intended regime is total dimension ≲ 4096.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a matrix is numerically singular for the requested op."""


def _as_complex_matrix(entries) -> np.ndarray:
    mat = np.asarray(entries, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"operator entries must be a square matrix, got shape {mat.shape}")
    return mat


class Operator:
    """Square complex matrix with an attached factorization of its index space.

    Parameters
    ----------
    entries : array_like
        Square complex matrix of size (prod(dims), prod(dims)).
    dims : sequence of int
        Local dimension of each tensor factor, factor 0 first (slowest
        varying index, i.e. the leftmost factor of a kron product).

    Notes
    -----
    Instances are immutable: ``dims`` is a tuple and the entry buffer is
    write-protected.  All arithmetic returns new instances.
    """

    __slots__ = ("dims", "mat")

    def __init__(self, entries, dims: Sequence[int] | None = None):
        mat = _as_complex_matrix(entries)
        if dims is None:
            dims = (mat.shape[0],)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise ValueError(f"local dimensions must be positive, got {dims}")
        if math.prod(dims) != mat.shape[0]:
            raise ValueError(f"prod(dims)={math.prod(dims)} != matrix size {mat.shape[0]}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def dag(self) -> "Operator":
        return Operator(self.mat.conj().T, self.dims)

    def norm(self, kind: str = "fro") -> float:
        """Frobenius ('fro') or spectral ('2') norm of the entries."""
        return float(np.linalg.norm(self.mat, 2 if kind == "2" else "fro"))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, self.norm())
        return bool(np.linalg.norm(self.mat - self.mat.conj().T) <= tol * scale)

    def reshaped(self, dims: Sequence[int]) -> "Operator":
        """Same entries, different factorization of the same total dim."""
        return Operator(self.mat, dims)

    # -- arithmetic ----------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, Operator):
            if other.dim != self.dim:
                raise ValueError("operator size mismatch")
            return Operator(self.mat @ other.mat, self.dims)
        if isinstance(other, Ket):
            return Ket(self.mat @ other.vec, self.dims)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return Operator(self.mat + other.mat, self.dims)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return Operator(self.mat - other.mat, self.dims)

    def __mul__(self, scalar):
        return Operator(self.mat * complex(scalar), self.dims)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator(-self.mat, self.dims)

    def __repr__(self):
        return f"Operator(dims={self.dims})"


class Ket:
    """Complex vector on the same factorized index space as Operator."""

    __slots__ = ("dims", "vec")

    def __init__(self, entries, dims: Sequence[int] | None = None):
        vec = np.asarray(entries, dtype=complex).reshape(-1)
        if dims is None:
            dims = (vec.shape[0],)
        dims = tuple(int(d) for d in dims)
        if math.prod(dims) != vec.shape[0]:
            raise ValueError(f"prod(dims)={math.prod(dims)} != vector length {vec.shape[0]}")
        vec = vec.copy()
        vec.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "vec", vec)

    def __setattr__(self, name, value):
        raise AttributeError("Ket is immutable")

    @property
    def dim(self) -> int:
        return self.vec.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def normalized(self) -> "Ket":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Ket(self.vec / n, self.dims)

    def dag_dot(self, other: "Ket") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.vec, other.vec))

    def expectation(self, A: Operator) -> complex:
        """⟨self|A|self⟩ (no normalization applied)."""
        return complex(np.vdot(self.vec, A.mat @ self.vec))

    def outer(self, other: "Ket | None" = None) -> Operator:
        """|self⟩⟨other| (defaults to the projector |self⟩⟨self|)."""
        bra = self if other is None else other
        return Operator(np.outer(self.vec, bra.vec.conj()), self.dims)

    def __repr__(self):
        return f"Ket(dims={self.dims})"


# ---------------------------------------------------------------------------
# construction helpers


def identity(dims: int | Sequence[int]) -> Operator:
    if isinstance(dims, int):
        dims = (dims,)
    dims = tuple(int(d) for d in dims)
    return Operator(np.eye(math.prod(dims)), dims)


def basis_ket(dim: int, index: int) -> Ket:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim)
    v[index] = 1.0
    return Ket(v)


def kron(*ops: Operator) -> Operator:
    """Tensor product; dims concatenate, first factor slowest-varying."""
    if not ops:
        raise ValueError("kron of nothing")
    mat = ops[0].mat
    dims: tuple[int, ...] = ops[0].dims
    for op in ops[1:]:
        mat = np.kron(mat, op.mat)
        dims = dims + op.dims
    return Operator(mat, dims)


def kron_ket(*kets: Ket) -> Ket:
    vec = kets[0].vec
    dims: tuple[int, ...] = kets[0].dims
    for k in kets[1:]:
        vec = np.kron(vec, k.vec)
        dims = dims + k.dims
    return Ket(vec, dims)


# ---------------------------------------------------------------------------
# partial trace


def partial_trace(A: Operator, keep: Iterable[int]) -> Operator:
    """Trace out every factor not listed in `keep`.

    Parameters
    ----------
    A : Operator
    keep : iterable of int
        Factor indices to retain.  Ordering of the retained factors is
        preserved regardless of the order given here.

    Returns
    -------
    Operator
        dims restricted to `keep`; trace is preserved exactly.
    """
    keep_set = set(int(k) for k in keep)
    n = len(A.dims)
    for k in keep_set:
        if not 0 <= k < n:
            raise IndexError(f"keep index {k} out of range for {n} factors")
    keep_sorted = sorted(keep_set)
    if keep_sorted == list(range(n)):
        return A

    tensor = A.mat.reshape(A.dims + A.dims)
    # Contract row index n_i with column index n+i for every traced factor.
    traced = [i for i in range(n) if i not in keep_set]
    for offset, i in enumerate(traced):
        j = i - offset  # row-axis position after earlier contractions
        m = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=j, axis2=m + j)
    new_dims = tuple(A.dims[i] for i in keep_sorted)
    size = math.prod(new_dims) if new_dims else 1
    return Operator(tensor.reshape(size, size), new_dims if new_dims else (1,))


# ---------------------------------------------------------------------------
# matrix functions


def expm(A: Operator) -> Operator:
    """Matrix exponential (scaling-and-squaring Padé via scipy)."""
    return Operator(scipy.linalg.expm(A.mat), A.dims)


def inv(A: Operator) -> Operator:
    """Matrix inverse with an explicit singularity guard.

    Raises
    ------
    SingularMatrixError
        If the smallest singular value is below 1e-13 times the spectral
        norm of A (condition number beyond the supported range).
    """
    svals = np.linalg.svd(A.mat, compute_uv=False)
    if svals[-1] < 1e-13 * max(svals[0], np.finfo(float).tiny):
        raise SingularMatrixError(
            f"matrix numerically singular: smallest sv {svals[-1]:.3e} vs norm {svals[0]:.3e}"
        )
    return Operator(np.linalg.inv(A.mat), A.dims)


def mpow(A: Operator, k: int) -> Operator:
    """Integer matrix power by repeated squaring; mpow(A, 0) = I."""
    k = int(k)
    if k < 0:
        raise ValueError("mpow expects a nonnegative exponent")
    result = np.eye(A.dim, dtype=complex)
    base = A.mat
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return Operator(result, A.dims)


# ---------------------------------------------------------------------------
# seeded random ensembles
#
# One scheme everywhere: complex Ginibre G = (A + iB)/sqrt(2) with A, B
# standard normal; hermitian = (G + G†)/2; unitaries from QR of G with
# phase-fixed diagonal; kets are normalized Ginibre vectors.


def rand_ginibre(rng: np.random.Generator, d: int) -> np.ndarray:
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)


def rand_hermitian(rng: np.random.Generator, d: int) -> Operator:
    g = rand_ginibre(rng, d)
    return Operator((g + g.conj().T) / 2.0)


def rand_unitary(rng: np.random.Generator, d: int) -> Operator:
    q, r = np.linalg.qr(rand_ginibre(rng, d))
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return Operator(q)


def rand_ket(rng: np.random.Generator, d: int) -> Ket:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return Ket(v / np.linalg.norm(v))
