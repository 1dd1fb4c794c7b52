"""
Complex linear algebra over finite tensor products.

Conventions used throughout the package:

* A vector over factors ``dims = (d_1, ..., d_k)`` is stored flat in row-major order,
  so ``coefficients.reshape(dims)[i_1, ..., i_k]`` is the amplitude of e_{i_1} ⊗ ... ⊗ e_{i_k}.
* A bipartite split at index ``s`` groups factors ``dims[:s]`` against ``dims[s:]`` and the
  Schmidt matrix is the plain row-major reshape ``(prod(dims[:s]), prod(dims[s:]))``.
* Four-factor vectors built from a subspace of K ⊗ E are ordered (K1, E1, K2, E2).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from math import prod

import numpy as np
import scipy.linalg

from .core.error_handler import ArgumentError, DomainError

UNIT_NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
RANK_DROP_TOL = 1e-10
SCHMIDT_ZERO_REL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TensorVector:
    """Complex coefficient vector over an explicit tensor-product factorization."""

    coefficients: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ArgumentError(f"factor dimensions must be >= 1, got {self.dims}", argument="dims")
        coefficients = np.asarray(self.coefficients).reshape(-1)
        if coefficients.size != prod(dims):
            raise ArgumentError(
                f"{coefficients.size} coefficients do not match dims {dims} (product {prod(dims)})", argument="dims"
            )
        if not np.all(np.isfinite(coefficients)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coefficients", _frozen(coefficients))

    @classmethod
    def from_factors(cls, *factors: np.ndarray | Sequence[complex]) -> TensorVector:
        """Simple tensor x_1 ⊗ ... ⊗ x_k."""
        if not factors:
            raise ArgumentError("at least one factor is required", argument="factors")
        arrays = [np.asarray(f, dtype=np.complex128).reshape(-1) for f in factors]
        coefficients = arrays[0]
        for a in arrays[1:]:
            coefficients = np.kron(coefficients, a)
        return cls(coefficients, tuple(a.size for a in arrays))

    @classmethod
    def basis(cls, dims: Sequence[int], indices: Sequence[int]) -> TensorVector:
        """Computational basis vector e_{i_1} ⊗ ... ⊗ e_{i_k}."""
        dims = tuple(dims)
        if len(indices) != len(dims) or any(not 0 <= i < d for i, d in zip(indices, dims, strict=True)):
            raise ArgumentError(f"indices {tuple(indices)} invalid for dims {dims}", argument="indices")
        coefficients = np.zeros(prod(dims), dtype=np.complex128)
        coefficients[np.ravel_multi_index(tuple(indices), dims)] = 1.0
        return cls(coefficients, dims)

    @property
    def size(self) -> int:
        return self.coefficients.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def normalized(self) -> TensorVector:
        norm = self.norm()
        if norm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return TensorVector(self.coefficients / norm, self.dims)

    def inner(self, other: TensorVector) -> complex:
        """⟨self, other⟩, antilinear in the first argument."""
        if self.dims != other.dims:
            raise ArgumentError(f"dims differ: {self.dims} vs {other.dims}", argument="other")
        return complex(np.vdot(self.coefficients, other.coefficients))

    def tensor(self) -> np.ndarray:
        """Coefficients reshaped to one axis per factor."""
        return self.coefficients.reshape(self.dims)

    def is_unit(self, tol: float = UNIT_NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian positive semi-definite unit-trace matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ArgumentError(f"density matrix must be square, got shape {entries.shape}", argument="entries")
        if np.max(np.abs(entries - entries.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        trace = float(np.real(np.trace(entries)))
        if abs(trace - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace {trace!r} differs from 1", details={"trace": trace})
        eigenvalues = np.linalg.eigvalsh(entries)
        if eigenvalues.size and eigenvalues[0] < -PSD_TOL:
            raise DomainError(
                f"density matrix has negative eigenvalue {eigenvalues[0]!r}",
                details={"min_eigenvalue": float(eigenvalues[0])},
            )
        object.__setattr__(self, "entries", _frozen(entries))

    @classmethod
    def pure(cls, v: TensorVector) -> DensityMatrix:
        c = v.coefficients
        return cls(np.outer(c, c.conj()))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in non-increasing order."""
        return np.linalg.eigvalsh(self.entries)[::-1].copy()

    def spectrum(self) -> np.ndarray:
        """Eigenvalues clipped at zero and sorted non-increasing; a probability vector."""
        return np.clip(self.eigenvalues(), 0.0, None)


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Schmidt coefficients μ_1 ≥ μ_2 ≥ ... ≥ 0 of a bipartite vector."""

    coefficients: np.ndarray
    left_dim: int
    right_dim: int

    @property
    def mu1(self) -> float:
        return float(self.coefficients[0]) if self.coefficients.size else 0.0

    @property
    def mu1_squared(self) -> float:
        return self.mu1**2

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def squared(self) -> np.ndarray:
        return self.coefficients**2


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Ordered family of vectors over common factors, meant to be orthonormal.

    Construction only checks shapes; orthonormality is verified by the operations
    that depend on it (``projector`` and everything built on it).
    """

    vectors: tuple[TensorVector, ...]
    ambient_dims: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        vectors = tuple(self.vectors)
        ambient = tuple(self.ambient_dims) or (vectors[0].dims if vectors else ())
        if not ambient:
            raise ArgumentError("ambient_dims are required for an empty basis", argument="ambient_dims")
        for v in vectors:
            if v.dims != ambient:
                raise ArgumentError(f"vector dims {v.dims} differ from ambient dims {ambient}", argument="vectors")
        if len(vectors) > prod(ambient):
            raise ArgumentError(
                f"{len(vectors)} vectors exceed the ambient dimension {prod(ambient)}", argument="vectors"
            )
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "ambient_dims", ambient)

    @classmethod
    def from_matrix(cls, columns: np.ndarray, ambient_dims: Sequence[int]) -> SubspaceBasis:
        dims = tuple(ambient_dims)
        return cls(tuple(TensorVector(columns[:, j], dims) for j in range(columns.shape[1])), dims)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of a (prod(ambient_dims), dim) matrix."""
        if not self.vectors:
            return np.zeros((prod(self.ambient_dims), 0), dtype=np.complex128)
        return np.column_stack([v.coefficients for v in self.vectors])

    def orthonormality_residual(self) -> float:
        """max |⟨w_i, w_j⟩ − δ_ij|."""
        if not self.vectors:
            return 0.0
        q = self.matrix()
        gram = q.conj().T @ q
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

    def is_orthonormal(self, tol: float = ORTHONORMAL_TOL) -> bool:
        return self.orthonormality_residual() <= tol

    def __add__(self, other: SubspaceBasis) -> SubspaceBasis:
        if self.ambient_dims != other.ambient_dims:
            raise ArgumentError("cannot concatenate bases over different factors", argument="other")
        return SubspaceBasis(self.vectors + other.vectors, self.ambient_dims)


def random_unit_vector(dims: Sequence[int], rng: np.random.Generator) -> TensorVector:
    """Rotation-invariant random unit vector (normalized complex Gaussian)."""
    n = prod(dims)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return TensorVector(z / np.linalg.norm(z), tuple(dims))


def _check_split(v: TensorVector, split: int) -> None:
    if not isinstance(split, int | np.integer) or not 1 <= split < len(v.dims):
        raise ArgumentError(f"split {split!r} must lie in [1, {len(v.dims) - 1}] for dims {v.dims}", argument="split")


def schmidt(v: TensorVector, split: int) -> SchmidtSpectrum:
    """Schmidt coefficients of ``v`` across factors ``dims[:split]`` | ``dims[split:]``."""
    _check_split(v, split)
    if v.norm() == 0.0:
        raise DomainError("Schmidt decomposition of the zero vector is undefined")
    left, right = prod(v.dims[:split]), prod(v.dims[split:])
    singular_values = np.linalg.svd(v.coefficients.reshape(left, right), compute_uv=False)
    singular_values = np.where(singular_values < SCHMIDT_ZERO_REL * singular_values[0], 0.0, singular_values)
    return SchmidtSpectrum(singular_values, left, right)


def schmidt_batch(states: np.ndarray, left: int, right: int) -> np.ndarray:
    """Singular values of a stack of flattened bipartite vectors, shape (k, min(left, right))."""
    return np.linalg.svd(states.reshape(-1, left, right), compute_uv=False)


def partial_trace_env(v: TensorVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state of |v⟩⟨v| on the factors ``keep`` (in the given order)."""
    keep = tuple(int(k) for k in keep)
    n = len(v.dims)
    if not keep or len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep) or len(keep) == n:
        raise ArgumentError(f"keep {keep} must be a nonempty proper subset of factors 0..{n - 1}", argument="keep")
    if not v.is_unit():
        raise DomainError(f"partial trace requires a unit vector, norm is {v.norm()!r}", details={"norm": v.norm()})
    traced = tuple(i for i in range(n) if i not in keep)
    kept_dim = prod(v.dims[k] for k in keep)
    m = np.transpose(v.tensor(), keep + traced).reshape(kept_dim, -1)
    rho = m @ m.conj().T
    return DensityMatrix((rho + rho.conj().T) / 2)


def reshuffle_eta(v: TensorVector) -> TensorVector:
    """Swap the second and third factors: k1⊗f1⊗k2⊗f2 ↦ k1⊗k2⊗f1⊗f2."""
    if len(v.dims) != 4:
        raise ArgumentError(f"η needs exactly 4 factors, got {len(v.dims)}", argument="v")
    d = v.dims
    return TensorVector(np.transpose(v.tensor(), (0, 2, 1, 3)).reshape(-1), (d[0], d[2], d[1], d[3]))


def orthonormalize(vectors: Sequence[TensorVector]) -> tuple[SubspaceBasis, int]:
    """Orthonormal basis of span(vectors) by column-pivoted QR.

    Directions whose pivot falls below 1e-10 (relative to the largest pivot, floored at 1) are dropped.
    """
    if not vectors:
        raise ArgumentError("cannot orthonormalize an empty family", argument="vectors")
    dims = vectors[0].dims
    if any(v.dims != dims for v in vectors):
        raise ArgumentError("all vectors must share the same dims", argument="vectors")
    a = np.column_stack([v.coefficients for v in vectors])
    q, r, _ = scipy.linalg.qr(a, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(r))
    tol = RANK_DROP_TOL * max(1.0, float(pivots[0]) if pivots.size else 0.0)
    rank = int(np.count_nonzero(pivots > tol))
    return SubspaceBasis.from_matrix(q[:, :rank], dims), rank


def projector(basis: SubspaceBasis) -> np.ndarray:
    """Orthogonal projector Σ |w_i⟩⟨w_i| onto span(basis)."""
    residual = basis.orthonormality_residual()
    if residual > ORTHONORMAL_TOL:
        raise DomainError(
            f"basis is not orthonormal (residual {residual:.3e})", details={"orthonormality_residual": residual}
        )
    q = basis.matrix()
    p = q @ q.conj().T
    return (p + p.conj().T) / 2


def complement(basis: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of span(basis)."""
    q = basis.matrix()
    columns = scipy.linalg.null_space(q.conj().T, rcond=RANK_DROP_TOL)
    return SubspaceBasis.from_matrix(columns, basis.ambient_dims)


def maximally_entangled(basis: SubspaceBasis) -> TensorVector:
    """ψ⁺ = Σ_i w_i ⊗ w̄_i / √dim W over the doubled factors (K1, E1, K2, E2).

    The second leg is conjugated so that ψ⁺ lies in the range of V ⊗ V̄; for real bases
    this is Σ w_i ⊗ w_i / √dim W.
    """
    if basis.dim == 0:
        raise ArgumentError("maximally entangled state of an empty basis", argument="basis")
    q = basis.matrix()
    theta = np.einsum("ai,bi->ab", q, q.conj()).reshape(-1)
    return TensorVector(theta / np.sqrt(basis.dim), basis.ambient_dims + basis.ambient_dims)


def swap_operator(d: int) -> np.ndarray:
    """Swap V(x ⊗ y) = y ⊗ x on C^d ⊗ C^d."""
    v = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            v[j * d + i, i * d + j] = 1.0
    return v


def majorizes(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> bool:
    """True iff the non-negative vector ``a`` majorizes ``b`` (shorter vector zero-padded)."""
    x = np.asarray(a, dtype=np.float64).reshape(-1)
    y = np.asarray(b, dtype=np.float64).reshape(-1)
    if np.any(x < -1e-12) or np.any(y < -1e-12):
        raise DomainError("majorization needs non-negative entries")
    if abs(x.sum() - y.sum()) > 1e-10:
        raise DomainError(
            f"majorization needs equal sums, got {x.sum()!r} and {y.sum()!r}",
            details={"sum_a": float(x.sum()), "sum_b": float(y.sum())},
        )
    n = max(x.size, y.size)
    x = np.sort(np.pad(x, (0, n - x.size)))[::-1]
    y = np.sort(np.pad(y, (0, n - y.size)))[::-1]
    return bool(np.all(np.cumsum(x) >= np.cumsum(y) - 1e-12))
