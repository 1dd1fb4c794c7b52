"""
Subspace families of C^d ⊗ C^d whose Stinespring channels break additivity.

* the antisymmetric space and its lexicographic or random subspaces
* antisymmetric space extended by mutually orthogonal generalized Bell states
* the Parthasarathy completely entangled space S = L⊥, L = span{u_λ ⊗ u_λ}
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from math import comb

import numpy as np

from .core.error_handler import ArgumentError, DomainError, ResourceError
from .core.logging import get_logger
from .core.validation import ConstructionSpec, Family
from .tensor_core import SubspaceBasis, TensorVector, complement, orthonormalize, swap_operator

logger = get_logger("subspaces")

MAX_INVOLUTION_ENUMERATION_D = 10
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricInvolution:
    """Permutation σ of {0, ..., d−1} with σ∘σ = id; its permutation matrix is symmetric."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        mapping = tuple(int(i) for i in self.mapping)
        d = len(mapping)
        if d == 0 or sorted(mapping) != list(range(d)):
            raise ArgumentError(f"{self.mapping!r} is not a permutation of 0..{d - 1}", argument="mapping")
        if any(mapping[mapping[i]] != i for i in range(d)):
            raise ArgumentError(f"{mapping!r} is not an involution", argument="mapping")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, d: int) -> SymmetricInvolution:
        return cls(tuple(range(d)))

    @classmethod
    def reflection(cls, d: int, k: int) -> SymmetricInvolution:
        """σ_k(i) = (k − i) mod d."""
        return cls(tuple((k - i) % d for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.d) if self.mapping[i] == i)

    def matrix(self) -> np.ndarray:
        """Π with Π[σ(j), j] = 1."""
        pi = np.zeros((self.d, self.d))
        pi[list(self.mapping), list(range(self.d))] = 1.0
        return pi


@dataclass(frozen=True, eq=False)
class BellState:
    """(1/√d) Σ_j e^{iφ_j} e_{σ(j)} ⊗ f_j; maximally entangled and swap-symmetric."""

    vector: TensorVector
    source_involution: SymmetricInvolution
    phases: tuple[float, ...]

    def matrix(self) -> np.ndarray:
        """Coefficient matrix λ̂/√d; symmetric because the phases are constant on σ-orbits."""
        return self.vector.tensor().copy()


def antisymmetric_basis(d: int) -> SubspaceBasis:
    """(e_i ⊗ e_j − e_j ⊗ e_i)/√2 for i < j in lexicographic order."""
    if d < 2:
        raise ArgumentError(f"antisymmetric space needs d >= 2, got {d}", argument="d")
    vectors = []
    for i, j in itertools.combinations(range(d), 2):
        c = np.zeros(d * d, dtype=np.complex128)
        c[i * d + j] = 1 / np.sqrt(2)
        c[j * d + i] = -1 / np.sqrt(2)
        vectors.append(TensorVector(c, (d, d)))
    return SubspaceBasis(tuple(vectors), (d, d))


def antisymmetric_projector_from_swap(d: int) -> np.ndarray:
    """½(I − V) with V the swap."""
    return (np.eye(d * d) - swap_operator(d)) / 2


def enumerate_symmetric_involutions(d: int) -> list[SymmetricInvolution]:
    """All involutions of S_d by brute force over the d! permutations."""
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}", argument="d")
    if d > MAX_INVOLUTION_ENUMERATION_D:
        raise ResourceError(
            f"enumerating involutions of S_{d} is limited to d <= {MAX_INVOLUTION_ENUMERATION_D}",
            limit=MAX_INVOLUTION_ENUMERATION_D,
            requested=d,
        )
    return [
        SymmetricInvolution(perm)
        for perm in itertools.permutations(range(d))
        if all(perm[perm[i]] == i for i in range(d))
    ]


def symmetric_phases(inv: SymmetricInvolution, values: Sequence[float]) -> tuple[float, ...]:
    """Phases constant on the orbits of ``inv``: φ_j = values[min(j, σ(j))]."""
    if len(values) != inv.d:
        raise ArgumentError(f"expected {inv.d} phase values, got {len(values)}", argument="phases")
    return tuple(float(values[min(j, inv(j))]) for j in range(inv.d))


def bell_state(inv: SymmetricInvolution, phases: Sequence[float] | None = None) -> BellState:
    """Generalized Bell state of a symmetric involution with orbit-compatible phases."""
    d = inv.d
    phases = tuple(float(x) for x in phases) if phases is not None else (0.0,) * d
    if len(phases) != d:
        raise ArgumentError(f"expected {d} phases, got {len(phases)}", argument="phases")
    factors = np.exp(1j * np.asarray(phases))
    mismatch = max(abs(factors[j] - factors[inv(j)]) for j in range(d))
    if mismatch > PHASE_TOL:
        raise DomainError(
            "phases must agree on every orbit {j, σ(j)} for the Bell state to be swap-symmetric",
            details={"mismatch": float(mismatch)},
        )
    c = np.zeros(d * d, dtype=np.complex128)
    for j in range(d):
        c[inv(j) * d + j] = factors[j] / np.sqrt(d)
    return BellState(TensorVector(c, (d, d)), inv, phases)


def orthogonal_bell_family(d: int, n: int, phases: Sequence[float] | None = None) -> list[BellState]:
    """n Bell states from the reflections σ_k, k = 0..n−1, pairwise orthogonal.

    Distinct reflections differ at every index, so the coefficient matrices have disjoint
    support. Optional ``phases`` are folded onto each reflection's orbits.
    """
    if not 1 <= n <= d:
        raise ArgumentError(f"n must lie in [1, d={d}] (distinct reflections), got {n}", argument="n")
    family = []
    for k in range(n):
        inv = SymmetricInvolution.reflection(d, k)
        family.append(bell_state(inv, symmetric_phases(inv, phases) if phases is not None else None))
    for a, b in itertools.combinations(family, 2):
        overlap = abs(np.vdot(a.matrix(), b.matrix()))
        if overlap > 1e-12:
            raise DomainError("reflection Bell states are not orthogonal", details={"overlap": float(overlap)})
    return family


def bell_extension(d: int, n: int, phases: Sequence[float] | None = None) -> SubspaceBasis:
    """H_as ⊕ X_n with X_n spanned by ``orthogonal_bell_family(d, n)``."""
    if not 1 <= n <= d // 2:
        raise ArgumentError(f"n must lie in [1, floor(d/2)={d // 2}], got {n}", argument="n")
    bells = orthogonal_bell_family(d, n, phases)
    basis = antisymmetric_basis(d) + SubspaceBasis(tuple(b.vector for b in bells), (d, d))
    logger.debug("Built Bell extension", d=d, n=n, dim=basis.dim)
    return basis


def antisym_subspace(d: int, n: int) -> SubspaceBasis:
    """First n antisymmetric basis vectors in lexicographic (i, j) order."""
    high = comb(d, 2) - 1
    if not 1 <= n <= high:
        raise ArgumentError(f"n must lie in [1, {high}] for d={d}, got {n}", argument="n")
    full = antisymmetric_basis(d)
    return SubspaceBasis(full.vectors[:n], full.ambient_dims)


def random_antisym_subspace(d: int, n: int, rng: np.random.Generator) -> SubspaceBasis:
    """Haar-random n-dimensional subspace of the antisymmetric space."""
    full = antisymmetric_basis(d)
    if not 1 <= n <= full.dim:
        raise ArgumentError(f"n must lie in [1, {full.dim}] for d={d}, got {n}", argument="n")
    mixing = rng.standard_normal((full.dim, n)) + 1j * rng.standard_normal((full.dim, n))
    q, _ = np.linalg.qr(mixing)
    return SubspaceBasis.from_matrix(full.matrix() @ q, full.ambient_dims)


def chebyshev_nodes(d: int) -> list[complex]:
    """cos((2k+1)π / (2(2d−1))), k = 0..2d−2: real, distinct, well conditioned."""
    m = 2 * d - 1
    return [complex(np.cos((2 * k + 1) * np.pi / (2 * m))) for k in range(m)]


def equispaced_nodes(d: int) -> list[complex]:
    """k/(2d−1), k = 0..2d−2."""
    m = 2 * d - 1
    return [complex(k / m) for k in range(m)]


def unit_root_nodes(d: int) -> list[complex]:
    """The (2d−1)-th roots of unity."""
    m = 2 * d - 1
    return [complex(np.exp(2j * np.pi * k / m)) for k in range(m)]


def parthasarathy_spaces(d: int, lambdas: Sequence[complex] | None = None) -> tuple[SubspaceBasis, SubspaceBasis]:
    """(L, S) with L = span{u_λ ⊗ u_λ : λ ∈ G}, u_λ = Σ_k λ^k e_k, and S = L⊥."""
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    nodes = np.asarray(chebyshev_nodes(d) if lambdas is None else list(lambdas), dtype=np.complex128)
    if nodes.size != 2 * d - 1:
        raise ArgumentError(f"G must contain 2d-1 = {2 * d - 1} nodes, got {nodes.size}", argument="lambdas")
    gaps = np.abs(nodes[:, None] - nodes[None, :]) + np.eye(nodes.size)
    if np.min(gaps) <= 1e-12:
        raise DomainError("nodes of G must be pairwise distinct", details={"min_gap": float(np.min(gaps))})

    exponents = np.add.outer(np.arange(d), np.arange(d)).reshape(-1)
    powers = np.vander(nodes, 2 * d - 1, increasing=True)
    products = [TensorVector(row[exponents], (d, d)) for row in powers]
    big, rank = orthonormalize(products)
    if rank != 2 * d - 1:
        raise DomainError(
            f"span of u_λ ⊗ u_λ has dimension {rank}, expected {2 * d - 1}; G is numerically degenerate",
            details={"rank": rank},
        )
    small = complement(big)
    if small.dim != (d - 1) ** 2:
        raise DomainError(f"complement has dimension {small.dim}, expected {(d - 1) ** 2}")
    logger.debug("Built Parthasarathy spaces", d=d, dim_L=big.dim, dim_S=small.dim)
    return big, small


def sum_representation_basis(d: int) -> SubspaceBasis:
    """w_s = v_s/‖v_s‖, v_s = Σ_{k+l=s} e_k ⊗ e_l for s = 0..2d−2; an orthonormal basis of L."""
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}", argument="d")
    vectors = []
    for s in range(2 * d - 1):
        c = np.zeros(d * d, dtype=np.complex128)
        for k in range(max(0, s - d + 1), min(s, d - 1) + 1):
            c[k * d + (s - k)] = 1.0
        c /= np.sqrt(d - abs(s - d + 1))
        vectors.append(TensorVector(c, (d, d)))
    return SubspaceBasis(tuple(vectors), (d, d))


def build_subspace(spec: ConstructionSpec) -> SubspaceBasis:
    """The subspace W a construction spec selects (S for the Parthasarathy family)."""
    if spec.family is Family.ANTISYMMETRIC_FULL:
        return antisymmetric_basis(spec.d)
    if spec.family is Family.ANTISYMMETRIC_SUBSPACE:
        assert spec.n is not None
        return antisym_subspace(spec.d, spec.n)
    if spec.family is Family.BELL_EXTENSION:
        assert spec.n is not None
        return bell_extension(spec.d, spec.n, spec.phases)
    _, small = parthasarathy_spaces(spec.d, spec.nodes)
    return small
