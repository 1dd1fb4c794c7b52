"""
Tests for tensor vectors, Schmidt spectra and partial traces.
"""

import numpy as np
import pytest

from addlab.core.error_handler import ArgumentError, DomainError
from addlab.tensor_core import (
    DensityMatrix,
    SubspaceBasis,
    TensorVector,
    complement,
    majorizes,
    maximally_entangled,
    orthonormalize,
    partial_trace_env,
    projector,
    random_unit_vector,
    reshuffle_eta,
    schmidt,
    swap_operator,
)


class TestTensorVector:
    """Test TensorVector construction and arithmetic."""

    def test_from_factors(self):
        """Simple tensors keep one dimension per factor."""
        v = TensorVector.from_factors([1, 0], [0, 1, 0])

        assert v.dims == (2, 3)
        assert v.size == 6
        assert v.tensor()[0, 1] == 1

    def test_size_mismatch(self):
        """Coefficient count must match the product of the dims."""
        with pytest.raises(ArgumentError, match="do not match dims"):
            TensorVector(np.ones(5), (2, 3))

    def test_non_finite(self):
        with pytest.raises(DomainError):
            TensorVector(np.array([1.0, np.nan]), (2,))

    def test_coefficients_read_only(self):
        v = TensorVector(np.ones(4), (2, 2))
        with pytest.raises(ValueError):
            v.coefficients[0] = 2

    def test_normalize_zero_vector(self):
        """The zero vector cannot be normalized."""
        with pytest.raises(DomainError, match="zero vector"):
            TensorVector(np.zeros(4), (2, 2)).normalized()

    def test_inner_is_antilinear_in_first_argument(self):
        a = TensorVector(np.array([1j, 0]), (2,))
        b = TensorVector(np.array([1, 0]), (2,))

        assert a.inner(b) == pytest.approx(-1j)

    def test_inner_dims_mismatch(self):
        with pytest.raises(ArgumentError):
            TensorVector(np.ones(4), (2, 2)).inner(TensorVector(np.ones(4), (4,)))

    def test_basis_vector(self):
        v = TensorVector.basis((3, 3), (1, 2))

        assert v.coefficients[5] == 1
        assert v.is_unit()


class TestSchmidt:
    """Test Schmidt coefficients and their agreement with reduced states."""

    def test_product_vector_has_rank_one(self):
        v = TensorVector.from_factors([1, 1], [1, 0, 1]).normalized()
        spectrum = schmidt(v, 1)

        assert spectrum.rank == 1
        assert spectrum.mu1_squared == pytest.approx(1.0)

    def test_maximally_entangled_vector(self):
        d = 4
        v = TensorVector(np.eye(d).reshape(-1) / np.sqrt(d), (d, d))
        spectrum = schmidt(v, 1)

        np.testing.assert_allclose(spectrum.coefficients, np.full(d, 1 / np.sqrt(d)), atol=1e-12)

    def test_invalid_split(self):
        v = TensorVector(np.ones(4), (2, 2))
        with pytest.raises(ArgumentError, match="split"):
            schmidt(v, 2)

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            schmidt(TensorVector(np.zeros(4), (2, 2)), 1)

    def test_partial_trace_matches_schmidt(self, rng):
        """Reduced-state eigenvalues equal squared Schmidt coefficients on both sides."""
        for _ in range(200):
            dims = tuple(int(k) for k in rng.integers(2, 4, size=3))
            v = random_unit_vector(dims, rng)
            squared = schmidt(v, 1).squared()

            left = partial_trace_env(v, (0,)).eigenvalues()
            right = partial_trace_env(v, (1, 2)).eigenvalues()

            np.testing.assert_allclose(left, squared[: left.size], atol=1e-10)
            np.testing.assert_allclose(right[: squared.size], squared, atol=1e-10)

    def test_partial_trace_requires_unit_vector(self):
        with pytest.raises(DomainError, match="unit vector"):
            partial_trace_env(TensorVector(np.ones(4), (2, 2)), (0,))

    def test_partial_trace_keep_validation(self):
        v = TensorVector.basis((2, 2), (0, 0))
        with pytest.raises(ArgumentError):
            partial_trace_env(v, (0, 1))
        with pytest.raises(ArgumentError):
            partial_trace_env(v, (0, 0))


class TestDensityMatrix:
    """Test DensityMatrix validation."""

    def test_pure_state(self):
        rho = DensityMatrix.pure(TensorVector.basis((2,), (1,)))

        np.testing.assert_allclose(rho.spectrum(), [1.0, 0.0], atol=1e-14)

    def test_trace_not_one(self):
        with pytest.raises(DomainError, match="trace"):
            DensityMatrix(np.eye(2))

    def test_not_hermitian(self):
        with pytest.raises(DomainError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]))

    def test_negative_eigenvalue(self):
        with pytest.raises(DomainError, match="negative eigenvalue"):
            DensityMatrix(np.diag([1.5, -0.5]))


class TestReshuffle:
    def test_eta_swaps_middle_factors(self):
        v = TensorVector.basis((2, 3, 4, 5), (1, 2, 3, 4))
        w = reshuffle_eta(v)

        assert w.dims == (2, 4, 3, 5)
        assert w.tensor()[1, 3, 2, 4] == 1

    def test_eta_needs_four_factors(self):
        with pytest.raises(ArgumentError):
            reshuffle_eta(TensorVector(np.ones(4), (2, 2)))

    def test_eta_is_an_isometric_involution(self, rng):
        """η preserves inner products and η(η(v)) = v."""
        for _ in range(100):
            dims = tuple(int(k) for k in rng.integers(2, 5, size=4))
            u = random_unit_vector(dims, rng)
            v = random_unit_vector(dims, rng)

            assert reshuffle_eta(u).inner(reshuffle_eta(v)) == pytest.approx(u.inner(v), abs=1e-12)
            twice = reshuffle_eta(reshuffle_eta(v))
            assert twice.dims == dims
            np.testing.assert_allclose(twice.coefficients, v.coefficients, atol=1e-15)


class TestSubspaceLinearAlgebra:
    """Test orthonormalization, projectors and complements."""

    def test_orthonormalize_drops_dependent_vectors(self):
        vectors = [
            TensorVector.basis((2, 2), (0, 0)),
            TensorVector.basis((2, 2), (0, 1)),
            TensorVector(np.array([1, 1, 0, 0]), (2, 2)),
        ]
        basis, rank = orthonormalize(vectors)

        assert rank == 2
        assert basis.dim == 2
        assert basis.is_orthonormal()

    def test_projector_rejects_non_orthonormal_basis(self):
        basis = SubspaceBasis((TensorVector(np.array([1, 1, 0, 0]), (2, 2)),))
        with pytest.raises(DomainError, match="not orthonormal"):
            projector(basis)

    def test_projector_is_idempotent(self, rng):
        vectors = [random_unit_vector((3, 3), rng) for _ in range(4)]
        basis, _ = orthonormalize(vectors)
        p = projector(basis)

        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        assert np.trace(p).real == pytest.approx(4)

    def test_complement_dimension(self, rng):
        basis, _ = orthonormalize([random_unit_vector((3, 3), rng) for _ in range(4)])
        rest = complement(basis)

        assert rest.dim == 5
        np.testing.assert_allclose(projector(basis) + projector(rest), np.eye(9), atol=1e-10)

    def test_direct_sum_projector_is_additive(self, rng):
        """‖P_{B₁⊕B₂} z‖² = ‖P_{B₁} z‖² + ‖P_{B₂} z‖² for orthogonal B₁, B₂."""
        basis, _ = orthonormalize([random_unit_vector((3, 4), rng) for _ in range(7)])
        first = SubspaceBasis(basis.vectors[:3])
        second = SubspaceBasis(basis.vectors[3:])
        for _ in range(50):
            z = random_unit_vector((3, 4), rng).coefficients
            whole = np.linalg.norm(projector(first + second) @ z) ** 2
            parts = np.linalg.norm(projector(first) @ z) ** 2 + np.linalg.norm(projector(second) @ z) ** 2

            assert whole == pytest.approx(parts, abs=1e-12)

    def test_basis_dims_must_agree(self):
        with pytest.raises(ArgumentError):
            SubspaceBasis((TensorVector.basis((2, 2), (0, 0)), TensorVector.basis((4,), (0,))))

    def test_maximally_entangled_is_unit(self, rng):
        basis, _ = orthonormalize([random_unit_vector((2, 3), rng) for _ in range(3)])
        psi = maximally_entangled(basis)

        assert psi.dims == (2, 3, 2, 3)
        assert psi.is_unit(1e-12)


class TestSwapAndMajorization:
    def test_swap_exchanges_factors(self):
        x, y = np.array([1, 2, 3]), np.array([0, 1j, 0])
        v = swap_operator(3)

        np.testing.assert_allclose(v @ np.kron(x, y), np.kron(y, x))
        np.testing.assert_allclose(v @ v, np.eye(9))

    def test_majorizes(self):
        assert majorizes([0.7, 0.3], [0.5, 0.5])
        assert not majorizes([0.5, 0.5], [0.7, 0.3])
        assert majorizes([1.0], [0.5, 0.25, 0.25])

    def test_majorizes_needs_equal_sums(self):
        with pytest.raises(DomainError, match="equal sums"):
            majorizes([0.5, 0.5], [0.5, 0.4])
