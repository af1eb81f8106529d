from math import comb

import numpy as np
import pytest

from petzlab.errors import CapExceededError, RejectedInput
from petzlab.functional import von_neumann_entropy
from petzlab.qstate import partial_trace, random_orthonormal_vectors
from petzlab.subspace import (
    antisymmetric_subspace_basis,
    custom_subspace,
    maximally_mixed,
    slater_determinant,
    slater_marginal_oracle,
    symmetric_subspace_basis,
)

SWAP = np.eye(4)[[0, 2, 1, 3]]
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


def test_symmetric_examples():
    b = symmetric_subspace_basis(2, 2)
    assert b.r == 3
    np.testing.assert_allclose(b.projector(), (np.eye(4) + SWAP) / 2, atol=1e-15)
    assert symmetric_subspace_basis(2, 3).r == 4
    b = symmetric_subspace_basis(3, 1)
    np.testing.assert_allclose(b.isometry, np.eye(3))


def test_symmetric_lexicographic_order():
    v = symmetric_subspace_basis(2, 2).isometry
    np.testing.assert_allclose(v[:, 0], [1, 0, 0, 0])
    np.testing.assert_allclose(v[:, 1], [0, 1, 1, 0] / np.sqrt(2))
    np.testing.assert_allclose(v[:, 2], [0, 0, 0, 1])


@pytest.mark.parametrize("d,n", [(2, 1), (2, 4), (3, 3), (4, 2)])
def test_symmetric_dimension(d, n):
    assert symmetric_subspace_basis(d, n).r == comb(d + n - 1, n)


def test_antisymmetric_examples():
    b = antisymmetric_subspace_basis(2, 2)
    assert b.r == 1
    np.testing.assert_allclose(np.abs(b.isometry[:, 0]), np.abs(SINGLET), atol=1e-15)
    assert antisymmetric_subspace_basis(4, 2).r == 6
    np.testing.assert_allclose(antisymmetric_subspace_basis(3, 1).isometry, np.eye(3))
    with pytest.raises(ValueError):
        antisymmetric_subspace_basis(2, 3)


def test_cap_rejected():
    with pytest.raises(CapExceededError):
        symmetric_subspace_basis(2, 13)


@pytest.mark.parametrize("make", [symmetric_subspace_basis, antisymmetric_subspace_basis])
@pytest.mark.parametrize("d,n", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_projectors_idempotent_hermitian(make, d, n):
    p = make(d, n).projector()
    assert np.max(np.abs(p @ p - p)) < 1e-10
    assert np.max(np.abs(p - p.conj().T)) < 1e-10


def test_maximally_mixed_examples():
    np.testing.assert_allclose(
        maximally_mixed(symmetric_subspace_basis(2, 2)).matrix, (np.eye(4) + SWAP) / 6, atol=1e-15
    )
    np.testing.assert_allclose(
        maximally_mixed(antisymmetric_subspace_basis(2, 2)).matrix, np.outer(SINGLET, SINGLET), atol=1e-15
    )
    b = symmetric_subspace_basis(3, 2)
    assert von_neumann_entropy(maximally_mixed(b)) == pytest.approx(np.log(6), abs=1e-12)


@pytest.mark.parametrize("make", [symmetric_subspace_basis, antisymmetric_subspace_basis])
@pytest.mark.parametrize("d,n", [(3, 2), (3, 3), (4, 2), (4, 3)])
def test_marginal_of_maximally_mixed(make, d, n):
    full = maximally_mixed(make(d, n))
    for k in range(1, n + 1):
        got = partial_trace(full, list(range(k))).matrix
        assert np.max(np.abs(got - maximally_mixed(make(d, k)).matrix)) < 1e-10


def test_slater_examples():
    v = random_orthonormal_vectors(3, 1, seed=1)
    np.testing.assert_allclose(slater_determinant(v).matrix, np.outer(v[:, 0], v[:, 0].conj()), atol=1e-14)
    np.testing.assert_allclose(slater_determinant(np.eye(2)).matrix, np.outer(SINGLET, SINGLET), atol=1e-15)
    v = random_orthonormal_vectors(4, 3, seed=2)
    phi = slater_determinant(v).matrix
    p = antisymmetric_subspace_basis(4, 3).projector()
    assert np.max(np.abs(p @ phi @ p - phi)) < 1e-12


def test_slater_rejects_non_orthonormal():
    with pytest.raises(RejectedInput, match="overlap"):
        slater_determinant(np.array([[1.0, 1.0], [0.0, 1.0]]) / np.array([1, np.sqrt(2)]))


def test_marginal_oracle_examples():
    v = random_orthonormal_vectors(3, 2, seed=3)
    expected = (np.outer(v[:, 0], v[:, 0].conj()) + np.outer(v[:, 1], v[:, 1].conj())) / 2
    np.testing.assert_allclose(slater_marginal_oracle(v, 1).matrix, expected, atol=1e-14)
    np.testing.assert_allclose(slater_marginal_oracle(v, 2).matrix, slater_determinant(v).matrix, atol=1e-14)


def test_custom_subspace_orthonormalizes():
    b = custom_subspace(2, 2, np.array([[1, 1], [0, 1], [0, 0], [0, 0]], dtype=float))
    assert b.r == 2
    np.testing.assert_allclose(b.projector(), np.diag([1, 1, 0, 0]), atol=1e-15)
