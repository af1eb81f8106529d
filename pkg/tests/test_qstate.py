import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from petzlab.errors import RejectedInput
from petzlab.matfun import support_projector
from petzlab.qstate import (
    DensityOperator,
    basis_state,
    epsilon_mix,
    ginibre_random_density,
    haar_random_pure,
    maximally_mixed_full,
    partial_trace,
    permute_factors,
    pure,
    tensor_product,
)


def test_tensor_product_examples():
    pi2 = maximally_mixed_full(2)
    np.testing.assert_allclose(tensor_product(pi2, pi2).matrix, np.eye(4) / 4)
    s = tensor_product(basis_state(2, 0), basis_state(2, 1))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    np.testing.assert_allclose(s.matrix, expected)
    assert s.dims == (2, 2)


def test_tensor_product_trace(rng):
    a, b = ginibre_random_density(3, seed=rng), ginibre_random_density(2, seed=rng)
    ab = tensor_product(a, b)
    assert np.trace(ab.matrix).real == pytest.approx(1, abs=1e-12)
    assert ab.dims == (3, 2)


def test_partial_trace_examples(rng):
    rho = ginibre_random_density(4, seed=rng)
    rho = DensityOperator(rho.matrix, (2, 2))
    np.testing.assert_allclose(partial_trace(rho, [0, 1]).matrix, rho.matrix)
    bell = pure(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    np.testing.assert_allclose(partial_trace(bell, [0]).matrix, np.eye(2) / 2, atol=1e-15)
    a, t = ginibre_random_density(3, seed=rng), ginibre_random_density(2, seed=rng)
    assert np.max(np.abs(partial_trace(tensor_product(a, t), [0]).matrix - a.matrix)) < 1e-12


def test_partial_trace_matches_explicit_sum(rng):
    # oracle: explicit index sum for a 2x3x2 system keeping factors 0 and 2
    dims = (2, 3, 2)
    m = ginibre_random_density(12, seed=rng).matrix
    t = m.reshape(dims + dims)
    expected = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for c in range(2):
            for a2 in range(2):
                for c2 in range(2):
                    expected[a * 2 + c, a2 * 2 + c2] = sum(t[a, b, c, a2, b, c2] for b in range(3))
    got = partial_trace(DensityOperator(m, dims), [2, 0]).matrix
    np.testing.assert_allclose(got, expected, atol=1e-14)


def test_partial_trace_rejects_bad_indices():
    rho = DensityOperator(np.eye(4) / 4, (2, 2))
    with pytest.raises(ValueError):
        partial_trace(rho, [2])
    with pytest.raises(ValueError):
        partial_trace(rho, [])


def test_partial_trace_commutes_with_reordering(rng):
    dims = (2, 3, 2)
    m = ginibre_random_density(12, seed=rng).matrix
    perm = (2, 0, 1)
    pm, pdims = permute_factors(m, dims, perm)
    # keeping old factors {0, 2} == keeping new positions {1, 0}
    a = partial_trace(DensityOperator(m, dims), [0, 2]).matrix
    b = partial_trace(DensityOperator(pm, pdims), [0, 1]).matrix
    b_swapped, _ = permute_factors(b, (2, 2), (1, 0))
    np.testing.assert_allclose(a, b_swapped, atol=1e-14)


def test_haar_pure_properties():
    rho = haar_random_pure(3, seed=5).matrix
    assert np.max(np.abs(rho @ rho - rho)) < 1e-10
    assert np.trace(rho).real == pytest.approx(1, abs=1e-12)


def test_haar_first_moment():
    rng = np.random.default_rng(11)
    d = 3
    mean = sum(haar_random_pure(d, seed=rng).matrix for _ in range(10_000)) / 10_000
    assert np.max(np.abs(mean - np.eye(d) / d)) < 3e-2


def test_ginibre_examples():
    rho = ginibre_random_density(4, rank=1, seed=2).matrix
    assert np.max(np.abs(rho @ rho - rho)) < 1e-10
    full = ginibre_random_density(4, rank=4, seed=3).matrix
    np.testing.assert_allclose(support_projector(full), np.eye(4), atol=1e-10)
    for r in range(1, 5):
        assert np.trace(ginibre_random_density(4, r, seed=r).matrix).real == pytest.approx(1)
    with pytest.raises(ValueError):
        ginibre_random_density(3, rank=4)


def test_seeds_reproduce_bit_for_bit():
    a = ginibre_random_density(3, seed=42).matrix
    b = ginibre_random_density(3, seed=42).matrix
    assert np.array_equal(a, b)


def test_epsilon_mix_examples(rng):
    s = ginibre_random_density(3, seed=rng)
    np.testing.assert_allclose(epsilon_mix(s, s, 0.3).matrix, s.matrix)
    mixed = epsilon_mix(basis_state(2, 0), basis_state(2, 1), 0.25)
    np.testing.assert_allclose(mixed.matrix, np.diag([0.25, 0.75]))
    with pytest.raises(ValueError):
        epsilon_mix(s, s, 1.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), eps=st.floats(0.01, 0.99))
def test_epsilon_mix_distance_and_kernel(seed, eps):
    rng = np.random.default_rng(seed)
    s1 = ginibre_random_density(3, rank=int(rng.integers(1, 4)), seed=rng)
    s2 = ginibre_random_density(3, rank=int(rng.integers(1, 4)), seed=rng)
    mix = epsilon_mix(s1, s2, eps).matrix
    tn = lambda x: np.sum(np.abs(np.linalg.eigvalsh(x)))
    assert tn(mix - s2.matrix) / 2 <= eps * tn(s1.matrix - s2.matrix) / 2 + 1e-12
    p = support_projector(mix)
    for s in (s1, s2):
        # range(s) inside range(mix), i.e. ker(mix) inside ker(s)
        assert np.max(np.abs(p @ s.matrix @ p - s.matrix)) < 1e-9


def test_density_operator_validation():
    with pytest.raises(RejectedInput):
        DensityOperator(np.diag([0.5, 0.6]), (2,)).validate()
    with pytest.raises(RejectedInput):
        DensityOperator(np.diag([1.2, -0.2]), (2,)).validate()
    with pytest.raises(ValueError):
        DensityOperator(np.eye(3) / 3, (2,))
