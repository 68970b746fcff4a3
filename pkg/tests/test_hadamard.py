import numpy as np
import pytest

from meanscope.constants import hadamard_constants
from meanscope.errors import HypothesisError, InputError
from meanscope.hadamard import assemble_four_operator, canonical_isometry, hadamard, hadamard_via_isometry, kron
from meanscope.linalg import loewner_compare
from meanscope.means import arithmetic, geometric, kubo_ando_mean, weighted_geometric

from conftest import random_herm, random_pd


def test_kron_identity():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_diagonal():
    np.testing.assert_array_equal(kron(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])), np.diag([3.0, 4.0, 6.0, 8.0]))


def test_kron_spectrum_is_pairwise_products(rng):
    A, B = random_herm(rng, 3), random_herm(rng, 4)
    wa, wb = np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
    np.testing.assert_allclose(np.linalg.eigvalsh(kron(A, B)), np.sort(np.outer(wa, wb).ravel()), atol=1e-12)


def test_hadamard_with_identity_is_diagonal(rng):
    A = random_herm(rng, 4)
    np.testing.assert_allclose(hadamard(A, np.eye(4)), np.diag(np.diag(A)))


def test_hadamard_small():
    np.testing.assert_array_equal(hadamard([[1.0, 2.0], [2.0, 5.0]], np.eye(2)), np.diag([1.0, 5.0]))


def test_hadamard_dimension_mismatch():
    with pytest.raises(InputError):
        hadamard(np.eye(2), np.eye(3))


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_isometry_path_matches_entrywise(rng, d):
    A, B = random_herm(rng, d), random_herm(rng, d)
    np.testing.assert_allclose(hadamard_via_isometry(A, B), hadamard(A, B), atol=1e-14)
    U = canonical_isometry(d)
    np.testing.assert_allclose(U.T @ U, np.eye(d))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_geometric_mean_is_tensor_multiplicative(rng, alpha):
    # for t^a the tensor bound is an equality
    A, B, C, D = (random_pd(rng, 2) for _ in range(4))
    lhs = weighted_geometric(kron(A, B), kron(C, D), alpha)
    rhs = kron(weighted_geometric(A, C, alpha), weighted_geometric(B, D, alpha))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_tensor_bound_needs_submultiplicative():
    I = np.eye(2)
    with pytest.raises(HypothesisError):
        assemble_four_operator("tensor-mean", I, I, I, I, arithmetic(0.5), None)


def test_schur_product_is_positive(rng):
    A, B = random_pd(rng, 4), random_pd(rng, 4)
    assert np.linalg.eigvalsh(hadamard(A, B))[0] > 0


def test_had_ratio_scalar_bound():
    # with commuting diagonal inputs at d=1 the bound reduces to sqrt(pq) <= K sqrt(ac) sqrt(bd)
    f = geometric(0.5)
    hc = hadamard_constants(f, (4, 1) * 4, 0.5)
    A, B, C, D = ([[x]] for x in (1.0, 1.0, 4.0, 4.0))
    lhs, rhs = assemble_four_operator("had-ratio", A, B, C, D, f, hc)
    assert lhs[0, 0] == pytest.approx(4.0)
    assert rhs[0, 0] == pytest.approx(2.125 * 4.0)
    assert loewner_compare(lhs, rhs).holds


def test_had_excess_holds_on_random_instance(rng):
    f = geometric(0.5)
    box = (4, 1) * 4
    hc = hadamard_constants(f, box, 0.5)
    from meanscope.linalg import SpectralBounds, random_banded_hermitian
    A, B, C, D = (random_banded_hermitian(3, SpectralBounds(1, 4), seed=rng) for _ in range(4))
    lhs, rhs = assemble_four_operator("had-excess", A, B, C, D, f, hc)
    assert loewner_compare(lhs, rhs).holds
    # and the left side really is (A o B) # (C o D) - (A # C) o (B # D)
    ref = kubo_ando_mean(A * B, C * D, f) - hadamard(weighted_geometric(A, C, 0.5), weighted_geometric(B, D, 0.5))
    np.testing.assert_allclose(lhs, ref, atol=1e-12)
