import numpy as np
import pytest

from meanscope.errors import DomainError, InputError, SingularError
from meanscope.linalg import (
    SpectralBounds,
    eigh,
    fun_calc,
    hermitian,
    inv,
    inv_sqrtm,
    loewner_compare,
    random_banded_hermitian,
    random_unitary,
    spectral_bounds,
    sqrt_pair,
    sqrtm,
)

from conftest import random_herm


def test_eigh_diagonal():
    w, _ = eigh(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(w, [1.0, 3.0])


def test_eigh_swap():
    w, _ = eigh([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(w, [-1.0, 1.0])


def test_eigh_reconstruction(rng):
    M = random_herm(rng, 5)
    dec = eigh(M)
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert np.linalg.norm(dec.rebuild() - M) < 1e-10


def test_hermitian_rejects_bad_input():
    with pytest.raises(InputError):
        hermitian(np.ones((2, 3)))
    with pytest.raises(InputError):
        hermitian([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(InputError):
        hermitian([[np.nan, 0.0], [0.0, 1.0]])


def test_hermitian_promotes_scalar_and_keeps_real():
    assert hermitian(2.0).shape == (1, 1)
    assert hermitian(np.eye(2)).dtype == np.float64
    assert np.iscomplexobj(hermitian(np.eye(2, dtype=complex)))


def test_fun_calc_identity(rng):
    M = random_herm(rng, 4)
    np.testing.assert_allclose(fun_calc(M, lambda w: w), M, atol=1e-12)


def test_fun_calc_sqrt_diagonal():
    np.testing.assert_allclose(fun_calc(np.diag([4.0, 9.0]), np.sqrt, "nonnegative"), np.diag([2.0, 3.0]))


def test_sqrt_of_known_square(rng):
    G = rng.standard_normal((3, 3))
    N = G @ G.T + 0.1 * np.eye(3)
    M = N @ N
    R = sqrtm(M)
    np.testing.assert_allclose(R @ R, M, atol=1e-10)
    np.testing.assert_allclose(R, N, atol=1e-9)


def test_fun_calc_domain_errors():
    with pytest.raises(DomainError):
        fun_calc(np.diag([-1.0, 2.0]), np.sqrt, "nonnegative")
    with pytest.raises(DomainError):
        fun_calc(np.diag([0.0, 2.0]), np.log, "positive")


def test_inverse_and_inverse_sqrt(rng):
    M = random_banded_hermitian(4, SpectralBounds(0.5, 3.0), seed=rng)
    np.testing.assert_allclose(inv(M) @ M, np.eye(4), atol=1e-12)
    S = inv_sqrtm(M)
    np.testing.assert_allclose(S @ M @ S, np.eye(4), atol=1e-12)
    half, neg_half = sqrt_pair(M)
    np.testing.assert_allclose(half @ neg_half, np.eye(4), atol=1e-12)


def test_inverse_of_singular_raises():
    with pytest.raises(SingularError):
        inv(np.diag([1.0, 0.0]))


def test_loewner_strict():
    cert = loewner_compare(np.diag([1.0, 2.0]), np.diag([2.0, 3.0]))
    assert cert.holds
    assert cert.min_gap_eig == pytest.approx(1.0)


def test_loewner_incomparable():
    cert = loewner_compare(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))
    assert not cert.holds
    assert cert.min_gap_eig == pytest.approx(-1.0)


def test_loewner_reflexive(rng):
    X = random_herm(rng, 6)
    cert = loewner_compare(X, X)
    assert cert.holds
    assert abs(cert.min_gap_eig) <= cert.threshold


def test_loewner_tolerance_is_scale_aware():
    X = np.diag([1e6, 1.0])
    Y = X - 1e-5 * np.eye(2)
    assert loewner_compare(X, Y).holds
    assert not loewner_compare(X, Y, tol_abs=1e-9, tol_rel=0.0).holds


def test_spectral_bounds_validation():
    with pytest.raises(InputError):
        SpectralBounds(0.0, 1.0)
    with pytest.raises(InputError):
        SpectralBounds(2.0, 1.0)
    with pytest.raises(InputError):
        SpectralBounds(1.0, 1.0, strict=True)


def test_random_banded_forced():
    M = random_banded_hermitian(1, SpectralBounds(2.0, 2.0), seed=0)
    np.testing.assert_allclose(M, [[2.0]])


def test_random_banded_pinned():
    M = random_banded_hermitian(4, SpectralBounds(1.0, 4.0), pin_endpoints=True, seed=1)
    w = np.linalg.eigvalsh(M)
    assert w[0] == pytest.approx(1.0, abs=1e-12)
    assert w[-1] == pytest.approx(4.0, abs=1e-12)
    assert np.all((w >= 1 - 1e-12) & (w <= 4 + 1e-12))


def test_random_banded_deterministic():
    b = SpectralBounds(0.5, 2.0)
    np.testing.assert_array_equal(random_banded_hermitian(3, b, seed=7), random_banded_hermitian(3, b, seed=7))


@pytest.mark.parametrize("real", [False, True])
def test_random_unitary(rng, real):
    U = random_unitary(5, rng, real=real)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(5), atol=1e-12)
    assert np.isrealobj(U) == real


def test_spectral_bounds():
    assert spectral_bounds(np.diag([3.0, -1.0, 2.0])) == pytest.approx((-1.0, 3.0))
