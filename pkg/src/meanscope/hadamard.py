"""Tensor and Hadamard products, and the four-operator expressions built from them.

The Hadamard product depends on a fixed orthonormal basis; here it is the
standard coordinate basis, so ``A o B`` is the entrywise product.
"""
from __future__ import annotations

import numpy as np

from .constants import HadamardChordConstants
from .errors import HypothesisError, InputError
from .linalg import hermitian, inv, sqrt_pair
from .means import RepresentingFunction, kubo_ando_mean, weighted_geometric


def kron(A, B) -> np.ndarray:
    return hermitian(np.kron(hermitian(A), hermitian(B)))


def canonical_isometry(d: int) -> np.ndarray:
    """``d^2 x d`` matrix with columns ``e_n (x) e_n``."""
    U = np.zeros((d * d, d))
    U[np.arange(d) * (d + 1), np.arange(d)] = 1.0
    return U


def hadamard(A, B) -> np.ndarray:
    A, B = hermitian(A), hermitian(B)
    if A.shape != B.shape:
        raise InputError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return hermitian(A * B)


def hadamard_via_isometry(A, B) -> np.ndarray:
    """``U* (A (x) B) U``; reference path for :func:`hadamard`."""
    A, B = hermitian(A), hermitian(B)
    if A.shape != B.shape:
        raise InputError(f"dimension mismatch: {A.shape} vs {B.shape}")
    U = canonical_isometry(A.shape[0])
    return hermitian(U.T @ np.kron(A, B) @ U)


FOUR_OPERATOR_CASES = ("tensor-mean", "had-arith", "had-geo", "had-geo-diff", "had-rev-ando", "had-shisha",
                       "had-ratio", "had-excess", "had-geo-diff-half", "had-rev-ando-half")


def assemble_four_operator(case: str, A, B, C, D, f: RepresentingFunction,
                           hc: HadamardChordConstants | None):
    """Left- and right-hand sides of the four-operator inequalities.

    ``R`` below is ``(A sigma C) o (B sigma D)``; ``P = A o B`` and
    ``Q = C o D``.
    """
    if case not in FOUR_OPERATOR_CASES:
        raise InputError(f"{case!r} is not a tensor/Hadamard case")
    if f.is_submultiplicative != "yes":
        raise HypothesisError(f"{f.name} is not known to be submultiplicative")
    if case == "tensor-mean":
        lhs = kubo_ando_mean(kron(A, B), kron(C, D), f)
        rhs = kron(kubo_ando_mean(A, C, f), kubo_ando_mean(B, D, f))
        return lhs, rhs

    alpha = hc.alpha
    d = hermitian(A).shape[0]
    I = np.eye(d)
    P, Q = hadamard(A, B), hadamard(C, D)
    if case in ("had-rev-ando", "had-rev-ando-half"):
        R = hadamard(weighted_geometric(A, C, alpha), weighted_geometric(B, D, alpha))
    else:
        R = hadamard(kubo_ando_mean(A, C, f), kubo_ando_mean(B, D, f))

    if case == "had-arith":
        omega = 0.0 if hc.omega_undefined else hc.omega
        return (1 - alpha) * omega * P + alpha * Q, (alpha / hc.mu) * R
    if case == "had-geo":
        return hc.omega ** (1 - alpha) * weighted_geometric(P, Q, alpha), (alpha / hc.mu) * R
    if case == "had-geo-diff":
        a1, _, a2, _, a3, _, a4, _ = hc.bounds
        k = (hc.geo_factor - 1) * a1 * a2 * float(f(a3 * a4 / (hc.bounds[1] * hc.bounds[3])))
        return weighted_geometric(P, Q, alpha) - R, k * I
    if case == "had-geo-diff-half":
        a1, b1, a2, b2, a3, b3, a4, b4 = hc.bounds
        # second entry read literally from the source statement
        cap = min(a1 * a2 * float(f(a3 * a4 / (b1 * b2))), a3 * a4 / (a1 * a2) * b3 * b4 ** 0.5)
        k = (1 / (2 * hc.mu * np.sqrt(hc.omega_half)) - 1) * cap
        return weighted_geometric(P, Q, 0.5) - R, k * I
    if case == "had-rev-ando":
        a1, a2 = hc.bounds[0], hc.bounds[2]
        return weighted_geometric(P, Q, alpha) - R, hc.rev_ando_add * a1 * a2 * I
    if case == "had-rev-ando-half":
        a1, a2, a3, a4 = hc.bounds[0], hc.bounds[2], hc.bounds[4], hc.bounds[6]
        k = (1 / (4 * hc.mu) - hc.nu) * min(a1 * a2, a3 * a4)
        return weighted_geometric(P, Q, 0.5) - R, k * I
    if case == "had-shisha":
        Rh, Rnh = sqrt_pair(R)
        lhs = Rnh @ Q @ Rnh - Rh @ inv(P) @ Rh
        return lhs, hc.shisha * I
    if case == "had-ratio":
        return kubo_ando_mean(P, Q, f), hc.K * R
    if case == "had-excess":
        return kubo_ando_mean(P, Q, f) - R, -hc.g_at_t0 * P
    raise AssertionError(case)
