"""Positive linear maps described declaratively.

Every map sends Hermitian matrices to Hermitian matrices; scalar-valued maps
return ``1x1`` matrices so all inequalities reduce to one Loewner comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InputError
from .linalg import hermitian, loewner_compare, sqrtm


@dataclass(frozen=True, eq=False)
class Compression:
    """``M -> V* M V`` with ``V*V <= I``."""

    V: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.V))
        object.__setattr__(self, "V", V)
        s = np.linalg.svd(V, compute_uv=False)
        if s.size and s[0] > 1 + 1e-10:
            raise InputError(f"compression needs V*V <= I (largest singular value {s[0]:.6g})")

    @property
    def dim_in(self):
        return self.V.shape[0]

    def __call__(self, M):
        return hermitian(self.V.conj().T @ M @ self.V)


@dataclass(frozen=True, eq=False)
class VectorState:
    """``M -> <Mx, x>`` for a unit vector ``x``."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x).ravel()
        if abs(np.linalg.norm(x) - 1) > 1e-12:
            raise InputError(f"vector state needs a unit vector (norm {np.linalg.norm(x):.15g})")
        object.__setattr__(self, "x", x)

    @property
    def dim_in(self):
        return self.x.size

    def __call__(self, M):
        return hermitian(np.array([[np.vdot(self.x, M @ self.x)]]))


@dataclass(frozen=True, eq=False)
class SchurMultiplier:
    """``M -> S o M`` for PSD ``S`` with diagonal at most one."""

    S: np.ndarray

    def __post_init__(self):
        S = hermitian(self.S)
        if np.linalg.eigvalsh(S)[0] < -1e-10 * max(1.0, np.abs(S).max()):
            raise InputError("Schur multiplier must be positive semidefinite")
        if np.any(np.diag(S).real > 1 + 1e-10):
            raise InputError("Schur multiplier diagonal must not exceed 1")
        object.__setattr__(self, "S", S)

    @property
    def dim_in(self):
        return self.S.shape[0]

    def __call__(self, M):
        return hermitian(self.S * M)


@dataclass(frozen=True, eq=False)
class NormalizedTrace:
    """``M -> (tr M / d)`` as a ``1x1`` matrix."""

    d: int

    @property
    def dim_in(self):
        return self.d

    def __call__(self, M):
        return np.array([[np.trace(M).real / self.d]])


@dataclass(frozen=True, eq=False)
class CongruenceThen:
    """``C -> inner(A0^{1/2} C A0^{1/2})``."""

    A0: np.ndarray
    inner: "PositiveMapSpec"

    def __post_init__(self):
        A0 = hermitian(self.A0)
        if np.linalg.eigvalsh(A0)[0] <= 0:
            raise InputError("congruence factor must be strictly positive")
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "_half", sqrtm(A0))

    @property
    def dim_in(self):
        return self.A0.shape[0]

    def __call__(self, M):
        return apply_map(self.inner, self._half @ M @ self._half)


@dataclass(frozen=True, eq=False)
class HadamardCompression:
    """``M -> U* M U`` on ``H (x) H`` with ``U e_n = e_n (x) e_n``."""

    d: int

    @property
    def dim_in(self):
        return self.d * self.d

    def __call__(self, M):
        idx = np.arange(self.d) * (self.d + 1)
        return hermitian(M[np.ix_(idx, idx)])


PositiveMapSpec = Union[Compression, VectorState, SchurMultiplier, NormalizedTrace,
                        CongruenceThen, HadamardCompression]


def identity_map(d: int) -> Compression:
    return Compression(np.eye(d))


def apply_map(spec: PositiveMapSpec, M) -> np.ndarray:
    M = hermitian(M)
    if M.shape[0] != spec.dim_in:
        raise InputError(f"map expects dimension {spec.dim_in}, got {M.shape[0]}")
    return spec(M)


def map_of_identity(spec: PositiveMapSpec) -> np.ndarray:
    return apply_map(spec, np.eye(spec.dim_in))


def is_unital(spec: PositiveMapSpec, tol: float = 1e-10) -> bool:
    P = map_of_identity(spec)
    return bool(np.linalg.norm(P - np.eye(P.shape[0]), 2) <= tol)


def is_subunital(spec: PositiveMapSpec, tol: float = 1e-10) -> bool:
    P = map_of_identity(spec)
    return loewner_compare(P, np.eye(P.shape[0]), tol, 0.0).holds


@dataclass
class MapReport:
    positivity_pass: float
    unital_defect: tuple[float, float]
    linearity_residual: float
    unital: bool
    subunital: bool


def validate_map(spec: PositiveMapSpec, trials: int = 200, seed=0) -> MapReport:
    """Probe positivity and linearity on random inputs.

    ``unital_defect`` holds the smallest eigenvalues of ``I - Phi(I)`` and of
    ``Phi(I) - I``; both are ~0 for a unital map.
    """
    rng = np.random.default_rng(seed)
    d = spec.dim_in
    passes = 0
    resid = 0.0
    for _ in range(trials):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        k = rng.integers(1, d + 1)
        P = G[:, :k] @ G[:, :k].conj().T
        out = apply_map(spec, P)
        passes += loewner_compare(np.zeros_like(out), out, 1e-9, 1e-9).holds
        M = hermitian(G + G.conj().T)
        H2 = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        N = hermitian(H2 + H2.conj().T)
        a, b = rng.standard_normal(2)
        lin = apply_map(spec, a * M + b * N) - a * apply_map(spec, M) - b * apply_map(spec, N)
        scale = max(1.0, np.linalg.norm(M), np.linalg.norm(N))
        resid = max(resid, float(np.linalg.norm(lin)) / scale)
    P = map_of_identity(spec)
    I = np.eye(P.shape[0])
    defect = (float(np.linalg.eigvalsh(I - P)[0]), float(np.linalg.eigvalsh(P - I)[0]))
    return MapReport(passes / trials, defect, resid, is_unital(spec), is_subunital(spec))


# -- random generators used by the inequality suite ---------------------------------

MAP_KINDS = ("identity", "compression", "isometry", "vector", "trace", "schur")
UNITAL_KINDS = ("identity", "isometry", "vector", "trace")


def random_map(kind: str, d: int, rng) -> PositiveMapSpec:
    """Random map of the given kind on ``d x d`` inputs.

    ``compression`` is contractive with full column rank (singular values in
    ``[0.3, 1]``); ``isometry`` has ``V*V = I``.
    """
    if kind == "identity":
        return identity_map(d)
    if kind in ("compression", "isometry"):
        k = int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
        Q, _ = np.linalg.qr(G)
        if kind == "compression":
            W, _ = np.linalg.qr(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
            Q = Q @ np.diag(rng.uniform(0.3, 1.0, k)) @ W
        return Compression(Q)
    if kind == "vector":
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return VectorState(x / np.linalg.norm(x))
    if kind == "trace":
        return NormalizedTrace(d)
    if kind == "schur":
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        S = G @ G.conj().T
        dg = np.sqrt(np.diag(S).real)
        S = S / np.outer(dg, dg) * rng.uniform(0.3, 1.0)
        return SchurMultiplier(S)
    raise InputError(f"unknown map kind {kind!r}")
