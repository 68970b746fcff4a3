"""Dense Hermitian linear algebra.

Matrices are plain ``numpy.ndarray`` objects; :func:`hermitian` validates and
symmetrizes them. Inverses and square roots all go through :func:`eigh` so
that conditioning problems surface as :class:`SingularError` instead of being
silently regularized.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, InputError, SingularError

DEFAULT_TOL_ABS = 1e-9
DEFAULT_TOL_REL = 1e-9

# relative eigenvalue floor below which inversion is refused
SINGULAR_RTOL = 1e-12
# asymmetry tolerated (relative) before hermitian() refuses to symmetrize
ASYMMETRY_RTOL = 1e-8


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def rebuild(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@dataclass(frozen=True)
class SpectralBounds:
    """Closed interval ``[lower, upper]`` with ``lower > 0``."""

    lower: float
    upper: float
    strict: bool = False

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise InputError("bounds must be finite")
        if lo <= 0:
            raise InputError(f"lower bound must be positive, got {lo}")
        if lo > hi:
            raise InputError(f"lower bound {lo} exceeds upper bound {hi}")
        if self.strict and lo == hi:
            raise InputError("strict bounds require lower < upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


@dataclass(frozen=True)
class OrderCertificate:
    """Numerical verdict on ``X <= Y`` in the Loewner order."""

    min_gap_eig: float
    scale: float
    tol_abs: float
    tol_rel: float
    holds: bool

    @property
    def threshold(self) -> float:
        return self.tol_abs + self.tol_rel * self.scale

    @property
    def numerical_equality(self) -> bool:
        """True when the verdict only passes thanks to the tolerance."""
        return self.holds and self.min_gap_eig < 0


def hermitian(M) -> np.ndarray:
    """Validate ``M`` as a Hermitian matrix and return its symmetrized copy.

    Real input stays real; complex input is returned as ``complex128``.
    Scalars and 1-element sequences are promoted to ``1x1`` matrices.
    """
    M = np.asarray(M)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InputError(f"expected a non-empty square matrix, got shape {M.shape}")
    if np.iscomplexobj(M):
        M = M.astype(np.complex128)
    else:
        M = M.astype(np.float64)
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    H = M.conj().T
    asym = np.linalg.norm(M - H)
    if asym > ASYMMETRY_RTOL * max(1.0, np.linalg.norm(M)):
        raise InputError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    return (M + H) / 2


def eigh(M) -> SpectralDecomposition:
    """Eigendecomposition with eigenvalues in ascending order."""
    M = hermitian(M)
    w, V = np.linalg.eigh(M)
    return SpectralDecomposition(w, V)


_DOMAINS = {
    "real": lambda w: np.ones_like(w, dtype=bool),
    "nonnegative": lambda w: w >= 0,
    "positive": lambda w: w > 0,
}


def fun_calc(M, func: Callable[[np.ndarray], np.ndarray], domain: str = "real") -> np.ndarray:
    """Apply a scalar function through the spectral decomposition of ``M``.

    ``func`` must accept and return arrays. ``domain`` is one of ``"real"``,
    ``"nonnegative"`` or ``"positive"``; a spectrum outside it raises
    :class:`DomainError`.
    """
    w, V = eigh(M)
    if not np.all(_DOMAINS[domain](w)):
        raise DomainError(f"spectrum [{w[0]:.3e}, {w[-1]:.3e}] outside {domain} domain")
    fw = np.asarray(func(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError("function produced non-finite values on the spectrum")
    return hermitian((V * fw) @ V.conj().T)


def _checked_spectrum(M, what: str):
    w, V = eigh(M)
    top = max(abs(w[0]), abs(w[-1]))
    if w[0] <= SINGULAR_RTOL * top or top == 0:
        raise SingularError(f"{what}: smallest eigenvalue {w[0]:.3e} vs largest {w[-1]:.3e}")
    return w, V


def inv(M) -> np.ndarray:
    """Inverse of a strictly positive matrix."""
    w, V = _checked_spectrum(M, "inverse")
    return hermitian((V / w) @ V.conj().T)


def sqrtm(M) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues down to ``-1e-12 * scale`` are clipped to zero.
    """
    w, V = eigh(M)
    top = max(abs(w[0]), abs(w[-1]), 1e-300)
    if w[0] < -SINGULAR_RTOL * top:
        raise DomainError(f"sqrtm: negative eigenvalue {w[0]:.3e}")
    return hermitian((V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T)


def inv_sqrtm(M) -> np.ndarray:
    w, V = _checked_spectrum(M, "inverse square root")
    return hermitian((V / np.sqrt(w)) @ V.conj().T)


def sqrt_pair(M):
    """Return ``(M^{1/2}, M^{-1/2})`` from one eigendecomposition."""
    w, V = _checked_spectrum(M, "inverse square root")
    s = np.sqrt(w)
    Vh = V.conj().T
    return hermitian((V * s) @ Vh), hermitian((V / s) @ Vh)


def spectral_norm(M) -> float:
    w = np.linalg.eigvalsh(hermitian(M))
    return float(max(abs(w[0]), abs(w[-1])))


def spectral_bounds(M) -> tuple[float, float]:
    """Smallest and largest eigenvalue."""
    w = np.linalg.eigvalsh(hermitian(M))
    return float(w[0]), float(w[-1])


def loewner_compare(X, Y, tol_abs: float = DEFAULT_TOL_ABS, tol_rel: float = DEFAULT_TOL_REL) -> OrderCertificate:
    """Certify ``X <= Y``: the smallest eigenvalue of ``Y - X`` is checked
    against ``-(tol_abs + tol_rel * scale)`` where ``scale`` is the larger of
    the two spectral norms."""
    X, Y = hermitian(X), hermitian(Y)
    if X.shape != Y.shape:
        raise InputError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    gap = float(np.linalg.eigvalsh(hermitian(Y - X))[0])
    scale = max(spectral_norm(X), spectral_norm(Y))
    holds = gap >= -(tol_abs + tol_rel * scale)
    return OrderCertificate(gap, scale, float(tol_abs), float(tol_rel), bool(holds))


def random_unitary(d: int, rng, real: bool = False) -> np.ndarray:
    """Haar-distributed unitary (orthogonal if ``real``) via QR with phase fix."""
    if real:
        Z = rng.standard_normal((d, d))
    else:
        Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    phases = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * phases


def random_spectrum(d: int, bounds: SpectralBounds, pin_endpoints: bool, rng) -> np.ndarray:
    w = rng.uniform(bounds.lower, bounds.upper, size=d)
    if pin_endpoints and d >= 2:
        w[0], w[-1] = bounds.lower, bounds.upper
    return np.sort(w)


def random_banded_hermitian(d: int, bounds: SpectralBounds, pin_endpoints: bool = True,
                            seed=None, real: bool = False) -> np.ndarray:
    """Random Hermitian matrix with spectrum inside ``[bounds.lower, bounds.upper]``.

    Eigenvalues are uniform on the interval; with ``pin_endpoints`` (and
    ``d >= 2``) the two extreme eigenvalues equal the bounds exactly. ``seed``
    may be an integer or a ``numpy.random.Generator``.
    """
    if int(d) != d or d < 1:
        raise InputError(f"dimension must be a positive integer, got {d}")
    d = int(d)
    rng = np.random.default_rng(seed)
    w = random_spectrum(d, bounds, pin_endpoints, rng)
    if bounds.lower == bounds.upper:
        return np.eye(d) * bounds.lower if real else np.eye(d, dtype=complex) * bounds.lower
    U = random_unitary(d, rng, real=real)
    return hermitian((U * w) @ U.conj().T)
