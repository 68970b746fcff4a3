"""Representing functions and Kubo-Ando operator means.

A mean ``sigma`` is determined by an operator monotone ``f`` on ``(0, inf)``
with ``f(1) = 1``::

    A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from .errors import DomainError, InputError, SingularError, ValidationError
from .linalg import (
    SINGULAR_RTOL,
    SpectralBounds,
    eigh,
    hermitian,
    loewner_compare,
    random_banded_hermitian,
    random_unitary,
)

Submultiplicative = Literal["yes", "no", "unknown"]

# grid used to validate submultiplicativity, monotonicity and concavity
_GRID = np.logspace(-3, 3, 200)


@dataclass(frozen=True)
class RepresentingFunction:
    """Scalar representing function of an operator mean.

    ``eval`` and ``deriv`` are vectorized callables on positive reals.
    ``alpha`` is the weight for the weighted kinds and ``None`` otherwise.
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    deriv: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    alpha: Optional[float] = None
    is_submultiplicative: Submultiplicative = "unknown"
    kind: str = "custom"

    def __call__(self, t):
        return self.eval(t)

    @property
    def is_linear(self) -> bool:
        return self.kind in ("arithmetic", "right-trivial") or (
            self.kind == "geometric" and self.alpha in (0.0, 1.0))

    @property
    def spec(self) -> str:
        """String id understood by :func:`representing_fn`."""
        if self.kind in ("arithmetic", "geometric"):
            return f"{self.kind}:{self.alpha!r}"
        if self.kind == "right-trivial":
            return "right-trivial"
        return f"custom:{self.name}"


def _grid_submultiplicative(f: Callable, margin: float = 1e-12) -> Submultiplicative:
    x = _GRID[:, None]
    y = _GRID[None, :]
    with np.errstate(all="ignore"):
        lhs = np.asarray(f(x * y), dtype=float)
        rhs = np.asarray(f(x), dtype=float) * np.asarray(f(y), dtype=float)
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        return "unknown"
    slack = margin * np.maximum(1.0, np.abs(rhs))
    return "yes" if np.all(lhs <= rhs + slack) else "no"


def validate_representing_fn(rf: RepresentingFunction) -> RepresentingFunction:
    """Check normalization, sampled monotonicity and midpoint concavity."""
    one = float(np.asarray(rf.eval(np.array([1.0])))[0])
    if abs(one - 1.0) > 1e-12:
        raise ValidationError(f"{rf.name}: f(1) = {one!r}, expected 1")
    with np.errstate(all="ignore"):
        vals = np.asarray(rf.eval(_GRID), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValidationError(f"{rf.name}: non-finite values on the validation grid")
    steps = np.diff(vals)
    nonconstant = np.ptp(vals) > 1e-12 * max(1.0, np.abs(vals).max())
    if nonconstant and np.any(steps <= 0):
        raise ValidationError(f"{rf.name}: not strictly increasing on the validation grid")
    s, t = _GRID[:-1], _GRID[1:]
    mid = np.asarray(rf.eval((s + t) / 2), dtype=float)
    if np.any(mid < (vals[:-1] + vals[1:]) / 2 - 1e-10 * np.maximum(1.0, np.abs(mid))):
        raise ValidationError(f"{rf.name}: fails the midpoint concavity test")
    return rf


def _check_alpha(alpha) -> float:
    if alpha is None:
        raise InputError("weighted means need an alpha")
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InputError(f"alpha must lie in [0,1], got {alpha}")
    return alpha


def arithmetic(alpha: float) -> RepresentingFunction:
    a = _check_alpha(alpha)
    return RepresentingFunction(
        name=f"arithmetic({a:g})",
        eval=lambda t: (1.0 - a) + a * np.asarray(t, dtype=float),
        deriv=lambda t: np.full_like(np.asarray(t, dtype=float), a),
        alpha=a, is_submultiplicative="yes" if a in (0.0, 1.0) else "no", kind="arithmetic")


def geometric(alpha: float) -> RepresentingFunction:
    a = _check_alpha(alpha)
    return RepresentingFunction(
        name=f"geometric({a:g})",
        eval=lambda t: np.power(np.asarray(t, dtype=float), a),
        deriv=lambda t: a * np.power(np.asarray(t, dtype=float), a - 1.0),
        alpha=a, is_submultiplicative="yes", kind="geometric")


def right_trivial(alpha=None) -> RepresentingFunction:
    return RepresentingFunction(
        name="right-trivial",
        eval=lambda t: np.asarray(t, dtype=float) * 1.0,
        deriv=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        alpha=None, is_submultiplicative="yes", kind="right-trivial")


BUILTIN_KINDS = ("arithmetic", "geometric", "right-trivial")
_CUSTOM: dict[str, RepresentingFunction] = {}


def register_mean(name: str, f: Callable, deriv: Callable,
                  submultiplicative: Optional[bool] = None) -> RepresentingFunction:
    """Register a user representing function under ``custom:<name>``.

    When ``submultiplicative`` is given it is cross-checked on the grid; a
    declared ``True`` contradicted by the grid raises :class:`ValidationError`.
    """
    grid_flag = _grid_submultiplicative(f)
    if submultiplicative is True and grid_flag == "no":
        raise ValidationError(f"{name}: declared submultiplicative but the grid disagrees")
    flag = {True: "yes", False: "no"}.get(submultiplicative, grid_flag)
    rf = validate_representing_fn(RepresentingFunction(
        name=name, eval=f, deriv=deriv, alpha=None, is_submultiplicative=flag, kind="custom"))
    _CUSTOM[name] = rf
    return rf


def representing_fn(kind: str, alpha: Optional[float] = None) -> RepresentingFunction:
    """Look up a representing function by id.

    ``kind`` is ``"arithmetic"``, ``"geometric"``, ``"right-trivial"`` or
    ``"custom:<name>"``; the weighted kinds also accept ``"geometric:0.25"``.
    """
    if ":" in kind and not kind.startswith("custom:"):
        kind, _, a = kind.partition(":")
        alpha = float(a)
    if kind == "arithmetic":
        return validate_representing_fn(arithmetic(alpha))
    if kind == "geometric":
        return validate_representing_fn(geometric(alpha))
    if kind == "right-trivial":
        return right_trivial()
    if kind.startswith("custom:"):
        try:
            return _CUSTOM[kind[len("custom:"):]]
        except KeyError:
            raise InputError(f"no custom mean registered as {kind!r}") from None
    raise InputError(f"unknown mean kind {kind!r}")


def kubo_ando_mean(A, B, f: RepresentingFunction, eps: float = 0.0) -> np.ndarray:
    """``A sigma B`` for the mean with representing function ``f``.

    ``A`` is regularized to ``A + eps*I`` when ``eps > 0``; otherwise it must be
    strictly positive.
    """
    A, B = hermitian(A), hermitian(B)
    if A.shape != B.shape:
        raise InputError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if eps < 0:
        raise InputError("eps must be non-negative")
    if eps:
        A = A + eps * np.eye(A.shape[0])
    wb = np.linalg.eigvalsh(B)
    if wb[0] < -SINGULAR_RTOL * max(1.0, abs(wb[-1])):
        raise DomainError(f"B has a negative eigenvalue {wb[0]:.3e}")
    wa, Va = eigh(A)
    top = max(abs(wa[0]), abs(wa[-1]))
    if top == 0 or wa[0] <= SINGULAR_RTOL * top:
        raise SingularError("A is not strictly positive; pass eps > 0 to regularize")
    s = np.sqrt(wa)
    Vh = Va.conj().T
    half = (Va * s) @ Vh
    neg_half = (Va / s) @ Vh
    wx, Vx = eigh(neg_half @ B @ neg_half)
    fx = np.asarray(f.eval(np.clip(wx, 0.0, None)), dtype=float)
    inner = (Vx * fx) @ Vx.conj().T
    return hermitian(half @ inner @ half)


def weighted_geometric(A, B, alpha: float) -> np.ndarray:
    return kubo_ando_mean(A, B, geometric(alpha))


def weighted_arithmetic(A, B, alpha: float) -> np.ndarray:
    return (1.0 - alpha) * hermitian(A) + alpha * hermitian(B)


@dataclass
class AxiomReport:
    mean: str
    trials: int
    normalization: int = 0
    transformer: int = 0
    monotonicity: int = 0
    omega_identity: int = 0
    eps_consistency: int = 0
    worst_gap: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(getattr(self, k) == self.trials for k in
                   ("normalization", "transformer", "monotonicity", "omega_identity", "eps_consistency"))


def _psd_increment(d, rng, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitian(scale * (G @ G.conj().T) / d)


def check_mean_axioms(f: RepresentingFunction, dims=(3,), trials: int = 100, seed=0,
                      tol: float = 1e-8) -> AxiomReport:
    """Randomized check of normalization, the transformer inequality,
    joint monotonicity, the weighted-power identity and eps-consistency."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    rep = AxiomReport(mean=f.name, trials=trials)
    worst = np.inf
    for k in range(trials):
        d = int(dims[k % len(dims)])
        box = SpectralBounds(*sorted(rng.uniform(0.2, 5.0, size=2)))
        A = random_banded_hermitian(d, box, True, rng)
        B = random_banded_hermitian(d, box, True, rng)
        I = np.eye(d)

        if np.linalg.norm(kubo_ando_mean(I, I, f) - I) <= tol:
            rep.normalization += 1

        # invertible C with singular values in [0.5, 2]
        C = random_unitary(d, rng) @ np.diag(rng.uniform(0.5, 2.0, d)) @ random_unitary(d, rng)
        lhs = C.conj().T @ kubo_ando_mean(A, B, f) @ C
        rhs = kubo_ando_mean(C.conj().T @ A @ C, C.conj().T @ B @ C, f)
        cert = loewner_compare(lhs, rhs, tol, tol)
        worst = min(worst, cert.min_gap_eig)
        rep.transformer += cert.holds

        A2 = A + _psd_increment(d, rng, rng.uniform(0, 2))
        B2 = B + _psd_increment(d, rng, rng.uniform(0, 2))
        cert = loewner_compare(kubo_ando_mean(A, B, f), kubo_ando_mean(A2, B2, f), tol, tol)
        worst = min(worst, cert.min_gap_eig)
        rep.monotonicity += cert.holds

        w = float(rng.uniform(0.1, 10.0))
        a = float(rng.uniform(0.05, 0.95))
        left = w ** (1 - a) * weighted_geometric(A, B, a)
        right = weighted_geometric(w * A, B, a)
        if np.linalg.norm(left - right) <= 1e-10 * max(1.0, np.linalg.norm(right)):
            rep.omega_identity += 1

        base = kubo_ando_mean(A, B, f)
        errs = [np.linalg.norm(kubo_ando_mean(A, B, f, eps=e) - base) for e in (1e-2, 1e-4, 1e-6)]
        if errs[0] >= errs[1] >= errs[2] or errs[0] <= tol:
            rep.eps_consistency += 1
    rep.worst_gap = float(worst)
    return rep
