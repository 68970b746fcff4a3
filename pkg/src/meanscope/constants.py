"""Closed-form constants of the operator-mean inequalities.

Everything here is scalar: the chord of a concave representing function
across a ratio interval ``[u, v]`` and the constants derived from it.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateBoundsError, DegenerateSlopeError, HypothesisError, InputError
from .means import RepresentingFunction

GRID_POINTS = 10_000


def _f(f: RepresentingFunction, t: float) -> float:
    return float(np.asarray(f.eval(np.array([t], dtype=float)))[0])


def _df(f: RepresentingFunction, t: float) -> float:
    return float(np.asarray(f.deriv(np.array([t], dtype=float)))[0])


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0,1), got {alpha}")
    return alpha


def chord(f: RepresentingFunction, u: float, v: float) -> tuple[float, float]:
    """Slope and intercept of the secant of ``f`` through ``u`` and ``v``."""
    fu, fv = _f(f, u), _f(f, v)
    mu = (fv - fu) / (v - u)
    nu = (v * fu - u * fv) / (v - u)
    return mu, nu


def bounds_form_mu(f, a1, b1, a2, b2) -> float:
    """Slope written in terms of the four bounds rather than the interval."""
    return a1 * b1 * (_f(f, b2 / a1) - _f(f, a2 / b1)) / (b1 * b2 - a1 * a2)


def bounds_form_nu(f, a1, b1, a2, b2) -> float:
    return (a1 * a2 * _f(f, b2 / a1) - b1 * b2 * _f(f, a2 / b1)) / (a1 * a2 - b1 * b2)


def chord_gap_on_grid(f: RepresentingFunction, u: float, v: float, mu: float, nu: float,
                      points: int = GRID_POINTS) -> np.ndarray:
    t = np.linspace(u, v, points)
    return np.asarray(f.eval(t), dtype=float) - (mu * t + nu)


@dataclass(frozen=True)
class ChordConstants:
    mu: float
    nu: float
    omega: Optional[float]
    alpha: float
    bounds: tuple[float, float, float, float]
    u: float
    v: float
    f: RepresentingFunction
    omega_undefined: bool = False
    chord_min_gap: float = 0.0

    @property
    def interval(self):
        return self.u, self.v

    @property
    def omega_eff(self) -> float:
        """Weight entering the arithmetic-mean side; 0 when omega is undefined."""
        return 0.0 if self.omega is None else self.omega

    @property
    def right_factor(self) -> float:
        return self.alpha / self.mu

    def as_dict(self) -> dict:
        a1, b1, a2, b2 = self.bounds
        return {"mean": self.f.spec, "alpha": self.alpha,
                "bounds": {"a1": a1, "b1": b1, "a2": a2, "b2": b2},
                "u": self.u, "v": self.v, "mu": self.mu, "nu": self.nu,
                "omega": self.omega, "omega_undefined": self.omega_undefined,
                "alpha_over_mu": self.right_factor, "chord_min_gap": self.chord_min_gap}


def chord_constants(f: RepresentingFunction, a1, b1, a2, b2, alpha) -> ChordConstants:
    """Slope ``mu``, intercept ``nu`` and weight ``omega`` for ``b1 <= A <= a1``,
    ``b2 <= B <= a2``.

    One of the two bound pairs may be degenerate; both at once collapse the
    ratio interval ``[b2/a1, a2/b1]`` and raise :class:`DegenerateBoundsError`.
    """
    alpha = check_alpha(alpha)
    a1, b1, a2, b2 = map(float, (a1, b1, a2, b2))
    if min(a1, b1, a2, b2) <= 0:
        raise InputError("bounds must be positive")
    if b1 > a1 or b2 > a2:
        raise InputError("each lower bound must not exceed its upper bound")
    u, v = b2 / a1, a2 / b1
    if not v > u * (1 + 1e-12):
        raise DegenerateBoundsError(f"ratio interval [{u}, {v}] is a point")
    mu, nu = chord(f, u, v)
    if mu <= 1e-14:
        raise DegenerateSlopeError(f"chord slope {mu:.3e} is not positive")
    undefined = nu <= 1e-14
    if undefined:
        nu = max(nu, 0.0) if abs(nu) <= 1e-14 else nu
    omega = None if undefined else alpha * nu / ((1 - alpha) * mu)
    gap = chord_gap_on_grid(f, u, v, mu, nu)
    return ChordConstants(mu=mu, nu=nu, omega=omega, alpha=alpha, bounds=(a1, b1, a2, b2),
                          u=u, v=v, f=f, omega_undefined=undefined, chord_min_gap=float(gap.min()))


def rev_ando_constant(mu: float, nu: float, alpha: float) -> float:
    """``(1-alpha)(mu/alpha)^{alpha/(alpha-1)} - nu``."""
    return (1 - alpha) * (mu / alpha) ** (alpha / (alpha - 1)) - nu


def variance_bound(lower: float, upper: float) -> float:
    return (upper - lower) ** 2 / 4


def shisha_constant(mu: float, nu: float) -> float:
    """``1/mu - 2 sqrt(nu/mu)``: the half-weight constant of the difference bound."""
    return 1 / mu - 2 * math.sqrt(nu / mu)


def greub_rheinboldt_classical(m: float, M: float) -> float:
    return (M + m) ** 2 / (4 * m * M)


@dataclass(frozen=True)
class DerivedConstants:
    rev_ando_add: float
    shisha: Optional[float]
    variance_bound: float
    oims_bound: float
    greub_factor: Optional[float]
    shisha_undefined: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def derived_constants(cc: ChordConstants) -> DerivedConstants:
    """Constants of the corollaries, built from one :class:`ChordConstants`.

    ``shisha`` always uses the half-weight ratio ``nu/mu`` (equal to ``omega``
    at ``alpha = 1/2``). ``variance_bound`` is taken over ``[f(u), f(v)]``, the
    range fed to the variance lemma in the Ozeki-type bound.
    """
    a1 = cc.bounds[0]
    fu, fv = _f(cc.f, cc.u), _f(cc.f, cc.v)
    var = variance_bound(fu, fv)
    shisha = None if cc.omega_undefined else shisha_constant(cc.mu, cc.nu)
    greub = None if cc.omega_undefined else cc.alpha / (cc.mu * cc.omega ** (1 - cc.alpha))
    return DerivedConstants(rev_ando_add=rev_ando_constant(cc.mu, cc.nu, cc.alpha),
                            shisha=shisha, variance_bound=var, oims_bound=a1 ** 2 * var,
                            greub_factor=greub, shisha_undefined=shisha is None)


# -- scalar optimization -----------------------------------------------------------

_INVPHI = (math.sqrt(5) - 1) / 2


def golden_max(obj, lo: float, hi: float, scan: int = 1024, iters: int = 50) -> float:
    """Maximize a unimodal ``obj`` on ``[lo, hi]``: coarse scan, then golden section."""
    t = np.linspace(lo, hi, scan)
    vals = np.array([obj(x) for x in t])
    k = int(np.argmax(vals))
    a, b = t[max(k - 1, 0)], t[min(k + 1, scan - 1)]
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = obj(c), obj(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = obj(d)
    return (a + b) / 2 if abs(b - a) > 0 else a


def _refine_root(g, guess: float, lo: float, hi: float) -> float:
    """Polish a stationary point by bracketing the root of its first-order condition."""
    width = max(1e-6 * max(1.0, abs(guess)), 1e-12)
    a, b = max(lo, guess - width), min(hi, guess + width)
    for _ in range(60):
        ga, gb = g(a), g(b)
        if ga == 0:
            return a
        if gb == 0:
            return b
        if np.sign(ga) != np.sign(gb):
            return brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        if a == lo and b == hi:
            break
        width *= 4
        a, b = max(lo, guess - width), min(hi, guess + width)
    return guess


@dataclass(frozen=True)
class HadamardChordConstants:
    u: float
    v: float
    mu: float
    nu: float
    omega: Optional[float]
    c: float
    t0: float
    K: float
    g_at_t0: float
    alpha: float
    bounds: tuple
    f: RepresentingFunction
    omega_undefined: bool = False

    @property
    def omega_ratio(self) -> float:
        return 1.0 / self.K

    @property
    def omega_half(self) -> Optional[float]:
        """``nu/mu``, the weight of the half-weight difference clause."""
        return None if self.omega_undefined else self.nu / self.mu

    @property
    def rev_ando_add(self) -> float:
        return rev_ando_constant(self.mu, self.nu, self.alpha)

    @property
    def shisha(self) -> Optional[float]:
        return None if self.omega_undefined else shisha_constant(self.mu, self.nu)

    @property
    def geo_factor(self) -> Optional[float]:
        """``(alpha/mu) omega^{alpha-1}``: ratio bound of the weighted geometric clause."""
        if self.omega_undefined:
            return None
        return self.alpha / self.mu * self.omega ** (self.alpha - 1)

    def as_dict(self) -> dict:
        names = ("a1", "b1", "a2", "b2", "a3", "b3", "a4", "b4")
        return {"mean": self.f.spec, "alpha": self.alpha,
                "bounds": dict(zip(names, self.bounds)),
                "u": self.u, "v": self.v, "mu": self.mu, "nu": self.nu,
                "omega": self.omega, "omega_undefined": self.omega_undefined,
                "c": self.c, "t0": self.t0,
                "K": self.K, "omega_ratio": self.omega_ratio, "g_at_t0": self.g_at_t0,
                "minus_g_at_t0": -self.g_at_t0, "rev_ando_add": self.rev_ando_add,
                "shisha": self.shisha, "geo_factor": self.geo_factor}


def hadamard_constants(f: RepresentingFunction, bounds, alpha, override: bool = False) -> HadamardChordConstants:
    """Constants for four operators ``b_i <= X_i <= a_i``, bounds given as
    ``(a1, b1, a2, b2, a3, b3, a4, b4)``.

    The ratio interval is ``[b3 b4/(a1 a2), a3 a4/(b1 b2)]``. ``c`` maximizes
    ``f(t)/(mu t + nu)`` and ``t0`` maximizes ``f(t) - mu t - nu`` on it;
    ``K = f(c)/(mu c + nu)`` and ``g_at_t0 = mu t0 + nu - f(t0) <= 0``.
    """
    alpha = check_alpha(alpha)
    if f.is_submultiplicative != "yes" and not override:
        raise HypothesisError(f"{f.name} is not known to be submultiplicative")
    if len(bounds) != 8:
        raise InputError("expected 8 bounds (a1, b1, a2, b2, a3, b3, a4, b4)")
    a1, b1, a2, b2, a3, b3, a4, b4 = map(float, bounds)
    for a, b in ((a1, b1), (a2, b2), (a3, b3), (a4, b4)):
        if b <= 0:
            raise InputError("bounds must be positive")
        if not b < a:
            raise DegenerateBoundsError(f"need b < a for every pair, got b={b}, a={a}")
    u = b3 * b4 / (a1 * a2)
    v = a3 * a4 / (b1 * b2)
    if not v > u * (1 + 1e-6):
        raise DegenerateBoundsError(f"ratio interval [{u}, {v}] is numerically a point")
    cc = chord_constants(f, a1 * a2, b1 * b2, a3 * a4, b3 * b4, alpha)
    mu, nu = cc.mu, cc.nu

    def ratio(t):
        return _f(f, t) / (mu * t + nu)

    def excess(t):
        return _f(f, t) - mu * t - nu

    c = golden_max(ratio, u, v)
    c = _refine_root(lambda t: _df(f, t) * (mu * t + nu) - mu * _f(f, t), c, u, v)
    t0 = golden_max(excess, u, v)
    t0 = _refine_root(lambda t: _df(f, t) - mu, t0, u, v)
    K = ratio(c)
    g0 = -excess(t0)
    return HadamardChordConstants(u=u, v=v, mu=mu, nu=nu, omega=cc.omega,
                                  c=c, t0=t0, K=K, g_at_t0=g0, alpha=alpha,
                                  bounds=(a1, b1, a2, b2, a3, b3, a4, b4), f=f,
                                  omega_undefined=cc.omega_undefined)


def certify_hadamard_constants(hc: HadamardChordConstants, points: int = GRID_POINTS,
                               tol: float = 1e-9) -> dict:
    """Grid certificates ``f <= K (mu t + nu)`` and ``f - mu t - nu <= -g(t0)``."""
    t = np.linspace(hc.u, hc.v, points)
    ft = np.asarray(hc.f.eval(t), dtype=float)
    line = hc.mu * t + hc.nu
    ratio_ok = bool(np.all(ft <= hc.K * line * (1 + tol)))
    excess_ok = bool(np.max(ft - line) <= -hc.g_at_t0 + tol)
    df_c = _df(hc.f, hc.c)
    return {"ratio": ratio_ok, "excess": excess_ok,
            "K_vs_derivative": abs(hc.K - df_c / hc.mu),
            "grid_max_ratio": float(np.max(ft / line)),
            "grid_max_excess": float(np.max(ft - line))}
