"""Registry of operator inequalities.

Each :class:`Case` couples a hypothesis template with a builder that turns a
:class:`~meanscope.suite.CaseInstance` into ``(lhs, rhs, constants)``; the
inequality checked is always ``lhs <= rhs`` in the Loewner order.

Bound patterns:

``box``
    ``b1 <= A <= a1`` and ``b2 <= B <= a2``; ``box = (a1, b1, a2, b2)``.
``relative-sq`` / ``relative``
    ``m^2 A <= B <= M^2 A`` (resp. ``m A <= B <= M A``); ``box = (M, m)``.
``single``
    ``b <= A <= a`` for Hermitian ``A`` (``b`` may be negative); ``box = (a, b)``.
``inverse``
    ``m <= A <= M`` and ``B = A^{-1}``; ``box = (M, m)``.
``four``
    ``b_i <= X_i <= a_i`` for ``X = A, B, C, D``; ``box`` has eight entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import (
    chord_constants,
    derived_constants,
    hadamard_constants,
    variance_bound,
)
from .hadamard import assemble_four_operator
from .linalg import hermitian, inv, inv_sqrtm, sqrt_pair
from .maps import UNITAL_KINDS, apply_map
from .means import geometric, kubo_ando_mean, weighted_geometric

ANY_MAP = ("identity", "compression", "isometry", "vector", "trace", "schur")

# condition number above which an inverted operand is rejected and regenerated
MAX_COND = 1e10


@dataclass(frozen=True)
class Case:
    id: str
    title: str
    statement: str
    source: str
    pattern: str
    maps: Optional[tuple]
    means: str
    build: Callable = None
    needs_omega: bool = False
    flagged: bool = False


CASES: dict[str, Case] = {}


def case(id, title, statement, source, pattern, maps, means, needs_omega=False, flagged=False):
    def register(fn):
        CASES[id] = Case(id, title, statement, source, pattern, maps, means, fn, needs_omega, flagged)
        return fn
    return register


def default_case_ids() -> list[str]:
    """Ids run by ``--case all``: every unflagged case, sorted."""
    return sorted(k for k, c in CASES.items() if not c.flagged)


def _phi(inst, M):
    return apply_map(inst.phi, M) if inst.phi is not None else hermitian(M)


def _chord(inst):
    a1, b1, a2, b2 = inst.box
    return chord_constants(inst.f, a1, b1, a2, b2, inst.alpha)


def _check_cond(M, what):
    w = np.linalg.eigvalsh(hermitian(M))
    if w[0] <= 0 or w[-1] / w[0] > MAX_COND:
        from .errors import HypothesisError
        raise HypothesisError(f"{what} is too ill-conditioned to invert")


def _abs2(X):
    return hermitian(X.conj().T @ X)


# -- two-operator chain ---------------------------------------------------------------

def middle_term(inst, cc):
    """``(omega Phi(A)) nabla_alpha Phi(B)``; shared by both halves of the chain."""
    return (1 - cc.alpha) * cc.omega_eff * _phi(inst, inst.A) + cc.alpha * _phi(inst, inst.B)


@case("main-left", "weighted AM-GM half of the double inequality",
      "w^{1-a} (Phi(A) #_a Phi(B)) <= (w Phi(A)) nabla_a Phi(B)",
      "general double inequality, left half", "box", ANY_MAP, "any-omega", needs_omega=True)
def _main_left(inst):
    cc = _chord(inst)
    lhs = cc.omega ** (1 - cc.alpha) * weighted_geometric(_phi(inst, inst.A), _phi(inst, inst.B), cc.alpha)
    return lhs, middle_term(inst, cc), cc.as_dict()


@case("main-right", "chord half of the double inequality",
      "(w Phi(A)) nabla_a Phi(B) <= (a/mu) Phi(A sigma B)",
      "general double inequality, right half", "box", ANY_MAP, "any")
def _main_right(inst):
    cc = _chord(inst)
    rhs = cc.right_factor * _phi(inst, kubo_ando_mean(inst.A, inst.B, inst.f))
    return middle_term(inst, cc), rhs, cc.as_dict()


@case("chord-premap", "chord inequality before applying the map",
      "a B + (1-a) w A <= (a/mu) A sigma B",
      "operator form of the chord bound", "box", None, "any")
def _chord_premap(inst):
    cc = _chord(inst)
    lhs = cc.alpha * inst.B + (1 - cc.alpha) * cc.omega_eff * inst.A
    return lhs, cc.right_factor * kubo_ando_mean(inst.A, inst.B, inst.f), cc.as_dict()


@case("dm-second", "Diaz-Metcalf inequality, second type",
      "(M2 m2/(M1 m1)) Phi(A) + Phi(B) <= (M2/m1 + m2/M1) Phi(A # B)",
      "Diaz-Metcalf (second type)", "box", ANY_MAP, "geometric-half")
def _dm_second(inst):
    a1, b1, a2, b2 = inst.box
    M1, m1, M2, m2 = map(math.sqrt, (a1, b1, a2, b2))
    lhs = (M2 * m2 / (M1 * m1)) * _phi(inst, inst.A) + _phi(inst, inst.B)
    k = M2 / m1 + m2 / M1
    return lhs, k * _phi(inst, weighted_geometric(inst.A, inst.B, 0.5)), {"ratio_weight": M2 * m2 / (M1 * m1), "factor": k}


@case("dm-first", "Diaz-Metcalf inequality, first type",
      "M m Phi(A) + Phi(B) <= (M + m) Phi(A # B)   for m^2 A <= B <= M^2 A",
      "Diaz-Metcalf (first type)", "relative-sq", ANY_MAP, "geometric-half")
def _dm_first(inst):
    M, m = inst.box
    lhs = M * m * _phi(inst, inst.A) + _phi(inst, inst.B)
    return lhs, (M + m) * _phi(inst, weighted_geometric(inst.A, inst.B, 0.5)), {"M": M, "m": m}


@case("ando-baseline", "Ando's inequality",
      "Phi(A #_a B) <= Phi(A) #_a Phi(B)", "Ando", "box", ANY_MAP, "geometric-alpha")
def _ando(inst):
    lhs = _phi(inst, weighted_geometric(inst.A, inst.B, inst.alpha))
    return lhs, weighted_geometric(_phi(inst, inst.A), _phi(inst, inst.B), inst.alpha), {}


def _rev_ando_lhs(inst, alpha):
    return (weighted_geometric(_phi(inst, inst.A), _phi(inst, inst.B), alpha)
            - _phi(inst, weighted_geometric(inst.A, inst.B, alpha)))


@case("rev-ando-add", "additive reverse of Ando's inequality",
      "Phi(A) #_a Phi(B) - Phi(A #_a B) <= ((1-a)(mu/a)^{a/(a-1)} - nu) Phi(A)",
      "additive reverse Ando", "box", ANY_MAP, "geometric-alpha")
def _rev_ando_add(inst):
    cc = _chord(inst)
    k = derived_constants(cc).rev_ando_add
    return _rev_ando_lhs(inst, cc.alpha), k * _phi(inst, inst.A), {**cc.as_dict(), "rev_ando_add": k}


@case("rev-ando-sym", "additive reverse of Ando's inequality, half weight, norm form",
      "Phi(A) # Phi(B) - Phi(A # B) <= (1/(4 mu) - nu) min{a1, a2} I   for Phi(I) <= I",
      "additive reverse Ando (symmetric form)", "box", ANY_MAP, "geometric-half")
def _rev_ando_sym(inst):
    cc = _chord(inst)
    a1c, a2c = inst.certified["A"][1], inst.certified["B"][1]
    k = (1 / (4 * cc.mu) - cc.nu) * min(a1c, a2c)
    lhs = _rev_ando_lhs(inst, 0.5)
    return lhs, k * np.eye(lhs.shape[0]), {**cc.as_dict(), "constant": k, "a1_cert": a1c, "a2_cert": a2c}


@case("rev-ando-sym-both", "symmetric additive reverse Ando with both orientations",
      "Phi(A) # Phi(B) - Phi(A # B) <= min{(1/(4 mu) - nu) a1, (1/(4 mu') - nu') a2} I,"
      "  (mu', nu') from the swapped box",
      "additive reverse Ando (symmetric form, corrected)", "box", ANY_MAP, "geometric-half", flagged=True)
def _rev_ando_sym_both(inst):
    cc = _chord(inst)
    a1, b1, a2, b2 = inst.box
    sw = chord_constants(inst.f, a2, b2, a1, b1, 0.5)
    a1c, a2c = inst.certified["A"][1], inst.certified["B"][1]
    k = min((1 / (4 * cc.mu) - cc.nu) * a1c, (1 / (4 * sw.mu) - sw.nu) * a2c)
    lhs = _rev_ando_lhs(inst, 0.5)
    return lhs, k * np.eye(lhs.shape[0]), {**cc.as_dict(), "constant": k}


def seo_constant(m, M, alpha):
    """Reverse-Ando constant under ``m A <= B <= M A``."""
    mu = (M ** alpha - m ** alpha) / (M - m)
    nu = (M * m ** alpha - m * M ** alpha) / (M - m)
    return (1 - alpha) * (mu / alpha) ** (alpha / (alpha - 1)) - nu


@case("rev-ando-seo", "reverse Ando inequality under a ratio bound",
      "Phi(A) #_a Phi(B) - Phi(A #_a B) <= [(1-a)((M^a-m^a)/(a(M-m)))^{a/(a-1)} - (M m^a - m M^a)/(M-m)] Phi(A)",
      "Seo's reverse Ando", "relative", ANY_MAP, "geometric-alpha")
def _rev_ando_seo(inst):
    M, m = inst.box
    k = seo_constant(m, M, inst.alpha)
    return _rev_ando_lhs(inst, inst.alpha), k * _phi(inst, inst.A), {"M": M, "m": m, "constant": k}


def _km_lhs(inst, sigma_f):
    P = _phi(inst, kubo_ando_mean(inst.A, inst.B, sigma_f))
    pa = _phi(inst, inst.A)
    _check_cond(P, "Phi(A sigma B)")
    _check_cond(pa, "Phi(A)")
    Ph, Pnh = sqrt_pair(P)
    return Pnh @ _phi(inst, inst.B) @ Pnh - Ph @ inv(pa) @ Ph


@case("km-general", "generalized Shisha-Mond / Kalmkin-McLenaghan inequality",
      "Phi(AsB)^{-1/2} Phi(B) Phi(AsB)^{-1/2} - Phi(AsB)^{1/2} Phi(A)^{-1} Phi(AsB)^{1/2} <= (1/mu - 2 sqrt(nu/mu)) I",
      "generalized Shisha-Mond", "box", ANY_MAP, "any-omega", needs_omega=True)
def _km_general(inst):
    cc = _chord(inst)
    k = derived_constants(cc).shisha
    lhs = _km_lhs(inst, inst.f)
    return lhs, k * np.eye(lhs.shape[0]), {**cc.as_dict(), "shisha": k}


@case("shisha-mond", "operator Shisha-Mond inequality",
      "Phi(A#B)^{-1/2} Phi(B) Phi(A#B)^{-1/2} - Phi(A#B)^{1/2} Phi(A)^{-1} Phi(A#B)^{1/2} <= (sqrt(M) - sqrt(m))^2 I"
      "   for m^2 A <= B <= M^2 A",
      "Shisha-Mond", "relative-sq", ANY_MAP, "geometric-half")
def _shisha_mond(inst):
    M, m = inst.box
    k = (math.sqrt(M) - math.sqrt(m)) ** 2
    lhs = _km_lhs(inst, geometric(0.5))
    return lhs, k * np.eye(lhs.shape[0]), {"M": M, "m": m, "constant": k}


@case("km-two-sided", "Kalmkin-McLenaghan inequality",
      "same left side with sigma = #  <=  (sqrt(M2/m1) - sqrt(m2/M1))^2 I",
      "Kalmkin-McLenaghan", "box", ANY_MAP, "geometric-half")
def _km_two_sided(inst):
    a1, b1, a2, b2 = inst.box
    M1, m1, M2, m2 = map(math.sqrt, (a1, b1, a2, b2))
    k = (math.sqrt(M2 / m1) - math.sqrt(m2 / M1)) ** 2
    lhs = _km_lhs(inst, geometric(0.5))
    return lhs, k * np.eye(lhs.shape[0]), {"constant": k}


# -- variance / Ozeki type --------------------------------------------------------------

@case("variance-lemma", "variance bound for unital maps",
      "Phi(A^2) - Phi(A)^2 <= (a - b)^2/4 I   for b <= A <= a, Phi unital",
      "variance lemma", "single", UNITAL_KINDS, "none")
def _variance(inst):
    a, b = inst.box
    pa = _phi(inst, inst.A)
    lhs = _phi(inst, inst.A @ inst.A) - pa @ pa
    k = variance_bound(b, a)
    return lhs, k * np.eye(lhs.shape[0]), {"a": a, "b": b, "variance_bound": k}


def _oims_lhs(inst):
    S = kubo_ando_mean(inst.A, inst.B, inst.f)
    X = inv_sqrtm(inst.A) @ S
    pa = _phi(inst, inst.A)
    pah, panh = sqrt_pair(pa)
    T = panh @ _phi(inst, S) @ pah
    return pah @ _phi(inst, _abs2(X)) @ pah - _abs2(T)


@case("oims-general", "Ozeki-Izumino-Mori-Seo type inequality",
      "Phi(A)^{1/2} Phi(|A^{-1/2}(AsB)|^2) Phi(A)^{1/2} - |Phi(A)^{-1/2} Phi(AsB) Phi(A)^{1/2}|^2"
      " <= a1^2/4 (f(a2/b1) - f(b2/a1))^2 I   for Phi(I) <= I",
      "Ozeki-Izumino-Mori-Seo (operator form)", "box", ANY_MAP, "any")
def _oims_general(inst):
    cc = _chord(inst)
    k = derived_constants(cc).oims_bound
    lhs = _oims_lhs(inst)
    return lhs, k * np.eye(lhs.shape[0]), {**cc.as_dict(), "oims_bound": k}


@case("oims-vector", "Ozeki-Izumino-Mori-Seo inequality for vector states",
      "<Ax,x><|A^{-1/2}(AsB)|^2 x,x> - <AsB x,x>^2 <= a1^2/4 (f(a2/b1) - f(b2/a1))^2",
      "Ozeki-Izumino-Mori-Seo (vector form)", "box", ("vector",), "any")
def _oims_vector(inst):
    return _oims_general(inst)


@case("oims-geometric", "Ozeki-Izumino-Mori-Seo inequality for the geometric mean",
      "<Ax,x><Bx,x> - <A#B x,x>^2 <= ((sqrt(a1 a2) - sqrt(b1 b2))/2)^2 min{a1/b1, a2/b2}",
      "Izumino-Mori-Seo", "box", ("vector",), "geometric-half")
def _oims_geometric(inst):
    (b1, a1), (b2, a2) = inst.certified["A"], inst.certified["B"]
    k = ((math.sqrt(a1 * a2) - math.sqrt(b1 * b2)) / 2) ** 2 * min(a1 / b1, a2 / b2)
    G = weighted_geometric(inst.A, inst.B, 0.5)
    pg = _phi(inst, G)
    lhs = _phi(inst, inst.A) @ _phi(inst, inst.B) - pg @ pg
    return lhs, k * np.eye(1), {"constant": k}


@case("greub-rheinboldt", "Greub-Rheinboldt type inequality",
      "Phi(A) #_a Phi(A^{-1}) <= a/(mu w^{1-a}) Phi(A sigma A^{-1})   for m <= A <= M",
      "Greub-Rheinboldt", "inverse", ANY_MAP, "any-omega", needs_omega=True)
def _greub(inst):
    cc = _chord(inst)
    k = derived_constants(cc).greub_factor
    lhs = weighted_geometric(_phi(inst, inst.A), _phi(inst, inst.B), cc.alpha)
    return lhs, k * _phi(inst, kubo_ando_mean(inst.A, inst.B, inst.f)), {**cc.as_dict(), "greub_factor": k}


# -- four-operator cases ----------------------------------------------------------------

def _four_operator(id_):
    def build(inst):
        hc = None
        if id_ != "tensor-mean":
            hc = hadamard_constants(inst.f, inst.box, inst.alpha)
        lhs, rhs = assemble_four_operator(id_, inst.A, inst.B, inst.C, inst.D, inst.f, hc)
        return lhs, rhs, ({} if hc is None else hc.as_dict())
    return build


_FOUR = [
    ("tensor-mean", "tensor product bound for submultiplicative f",
     "(A (x) B) sigma (C (x) D) <= (A sigma C) (x) (B sigma D)", "any", False, False),
    ("had-arith", "Hadamard product, arithmetic form",
     "(w (A o B)) nabla_a (C o D) <= (a/mu) ((A s C) o (B s D))", "any", False, False),
    ("had-geo", "Hadamard product, geometric form",
     "w^{1-a} ((A o B) #_a (C o D)) <= (a/mu) ((A s C) o (B s D))", "any", True, False),
    ("had-geo-diff", "Hadamard product, difference form",
     "(A o B) #_a (C o D) - (A s C) o (B s D) <= ((a/mu) w^{a-1} - 1) a1 a2 f(a3 a4/(b1 b2)) I",
     "any", True, False),
    ("had-rev-ando", "Hadamard product, additive reverse Ando",
     "(A o B) #_a (C o D) - (A #_a C) o (B #_a D) <= ((1-a)(mu/a)^{a/(a-1)} - nu) a1 a2 I",
     "geometric-alpha", False, False),
    ("had-shisha", "Hadamard product, Shisha-Mond form",
     "R^{-1/2} (C o D) R^{-1/2} - R^{1/2} (A o B)^{-1} R^{1/2} <= (1/mu - 2 sqrt(nu/mu)) I,  R = (A s C) o (B s D)",
     "any", True, False),
    ("had-ratio", "Hadamard product, ratio reverse",
     "(A o B) sigma (C o D) <= K ((A s C) o (B s D))", "any", False, False),
    ("had-excess", "Hadamard product, difference reverse",
     "(A o B) sigma (C o D) - (A s C) o (B s D) <= -g(t0) (A o B)", "any", False, False),
    ("had-geo-diff-half", "Hadamard difference form, half weight, min constant (literal reading)",
     "(A o B) # (C o D) - (A # C) o (B # D) <= (1/(2 mu sqrt(w)) - 1) min{...} I", "geometric-half", True, True),
    ("had-rev-ando-half", "Hadamard additive reverse Ando, half weight, min constant",
     "(A o B) # (C o D) - (A # C) o (B # D) <= (1/(4 mu) - nu) min{a1 a2, a3 a4} I", "geometric-half", False, True),
]

for _id, _title, _stmt, _means, _omega, _flag in _FOUR:
    case(_id, _title, _stmt, "tensor / Hadamard products", "four", None,
         "submultiplicative" if _means == "any" else _means,
         needs_omega=_omega, flagged=_flag)(_four_operator(_id))
