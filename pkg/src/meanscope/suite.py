"""Randomized instance generation, certification and reporting."""
from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cases import CASES, Case, default_case_ids
from .constants import check_alpha, chord
from .errors import HypothesisError, InputError, MeanscopeError
from .linalg import (
    DEFAULT_TOL_ABS,
    DEFAULT_TOL_REL,
    OrderCertificate,
    SpectralBounds,
    hermitian,
    inv,
    inv_sqrtm,
    loewner_compare,
    random_spectrum,
    random_unitary,
    spectral_bounds,
    spectral_norm,
    sqrtm,
)
from .maps import MAP_KINDS, VectorState, is_subunital, is_unital, random_map
from .means import RepresentingFunction, geometric, representing_fn
from .serialize import encode_matrix, map_to_dict

DEFAULT_MEANS = ("arithmetic", "geometric", "right-trivial")
DEFAULT_ALPHAS = (0.25, 0.5, 0.75)
STRUCTURES = (None, "commuting", "witness")
MAX_ATTEMPTS = 25
MAX_DUMPS = 10
BOUND_SLACK = 1e-10


@dataclass(frozen=True)
class TrialChoices:
    """Pools the suite samples means, weights and maps from."""

    means: tuple = DEFAULT_MEANS
    alphas: tuple = DEFAULT_ALPHAS
    maps: tuple = MAP_KINDS

    def __post_init__(self):
        for a in self.alphas:
            check_alpha(a)
        for k in self.maps:
            if k not in MAP_KINDS:
                raise InputError(f"unknown map kind {k!r}")
        for m in self.means:
            representing_fn(m, 0.5)


@dataclass
class CaseInstance:
    case: str
    dim: int
    A: np.ndarray
    B: np.ndarray
    C: Optional[np.ndarray] = None
    D: Optional[np.ndarray] = None
    phi: object = None
    map_kind: Optional[str] = None
    f: Optional[RepresentingFunction] = None
    alpha: float = 0.5
    box: tuple = ()
    certified: dict = field(default_factory=dict)
    seed: Optional[int] = None
    trial: int = 0
    attempt: int = 0
    structure: Optional[str] = None

    @property
    def fingerprint(self) -> dict:
        return {"case": self.case, "seed": self.seed, "dim": self.dim, "trial": self.trial,
                "attempt": self.attempt, "structure": self.structure}

    def dump(self) -> dict:
        out = {"fingerprint": self.fingerprint, "mean": None if self.f is None else self.f.spec,
               "alpha": self.alpha, "box": list(self.box), "map": map_to_dict(self.phi),
               "certified": {k: list(v) for k, v in self.certified.items()}}
        for name in "ABCD":
            M = getattr(self, name)
            if M is not None:
                out[name] = encode_matrix(M)
        return out


@dataclass
class Certificate:
    case: str
    order: OrderCertificate
    lhs_norm: float
    rhs_norm: float
    constants: dict
    fingerprint: dict
    lhs: np.ndarray = field(repr=False, default=None)
    rhs: np.ndarray = field(repr=False, default=None)

    @property
    def holds(self) -> bool:
        return self.order.holds

    @property
    def relative_gap(self) -> float:
        return self.order.min_gap_eig / max(self.order.scale, 1e-300)


def get_case(case_id: str) -> Case:
    try:
        return CASES[case_id]
    except KeyError:
        raise InputError(f"unknown case {case_id!r}") from None


def case_key(case_id: str) -> int:
    return zlib.crc32(case_id.encode())


def trial_rng(seed: int, case_id: str, dim: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), case_key(case_id), int(dim), int(trial)])


# -- sampling ---------------------------------------------------------------------------

def _loguniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _draw_pair(rng):
    b = _loguniform(rng, 0.25, 4.0)
    return b * _loguniform(rng, 1.2, 10.0), b


def draw_box(pattern: str, rng) -> tuple:
    """Random bound configuration for a hypothesis pattern."""
    if pattern in ("box",):
        return (*_draw_pair(rng), *_draw_pair(rng))
    if pattern == "four":
        return tuple(x for _ in range(4) for x in _draw_pair(rng))
    if pattern == "relative-sq":
        m = _loguniform(rng, 0.3, 2.0)
        return (m * _loguniform(rng, 1.1, 4.0), m)
    if pattern in ("relative", "inverse"):
        return _draw_pair(rng)
    if pattern == "single":
        b = float(rng.uniform(-3.0, 3.0))
        return (b + _loguniform(rng, 0.2, 5.0), b)
    raise InputError(f"unknown pattern {pattern!r}")


def _check_box(pattern, box):
    box = tuple(float(x) for x in box)
    sizes = {"box": 4, "four": 8, "relative-sq": 2, "relative": 2, "inverse": 2, "single": 2}
    if len(box) != sizes[pattern]:
        raise InputError(f"{pattern} bounds need {sizes[pattern]} numbers, got {len(box)}")
    pairs = list(zip(box[::2], box[1::2]))
    for a, b in pairs:
        if pattern != "single" and b <= 0:
            raise InputError(f"lower bound {b} must be positive")
        if pattern in ("relative-sq", "relative") and not b < a:
            raise InputError(f"need m < M, got m={b}, M={a}")
        if b > a:
            raise InputError(f"lower bound {b} exceeds upper bound {a}")
    if pattern == "box" and box[0] == box[1] and box[2] == box[3]:
        raise InputError("at most one of the two bound pairs may be degenerate")
    return box


def _pick_mean(case: Case, choices: TrialChoices, rng):
    alpha = float(rng.choice(choices.alphas))
    kind = case.means
    if kind == "none":
        return None, alpha
    if kind == "geometric-half":
        return geometric(0.5), 0.5
    if kind == "geometric-alpha":
        return geometric(alpha), alpha
    pool = []
    for m in choices.means:
        f0 = representing_fn(m, 0.5)
        if kind == "any-omega" and f0.kind == "right-trivial":
            continue
        if kind == "submultiplicative" and f0.is_submultiplicative != "yes":
            continue
        pool.append(m)
    if not pool:
        raise InputError(f"no configured mean satisfies the hypotheses of {case.id}")
    m = pool[int(rng.integers(len(pool)))]
    # one weight drives both the mean and the inequality
    return representing_fn(m, alpha), alpha


def _banded(d, lo, hi, rng, U, pin):
    w = random_spectrum(d, SpectralBounds(lo, hi), pin, rng)
    if U is None:
        U = random_unitary(d, rng)
    return hermitian((U * w) @ U.conj().T)


def generate_instance(case_id: str, dim: int, bound_config=None, map_kind: Optional[str] = None,
                      f: Optional[RepresentingFunction] = None, alpha: Optional[float] = None,
                      seed=None, choices: Optional[TrialChoices] = None,
                      structure: Optional[str] = None, pin_endpoints: bool = True) -> CaseInstance:
    """Random hypothesis-respecting instance of a case.

    Anything left as ``None`` is sampled from ``choices`` with ``seed`` (an
    integer or a ``Generator``). ``structure`` is ``"commuting"`` (shared
    eigenbasis) or ``"witness"`` (shared eigenbasis, and vector states balanced
    on the extreme eigenvectors).
    """
    case = get_case(case_id)
    if int(dim) != dim or dim < 1:
        raise InputError(f"dimension must be a positive integer, got {dim}")
    if structure not in STRUCTURES:
        raise InputError(f"unknown structure {structure!r}")
    d = int(dim)
    rng = np.random.default_rng(seed)
    choices = choices or TrialChoices()

    g, a = _pick_mean(case, choices, rng)
    f = f if f is not None else g
    alpha = check_alpha(alpha if alpha is not None else a)
    if case.means == "geometric-half":
        alpha = 0.5
    box = _check_box(case.pattern, bound_config if bound_config is not None else draw_box(case.pattern, rng))

    U = random_unitary(d, rng) if structure else None
    pin = pin_endpoints or structure == "witness"
    C = D = None
    if case.pattern == "box":
        a1, b1, a2, b2 = box
        A = _banded(d, b1, a1, rng, U, pin)
        B = _banded(d, b2, a2, rng, U, pin)
    elif case.pattern == "four":
        A, B, C, D = (_banded(d, box[2 * i + 1], box[2 * i], rng, U, pin) for i in range(4))
    elif case.pattern in ("relative-sq", "relative"):
        M, m = box
        lo, hi = (m * m, M * M) if case.pattern == "relative-sq" else (m, M)
        A = _banded(d, *_draw_pair(rng)[::-1], rng, U, pin)
        Cm = _banded(d, lo, hi, rng, U, pin)
        Ah = sqrtm(A)
        B = hermitian(Ah @ Cm @ Ah)
    elif case.pattern == "inverse":
        M, m = box
        A = _banded(d, m, M, rng, U, pin)
        B = inv(A)
    elif case.pattern == "single":
        a_, b_ = box
        A = _banded(d, 1.0, 1.0 + (a_ - b_), rng, U, pin) + (b_ - 1.0) * np.eye(d)
        B = A
    else:
        raise AssertionError(case.pattern)

    phi, kind = None, None
    if case.maps is not None:
        if map_kind is None:
            pool = [k for k in choices.maps if k in case.maps]
            if not pool:
                raise InputError(f"no configured map satisfies the hypotheses of {case.id}")
            map_kind = pool[int(rng.integers(len(pool)))]
        elif map_kind not in case.maps:
            raise HypothesisError(f"{case.id} does not admit {map_kind!r} maps")
        kind = map_kind
        phi = random_map(kind, d, rng)
        if structure == "witness" and kind == "vector" and d >= 2:
            V = U if U is not None else np.linalg.eigh(A)[1]
            phi = VectorState((V[:, 0] + V[:, -1]) / math.sqrt(2))

    inst = CaseInstance(case=case.id, dim=d, A=A, B=B, C=C, D=D, phi=phi, map_kind=kind, f=f,
                        alpha=alpha, box=box, structure=structure)
    certify_instance(inst)
    return inst


def make_instance(case_id: str, A, B, C=None, D=None, *, box, phi=None, f=None, alpha=0.5,
                  map_kind=None) -> CaseInstance:
    """Wrap hand-built matrices as a certified instance."""
    case = get_case(case_id)
    A, B = hermitian(A), hermitian(B)
    C = None if C is None else hermitian(C)
    D = None if D is None else hermitian(D)
    if f is None and case.means in ("geometric-half", "geometric-alpha"):
        f = geometric(0.5 if case.means == "geometric-half" else alpha)
    inst = CaseInstance(case=case.id, dim=A.shape[0], A=A, B=B, C=C, D=D, phi=phi,
                        map_kind=map_kind, f=f, alpha=check_alpha(alpha),
                        box=_check_box(case.pattern, box))
    certify_instance(inst)
    return inst


# -- hypothesis certification -------------------------------------------------------------

def _within(ext, lo, hi, name):
    slack = BOUND_SLACK * max(1.0, abs(lo), abs(hi))
    if ext[0] < lo - slack or ext[1] > hi + slack:
        raise HypothesisError(f"spectrum of {name} [{ext[0]:.6g}, {ext[1]:.6g}] outside [{lo:.6g}, {hi:.6g}]")


def certify_instance(inst: CaseInstance) -> CaseInstance:
    """Measure the spectra actually present and check them, the map and the
    mean against the case's hypothesis template. Fills ``inst.certified``."""
    case = get_case(inst.case)
    box = inst.box
    cert = {}
    if case.pattern == "box":
        a1, b1, a2, b2 = box
        cert["A"], cert["B"] = spectral_bounds(inst.A), spectral_bounds(inst.B)
        _within(cert["A"], b1, a1, "A")
        _within(cert["B"], b2, a2, "B")
    elif case.pattern == "four":
        for i, name in enumerate("ABCD"):
            M = getattr(inst, name)
            if M is None:
                raise HypothesisError(f"{case.id} needs four operators")
            cert[name] = spectral_bounds(M)
            _within(cert[name], box[2 * i + 1], box[2 * i], name)
    elif case.pattern in ("relative-sq", "relative"):
        M, m = box
        lo, hi = (m * m, M * M) if case.pattern == "relative-sq" else (m, M)
        cert["A"], cert["B"] = spectral_bounds(inst.A), spectral_bounds(inst.B)
        if cert["A"][0] <= 0:
            raise HypothesisError("A must be strictly positive")
        S = inv_sqrtm(inst.A)
        cert["ratio"] = spectral_bounds(S @ inst.B @ S)
        _within(cert["ratio"], lo, hi, "A^{-1/2} B A^{-1/2}")
    elif case.pattern == "inverse":
        M, m = box
        cert["A"] = spectral_bounds(inst.A)
        _within(cert["A"], m, M, "A")
        if np.linalg.norm(inst.A @ inst.B - np.eye(inst.dim)) > 1e-9 * max(1.0, M / m):
            raise HypothesisError("B must be the inverse of A")
        cert["B"] = spectral_bounds(inst.B)
    elif case.pattern == "single":
        a, b = box
        cert["A"] = spectral_bounds(inst.A)
        _within(cert["A"], b, a, "A")

    if case.maps is None:
        if inst.phi is not None:
            raise HypothesisError(f"{case.id} takes no positive map")
    else:
        if inst.phi is None:
            raise HypothesisError(f"{case.id} needs a positive map")
        if inst.map_kind is not None and inst.map_kind not in case.maps:
            raise HypothesisError(f"{case.id} does not admit {inst.map_kind!r} maps")
        if case.maps == ("vector",) and not isinstance(inst.phi, VectorState):
            raise HypothesisError(f"{case.id} needs a vector state")
        if set(case.maps) <= {"identity", "isometry", "vector", "trace"} and not is_unital(inst.phi):
            raise HypothesisError(f"{case.id} needs a unital map")
        if not is_subunital(inst.phi):
            raise HypothesisError(f"{case.id} needs Phi(I) <= I")

    f = inst.f
    if case.means != "none" and f is None:
        raise HypothesisError(f"{case.id} needs a representing function")
    if case.means == "geometric-half" and not (f.kind == "geometric" and f.alpha == 0.5 and inst.alpha == 0.5):
        raise HypothesisError(f"{case.id} is stated for the geometric mean with weight 1/2")
    if case.means == "geometric-alpha" and not (f.kind == "geometric" and f.alpha == inst.alpha):
        raise HypothesisError(f"{case.id} needs sigma = #_alpha")
    if case.means == "submultiplicative" and f.is_submultiplicative != "yes":
        raise HypothesisError(f"{case.id} needs a submultiplicative representing function")
    if case.needs_omega:
        if case.pattern == "box":
            a1, b1, a2, b2 = box
        elif case.pattern == "inverse":
            a1, b1, a2, b2 = box[0], box[1], 1 / box[1], 1 / box[0]
        else:
            a1, b1, a2, b2 = box[0] * box[2], box[1] * box[3], box[4] * box[6], box[5] * box[7]
        _, nu = chord(f, b2 / a1, a2 / b1)
        if nu <= 1e-14:
            raise HypothesisError(f"{case.id} needs omega > 0 (chord intercept {nu:.3e})")
    inst.certified = cert
    return inst


# -- running ------------------------------------------------------------------------------

def run_case(case_id: str, inst: CaseInstance, tol=(DEFAULT_TOL_ABS, DEFAULT_TOL_REL)) -> Certificate:
    """Assemble both sides exactly as stated and certify ``lhs <= rhs``."""
    case = get_case(case_id)
    if inst.case != case.id:
        raise HypothesisError(f"instance was generated for {inst.case}, not {case.id}")
    certify_instance(inst)
    view = inst
    if case.pattern == "inverse":
        view = _InverseView(inst)
    lhs, rhs, consts = case.build(view)
    order = loewner_compare(lhs, rhs, *tol)
    return Certificate(case.id, order, spectral_norm(lhs), spectral_norm(rhs), consts,
                       inst.fingerprint, lhs, rhs)


class _InverseView:
    """Presents an ``m <= A <= M``, ``B = A^{-1}`` instance with the four-bound box
    ``(M, m, 1/m, 1/M)`` expected by the chord constants."""

    def __init__(self, inst):
        self._inst = inst
        M, m = inst.box
        self.box = (M, m, 1 / m, 1 / M)

    def __getattr__(self, name):
        return getattr(self._inst, name)


def fixed_bounds_for(case_id: str, bounds):
    """``bounds`` if its length fits the case's pattern (4 for two-operator
    boxes, 8 for four-operator boxes), else ``None``."""
    if bounds is None:
        return None
    pattern = get_case(case_id).pattern
    if (pattern, len(bounds)) in (("box", 4), ("four", 8)):
        return tuple(bounds)
    return None


def _trial(case_id, dim, trial, seed, tol, choices, bounds=None):
    rng = trial_rng(seed, case_id, dim, trial)
    box = fixed_bounds_for(case_id, bounds)
    last = None
    for attempt in range(MAX_ATTEMPTS):
        try:
            inst = generate_instance(case_id, dim, bound_config=box, seed=rng, choices=choices)
            inst.seed, inst.trial, inst.attempt = int(seed), int(trial), attempt
            return inst, run_case(case_id, inst, tol)
        except HypothesisError as exc:
            last = exc
    raise HypothesisError(f"{case_id}: no admissible instance after {MAX_ATTEMPTS} attempts ({last})")


def regenerate(fingerprint: dict, choices: Optional[TrialChoices] = None,
               tol=(DEFAULT_TOL_ABS, DEFAULT_TOL_REL), bounds=None):
    """Rebuild an instance and its certificate from a suite fingerprint."""
    return _trial(fingerprint["case"], fingerprint["dim"], fingerprint["trial"], fingerprint["seed"],
                  tol, choices or TrialChoices(), bounds)


def _run_block(args):
    case_id, dim, trials, seed, tol, choices, bounds = args
    out = []
    for t in range(trials):
        try:
            inst, cert = _trial(case_id, dim, t, seed, tol, choices, bounds)
        except MeanscopeError as exc:
            out.append({"trial": t, "dim": dim, "error": str(exc)})
            continue
        rec = {"trial": t, "dim": dim, "holds": cert.holds,
               "equality": cert.order.numerical_equality,
               "min_gap_eig": cert.order.min_gap_eig, "scale": cert.order.scale,
               "fingerprint": cert.fingerprint}
        if not cert.holds:
            rec["dump"] = {**inst.dump(), "constants": cert.constants,
                           "lhs": encode_matrix(cert.lhs), "rhs": encode_matrix(cert.rhs)}
        out.append(rec)
    return case_id, dim, out


def run_suite(cases="all", dims=(1, 2, 3, 5, 8), trials: int = 200, seed: int = 0,
              tol=(DEFAULT_TOL_ABS, DEFAULT_TOL_REL), choices: Optional[TrialChoices] = None,
              jobs: int = 1, bounds=None) -> dict:
    """Run every (case, dim, trial) and fold the results into per-case records.

    The result is deterministic in ``seed`` and independent of ``jobs``.
    ``bounds`` fixes the box of every case whose pattern it fits (see
    :func:`fixed_bounds_for`); other cases keep sampling theirs.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    case_ids = resolve_cases(cases)
    choices = choices or TrialChoices()
    bounds = None if bounds is None else tuple(float(b) for b in bounds)
    blocks = [(c, int(d), int(trials), int(seed), tuple(tol), choices, bounds)
              for c in case_ids for d in dims]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_block, blocks))
    else:
        results = [_run_block(b) for b in blocks]

    by_case = {c: [] for c in case_ids}
    for case_id, dim, recs in results:
        by_case[case_id].extend(recs)
    records = []
    for case_id in sorted(by_case):
        recs = sorted(by_case[case_id], key=lambda r: (r["dim"], r["trial"]))
        records.append(_fold(case_id, recs))
    total_fail = sum(r["failures"] + r["errors"] for r in records)
    return {"cases": records,
            "summary": {"cases": len(records), "trials": sum(r["trials"] for r in records),
                        "failures": sum(r["failures"] for r in records),
                        "errors": sum(r["errors"] for r in records),
                        "numerical_equalities": sum(r["numerical_equalities"] for r in records),
                        "passed": total_fail == 0}}


def _fold(case_id, recs):
    ok = [r for r in recs if "error" not in r]
    errors = [r for r in recs if "error" in r]
    fails = [r for r in ok if not r["holds"]]
    worst = min(ok, key=lambda r: r["min_gap_eig"], default=None)
    worst_rel = min((r["min_gap_eig"] / max(r["scale"], 1e-300) for r in ok), default=None)
    return {"case": case_id, "trials": len(recs),
            "passes": sum(r["holds"] for r in ok),
            "numerical_equalities": sum(r["equality"] for r in ok),
            "failures": len(fails), "errors": len(errors),
            "worst_min_gap_eig": None if worst is None else worst["min_gap_eig"],
            "worst_relative_gap": worst_rel,
            "worst_fingerprint": None if worst is None else worst["fingerprint"],
            "failure_dumps": [r["dump"] for r in fails[:MAX_DUMPS]],
            "error_messages": sorted({r["error"] for r in errors})[:MAX_DUMPS]}


def resolve_cases(cases) -> list[str]:
    if cases == "all" or cases == ["all"] or cases == ("all",):
        return default_case_ids()
    if isinstance(cases, str):
        cases = [c.strip() for c in cases.split(",") if c.strip()]
    out = []
    for c in cases:
        if c == "all":
            out.extend(default_case_ids())
        else:
            out.append(get_case(c).id)
    return sorted(set(out))


def sharpness_scan(case_id: str, dims=(2,), budget: int = 300, seed: int = 0,
                   choices: Optional[TrialChoices] = None, top: int = 5,
                   structures=STRUCTURES, tol=(DEFAULT_TOL_ABS, DEFAULT_TOL_REL)) -> dict:
    """Look for near-equality instances by random sampling with pinned
    endpoints, cycling through the given ``structures``.

    Returns the ``top`` holding instances with the smallest relative gap and,
    separately, any violations (which are never reported as sharp).
    """
    case = get_case(case_id)
    if budget < 1:
        raise InputError("budget must be >= 1")
    choices = choices or TrialChoices()
    rng = np.random.default_rng([int(seed), case_key(case.id), 0x5A])
    held, violations = [], []
    for k in range(budget):
        dim = int(dims[k % len(dims)])
        structure = structures[k % len(structures)]
        try:
            inst = generate_instance(case.id, dim, seed=rng, choices=choices, structure=structure)
            inst.seed, inst.trial = int(seed), k
            cert = run_case(case.id, inst, tol)
        except HypothesisError:
            continue
        rec = {"relative_gap": cert.relative_gap, "min_gap_eig": cert.order.min_gap_eig,
               "scale": cert.order.scale, "fingerprint": cert.fingerprint,
               "mean": None if inst.f is None else inst.f.spec, "alpha": inst.alpha,
               "map": inst.map_kind, "box": list(inst.box)}
        (held if cert.holds else violations).append(rec)
    held.sort(key=lambda r: (r["relative_gap"], r["fingerprint"]["trial"]))
    return {"case": case.id, "budget": budget, "evaluated": len(held) + len(violations),
            "records": held[:top], "violations": violations[:MAX_DUMPS],
            "violation_count": len(violations)}
