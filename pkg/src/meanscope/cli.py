"""Command-line front end.

Exit codes: 0 success, 1 an inequality failed (or the report held
non-finite values), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import __version__
from .cases import CASES
from .constants import certify_hadamard_constants, chord_constants, derived_constants, hadamard_constants
from .errors import MeanscopeError
from .linalg import DEFAULT_TOL_ABS, DEFAULT_TOL_REL
from .maps import MAP_KINDS
from .means import representing_fn
from .serialize import scrub_nonfinite
from .suite import DEFAULT_ALPHAS, DEFAULT_MEANS, TrialChoices, resolve_cases, run_suite, sharpness_scan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(MeanscopeError, ValueError):
    """Configuration problem; the message names the offending field."""


def _default_seed() -> int:
    raw = os.environ.get("MEANSCOPE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"seed: MEANSCOPE_SEED={raw!r} is not an integer") from None


@dataclass
class RunConfig:
    cases: list = field(default_factory=lambda: ["all"])
    dims: list = field(default_factory=lambda: [1, 2, 3, 5, 8])
    trials: int = 200
    seed: int = 0
    tol_abs: float = DEFAULT_TOL_ABS
    tol_rel: float = DEFAULT_TOL_REL
    means: list = field(default_factory=lambda: list(DEFAULT_MEANS))
    alphas: list = field(default_factory=lambda: list(DEFAULT_ALPHAS))
    maps: list = field(default_factory=lambda: list(MAP_KINDS))
    bounds: Optional[list] = None
    report_path: str = "meanscope-report.json"
    jobs: int = 1

    def validate(self) -> "RunConfig":
        def bad(name, msg):
            raise ConfigError(f"{name}: {msg}")

        try:
            resolve_cases(self.cases)
        except MeanscopeError as exc:
            bad("cases", exc)
        if not self.dims or any(int(d) != d or d < 1 for d in self.dims):
            bad("dims", "dimensions must be positive integers")
        if self.trials < 1:
            bad("trials", "must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            bad("seed", "must be an unsigned 64-bit integer")
        if self.tol_abs < 0 or self.tol_rel < 0:
            bad("tol_abs" if self.tol_abs < 0 else "tol_rel", "must be non-negative")
        if not self.alphas:
            bad("alpha", "at least one value is required")
        for a in self.alphas:
            if not 0 < a < 1:
                bad("alpha", "alpha must lie in (0,1)")
        for m in self.means:
            try:
                representing_fn(m, 0.5)
            except MeanscopeError as exc:
                bad("mean", exc)
        for k in self.maps:
            if k not in MAP_KINDS:
                bad("map", f"unknown map kind {k!r} (choose from {', '.join(MAP_KINDS)})")
        if self.bounds is not None:
            if len(self.bounds) not in (4, 8) or any(b <= 0 for b in self.bounds):
                bad("bounds", "need 4 or 8 positive numbers")
        if self.jobs < 1:
            bad("jobs", "must be >= 1")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown configuration field")
        try:
            cfg = cls(**data)
            cfg.dims = [int(d) for d in cfg.dims]
            cfg.trials, cfg.seed, cfg.jobs = int(cfg.trials), int(cfg.seed), int(cfg.jobs)
            cfg.tol_abs, cfg.tol_rel = float(cfg.tol_abs), float(cfg.tol_rel)
            cfg.alphas = [float(a) for a in cfg.alphas]
            cfg.cases, cfg.means, cfg.maps = list(cfg.cases), list(cfg.means), list(cfg.maps)
            if cfg.bounds is not None:
                cfg.bounds = [float(b) for b in cfg.bounds]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config: {exc}") from None
        return cfg


def _csv(kind):
    def parse(text):
        try:
            return [kind(x.strip()) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}") from None
    return parse


def build_hash() -> str:
    """SHA-256 over the package sources, in sorted path order."""
    h = hashlib.sha256()
    root = Path(__file__).parent
    for p in sorted(root.glob("*.py")):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()[:16]


def report_body(report: dict) -> str:
    """Canonical JSON of a report without its wall-clock fields."""
    body = {k: v for k, v in report.items() if k != "duration"}
    return json.dumps(body, sort_keys=True, allow_nan=False)


# -- subcommands -------------------------------------------------------------------

_FLAG_FIELDS = {"case": "cases", "dim": "dims", "trials": "trials", "seed": "seed",
                "tol_abs": "tol_abs", "tol_rel": "tol_rel", "mean": "means", "alpha": "alphas",
                "map": "maps", "bounds": "bounds", "report": "report_path", "jobs": "jobs"}


def config_from_args(args) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    data = RunConfig(seed=_default_seed()).to_dict()
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from None
        data.update(loaded.get("config", loaded))
    for flag, name in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[name] = value
    return RunConfig.from_dict(data).validate()


def _print_table(report, out):
    print(f"{'case':24s} {'trials':>6s} {'pass':>6s} {'eq':>5s} {'fail':>5s} {'err':>4s}  worst_min_gap", file=out)
    for r in report["cases"]:
        worst = r["worst_min_gap_eig"]
        worst = f"{worst: .3e}" if isinstance(worst, float) else ("n/a" if worst is None else worst)
        print(f"{r['case']:24s} {r['trials']:6d} {r['passes']:6d} {r['numerical_equalities']:5d} "
              f"{r['failures']:5d} {r['errors']:4d}  {worst}", file=out)
    s = report["summary"]
    print(f"total: {s['trials']} trials, {s['failures']} failures, {s['errors']} errors, "
          f"{s['numerical_equalities']} numerical equalities -> {'PASS' if s['passed'] else 'FAIL'}", file=out)


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    cfg = config_from_args(args)
    start = time.perf_counter()
    result = run_suite(cfg.cases, cfg.dims, cfg.trials, cfg.seed, (cfg.tol_abs, cfg.tol_rel),
                       TrialChoices(tuple(cfg.means), tuple(cfg.alphas), tuple(cfg.maps)),
                       jobs=cfg.jobs, bounds=cfg.bounds)
    report = {"config": cfg.to_dict(), **result,
              "environment": {"version": __version__, "build_hash": build_hash()},
              "duration": round(time.perf_counter() - start, 3)}
    report, nonfinite = scrub_nonfinite(report)
    if nonfinite:
        report["summary"]["passed"] = False
        report["summary"]["nonfinite"] = True
    Path(cfg.report_path).write_text(json.dumps(report, sort_keys=True, indent=1) + "\n")
    _print_table(report, out)
    print(f"report: {cfg.report_path}", file=out)
    return EXIT_OK if report["summary"]["passed"] else EXIT_FAIL


def constants_payload(mean: str, alpha: float, bounds) -> dict:
    f = representing_fn(mean, alpha)
    if len(bounds) == 4:
        cc = chord_constants(f, *bounds, alpha)
        return {**cc.as_dict(), **derived_constants(cc).as_dict()}
    if len(bounds) == 8:
        hc = hadamard_constants(f, bounds, alpha)
        return {**hc.as_dict(), "certificates": certify_hadamard_constants(hc)}
    raise ConfigError("bounds: need 4 (a1,b1,a2,b2) or 8 (a1,b1,...,a4,b4) numbers")


def cmd_constants(args, out=None) -> int:
    out = out or sys.stdout
    if not 0 < args.alpha < 1:
        raise ConfigError("alpha: alpha must lie in (0,1)")
    payload, _ = scrub_nonfinite(constants_payload(args.mean, args.alpha, args.bounds))
    print(json.dumps(payload, indent=1), file=out)
    return EXIT_OK


def cmd_sharpness(args, out=None) -> int:
    out = out or sys.stdout
    if args.case not in CASES:
        raise ConfigError(f"case: unknown case {args.case!r}")
    for a in args.alpha:
        if not 0 < a < 1:
            raise ConfigError("alpha: alpha must lie in (0,1)")
    structures = ("commuting",) if args.commuting else (None, "commuting", "witness")
    choices = TrialChoices(tuple(args.mean), tuple(args.alpha), tuple(args.map))
    seed = args.seed if args.seed is not None else _default_seed()
    res = sharpness_scan(args.case, tuple(args.dim), args.budget, seed, choices, args.top, structures)
    res, _ = scrub_nonfinite(res)
    print(json.dumps(res, indent=1), file=out)
    return EXIT_FAIL if res["violation_count"] else EXIT_OK


def cmd_case_list(args, out=None) -> int:
    out = out or sys.stdout
    rows = [{"id": c.id, "title": c.title, "source": c.source, "statement": c.statement,
             "pattern": c.pattern, "maps": list(c.maps) if c.maps else None, "means": c.means,
             "in_all": not c.flagged} for c in sorted(CASES.values(), key=lambda c: c.id)]
    if args.json:
        print(json.dumps(rows, indent=1), file=out)
    else:
        for r in rows:
            tag = "" if r["in_all"] else "  [flagged: run by name only]"
            print(f"{r['id']:24s} {r['source']}{tag}\n{'':24s} {r['statement']}", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="meanscope", description="Certify operator-mean inequalities on random instances.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the inequality suite")
    v.add_argument("--case", type=_csv(str), help="comma-separated case ids or 'all'")
    v.add_argument("--dim", type=_csv(int), help="comma-separated dimensions")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol-abs", dest="tol_abs", type=float)
    v.add_argument("--tol-rel", dest="tol_rel", type=float)
    v.add_argument("--mean", type=_csv(str), help="mean kinds to sample from")
    v.add_argument("--alpha", type=_csv(float), help="weights to sample from, each in (0,1)")
    v.add_argument("--map", type=_csv(str), help=f"map kinds to sample from ({', '.join(MAP_KINDS)})")
    v.add_argument("--bounds", type=_csv(float), help="fixed box: a1,b1,a2,b2 or eight values")
    v.add_argument("--report", help="where to write the JSON report")
    v.add_argument("--jobs", type=int)
    v.add_argument("--config", help="JSON config file (same schema as a report's config)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="print the constants for given bounds as JSON")
    c.add_argument("--mean", default="geometric")
    c.add_argument("--alpha", type=float, default=0.5)
    c.add_argument("--bounds", type=_csv(float), required=True)
    c.set_defaults(func=cmd_constants)

    s = sub.add_parser("sharpness", help="search for near-equality instances")
    s.add_argument("--case", required=True)
    s.add_argument("--budget", type=int, default=300)
    s.add_argument("--dim", type=_csv(int), default=[2])
    s.add_argument("--seed", type=int)
    s.add_argument("--top", type=int, default=5)
    s.add_argument("--mean", type=_csv(str), default=list(DEFAULT_MEANS))
    s.add_argument("--alpha", type=_csv(float), default=list(DEFAULT_ALPHAS))
    s.add_argument("--map", type=_csv(str), default=list(MAP_KINDS))
    s.add_argument("--commuting", action="store_true", help="only commuting instances")
    s.set_defaults(func=cmd_sharpness)

    l = sub.add_parser("case-list", help="list registered inequalities")
    l.add_argument("--json", action="store_true")
    l.set_defaults(func=cmd_case_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MeanscopeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
