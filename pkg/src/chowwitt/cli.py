"""Command-line front end: ``chowwitt compute|compare|kunneth|oracle|regress``."""

from __future__ import annotations

import argparse
import difflib
import json
import os
import re
import sys
from pathlib import Path

from .errors import ChowWittError
from .fields import FieldModel
from .graded import twist_str
from .spaces import (DEFAULT_BOUND, build_space, kunneth_verdict, parse_space,
                     regression_cases, render_table)

GOLDEN_ENV = "CHOWWITT_GOLDEN_DIR"
REGRESS_BOUND = 4
THEORIES = ("CW", "hI", "CH", "Ch")


def golden_dir() -> Path:
    env = os.environ.get(GOLDEN_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "tests" / "golden"


def golden_name(space: str, field: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "_", space).strip("_")
    return f"{slug}__{field}.txt"


def _twist_arg(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    if text in ("-", ""):
        return ()
    if not re.fullmatch(r"[01]+", text):
        raise argparse.ArgumentTypeError(f"twist must be a bit string like 01, got {text!r}")
    return tuple(int(c) for c in text)


def _bound(args, space_text: str) -> int | None:
    if args.max_deg is not None:
        return args.max_deg
    # P(q) x P(r) defaults to its dimension, everything else to the default bound
    atoms = parse_space(space_text).atoms
    if all(a.kind == "P" for a in atoms):
        return None
    return DEFAULT_BOUND


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def compute_report(space, theory: str, twist_filter=None, checks: bool = True) -> dict:
    rows = space.rows(theory, twist_filter)
    out = {
        "space": str(space.expr),
        "field": space.field.name,
        "bound": space.bound,
        "bidegrees": [{
            "degree": r.degree,
            "twist": twist_str(r.twist),
            "invariant_factors": list(r.invariant_factors),
            "free_rank": r.free_rank,
            "rho_image_index": r.rho_image_index,
            "generators": r.generators,
        } for r in rows],
        "checks": [],
    }
    if checks:
        out["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail}
                         for c in space.stack.run_checks()]
    return out


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    space = build_space(args.space, FieldModel.parse(args.field), _bound(args, args.space))
    report = compute_report(space, args.theory, args.twist, checks=not args.no_checks)
    text = render_table(space, args.theory, args.twist)
    text += "".join(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}"
                    f"{': ' + c['detail'] if c['detail'] else ''}\n" for c in report["checks"])
    _emit(args, text, report)
    return 0 if all(c["passed"] for c in report["checks"]) else 1


def cmd_compare(args) -> int:
    space = build_space(args.space, FieldModel.parse(args.field), _bound(args, args.space))
    cmp = space.compare_to_catalog(args.theory, literal=args.literal)
    payload = {
        "space": str(space.expr), "field": space.field.name, "bound": space.bound,
        "theory": args.theory, "verdict": cmp.verdict,
        "bidegrees": [{"degree": r.degree, "twist": twist_str(r.twist), "source": r.source,
                       "target": r.target, "verdict": r.verdict, "kernel": list(r.kernel)}
                      for r in cmp.rows],
    }
    _emit(args, cmp.table() + "\n", payload)
    return 0 if cmp.verdict == "iso" else 1


def cmd_kunneth(args) -> int:
    field = FieldModel.parse(args.field)
    bound = args.max_deg if args.max_deg is not None else DEFAULT_BOUND
    kv = kunneth_verdict(args.space, field, bound)
    cmp = kv.comparison
    payload = {
        "space": str(kv.expr), "field": field.name, "bound": bound,
        "verdict": cmp.verdict, "injective": cmp.injective, "surjective": cmp.surjective,
        "flag": kv.flag,
        "bidegrees": [{"degree": r.degree, "twist": twist_str(r.twist), "source": r.source,
                       "target": r.target, "verdict": r.verdict, "kernel": list(r.kernel)}
                      for r in cmp.rows],
    }
    text = cmp.table() + "\n"
    if kv.flag:
        text += f"flag: {kv.flag}\n"
    _emit(args, text, payload)
    return 0


def cmd_oracle(args) -> int:
    from .oracle import cycle_class_sweep
    field = FieldModel.parse(args.field)
    if field.kind != "R":
        raise ChowWittError("the oracle compares with real points; use --field R")
    space = build_space(args.space, field, _bound(args, args.space))
    rows = cycle_class_sweep(space, extra=args.extra, twist_filter=args.twist)
    payload = {
        "space": str(space.expr), "field": field.name, "bound": space.bound,
        "results": [{"degree": r.degree, "twist": twist_str(r.twist), "j": r.j,
                     "status": r.status, "derived": r.derived, "oracle": r.oracle,
                     "agree": r.agree, "reason": r.reason} for r in rows],
    }
    _emit(args, "".join(r.line() + "\n" for r in rows), payload)
    return 1 if any(r.status == "MISMATCH" for r in rows) else 0


def regress_text(space: str, field: str, bound: int = REGRESS_BOUND) -> str:
    b = None if all(a.kind == "P" for a in parse_space(space).atoms) else bound
    sp = build_space(space, FieldModel.parse(field), b)
    return render_table(sp, "CW")


def cmd_regress(args) -> int:
    root = Path(args.dir) if args.dir else golden_dir()
    failures = 0
    if args.update:
        root.mkdir(parents=True, exist_ok=True)
    for space, field in regression_cases():
        path = root / golden_name(space, field)
        text = regress_text(space, field)
        if args.update:
            path.write_text(text)
            print(f"wrote {path.name}")
            continue
        if not path.exists():
            print(f"MISSING {path.name}")
            failures += 1
            continue
        want = path.read_text()
        if want == text:
            print(f"ok {path.name}")
        else:
            failures += 1
            print(f"DIFF {path.name}")
            sys.stdout.writelines(difflib.unified_diff(
                want.splitlines(True), text.splitlines(True), "golden", "computed"))
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowwitt",
                                description="Chow-Witt rings of classifying spaces and products")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theory: bool = True):
        sp.add_argument("space", help='space expression, e.g. "BGm x Bmu(4)"')
        sp.add_argument("--field", default="R", help="C, R or Fq such as F3, F5 (default R)")
        sp.add_argument("--max-deg", type=int, default=None,
                        help=f"degree bound (default {DEFAULT_BOUND}; dim for P(q) x P(r))")
        sp.add_argument("--twist", type=_twist_arg, default=None,
                        help="only this twist, as a bit string over the twisted sides")
        sp.add_argument("--format", choices=("table", "json"), default="table")
        if theory:
            sp.add_argument("--theory", choices=THEORIES, default="CW")

    c = sub.add_parser("compute", help="per-bidegree groups, generators and rho-indices")
    common(c)
    c.add_argument("--no-checks", action="store_true", help="skip the structural checks")
    c.set_defaults(func=cmd_compute)

    c = sub.add_parser("compare", help="derived groups against the closed-form presentation")
    common(c)
    c.add_argument("--literal", action="store_true", help="use the presentation as printed")
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("kunneth", help="Kunneth map verdict for a two-factor space")
    common(c, theory=False)
    c.set_defaults(func=cmd_kunneth)

    c = sub.add_parser("oracle", help="real cycle class comparison with real points")
    common(c, theory=False)
    c.add_argument("--extra", type=int, default=2, help="check j = i .. i + EXTRA")
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("regress", help="compare against the golden tables")
    c.add_argument("--dir", default=None, help=f"golden directory (default ${GOLDEN_ENV})")
    c.add_argument("--update", action="store_true", help="rewrite the golden files")
    c.set_defaults(func=cmd_regress)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChowWittError as exc:
        where = getattr(args, "space", None)
        prefix = f"{args.command} {where!r}: " if where else f"{args.command}: "
        print(f"error: {prefix}{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
