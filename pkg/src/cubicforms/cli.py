"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 for usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cubicmap import (
    MapFormatError,
    coeff_tensor,
    compose_left,
    compose_right,
    parse_cubic_map,
    parse_matrix,
)
from .invariants import (
    Z_VARS,
    all_forms,
    discrepancy_report,
    format_report,
    g_determinants,
    report_json,
)
from .transforms import run_suite, theorem43_check

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_map(path: str):
    try:
        return parse_cubic_map(_read(path))
    except MapFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_matrix(path: str):
    try:
        return parse_matrix(_read(path))
    except MapFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _component_label(form, idx) -> str:
    return "".join(str(Z_VARS.index(form.variables[k]) + 1) for k in idx)


def _form_payload(q, form) -> dict:
    return {
        "q": q,
        "variables": list(form.variables),
        "polynomial": str(form.to_poly()),
        "components": {
            _component_label(form, idx): str(c) for idx, c in form.components.items() if c
        },
    }


def cmd_invariants(args, out) -> int:
    f = _load_map(args.map)
    F = coeff_tensor(f)
    G = g_determinants(F)
    forms = all_forms(F, args.form)
    payload = {
        "map": {"y1": str(f.y1), "y2": str(f.y2)},
        "determinants": {f"G{label}": str(v) for label, v in G.as_dict().items()},
        "construction": args.form,
        "forms": [_form_payload(q, forms[q]) for q in range(1, 7)],
    }
    if args.json:
        out.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    out.write(f"y1 = {f.y1}\ny2 = {f.y2}\n\n")
    for name, v in payload["determinants"].items():
        out.write(f"{name} = {v}\n")
    out.write(f"\nquartic forms (construction: {args.form})\n")
    for item in payload["forms"]:
        out.write(f"omega[{item['q']}]({', '.join(item['variables'])}) = {item['polynomial']}\n")
        for label, c in item["components"].items():
            out.write(f"  Omega[{item['q']}]_{label} = {c}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.random == bool(args.map):
        raise UsageError("verify takes either a map file or --random")
    base = coeff_tensor(_load_map(args.map)) if args.map else None
    rows = run_suite(args.trials, args.seed, base=base, construction=args.form)
    ok = all(r.passed for r in rows)
    if args.json:
        out.write(json.dumps([r.as_json() for r in rows], indent=2) + "\n")
    else:
        for r in rows:
            status = "pass" if r.passed else "FAIL"
            line = f"{r.law} trial={r.trial} seed={r.seed} {status}"
            if r.residual:
                line += " residual " + ", ".join(f"{k}={v}" for k, v in r.residual.items())
            out.write(line + "\n")
        failed = sum(not r.passed for r in rows)
        out.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_compose(args, out) -> int:
    f = _load_map(args.map)
    phi = _load_matrix(args.matrix)
    if args.left:
        if not phi.linear.is_invertible():
            raise UsageError("matrix is singular; left composition needs its inverse")
        g = compose_left(f, phi)
    else:
        g = compose_right(f, phi)
    out.write(g.to_text())
    return EXIT_OK


def cmd_check_thm43(args, out) -> int:
    f = _load_map(args.map)
    phi = _load_matrix(args.matrix)
    rows = theorem43_check(coeff_tensor(f), phi.linear, args.form)
    ok = all(r.equal for r in rows)
    if args.json:
        data = [
            {"determinant": f"G{r.label}", "lhs": str(r.lhs), "rhs": str(r.rhs), "equal": r.equal}
            for r in rows
        ]
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(f"{'determinant':<12}{'lhs':>12}{'rhs':>12}  equal\n")
        for r in rows:
            out.write(f"{'G' + r.label:<12}{str(r.lhs):>12}{str(r.rhs):>12}  {'yes' if r.equal else 'NO'}\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_discrepancies(args, out) -> int:
    rows = discrepancy_report()
    out.write(report_json(rows) if args.json else format_report(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicforms",
        description="Determinants and quartic forms of cubic maps of the plane, in exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_form(p):
        p.add_argument(
            "--form",
            choices=("derived", "printed"),
            default="derived",
            help="quartic form construction (default: derived)",
        )

    p = sub.add_parser("invariants", help="print the six determinants and six quartic forms")
    p.add_argument("map")
    p.add_argument("--json", action="store_true")
    add_form(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", help="run every transformation-law check on random trials")
    p.add_argument("map", nargs="?")
    p.add_argument("--random", action="store_true", help="draw a random coefficient tensor per trial")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    add_form(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compose", help="compose a map with an affine map and print the result")
    p.add_argument("map")
    p.add_argument("matrix")
    side = p.add_mutually_exclusive_group(required=True)
    side.add_argument("--left", action="store_true", help="phi^-1 o f")
    side.add_argument("--right", action="store_true", help="f o phi")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser(
        "check-thm43", help="determinants of f o phi against det T times the forms of f"
    )
    p.add_argument("map")
    p.add_argument("matrix")
    p.add_argument("--json", action="store_true")
    add_form(p)
    p.set_defaults(func=cmd_check_thm43)

    p = sub.add_parser("discrepancies", help="symbolic comparison of the three form constructions")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_discrepancies)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"cubicforms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry():
    sys.exit(main())
