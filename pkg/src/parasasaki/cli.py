"""Command-line front end: ``parasasaki check | build | report-diff``.

Exit codes: 0 when every check passes, 1 when a check or construction
fails, 2 for malformed input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import CatalogError, parse_catalog
from .linalg import parse_scalar
from .pipeline import CHECKS, run_pipeline, structure_json
from .serialize import InputError, dumps, loads, parse_instance, raw_from_system
from .symmsys import BothZero, SymmetricSystemError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _rational(text: str):
    try:
        value = parse_scalar(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value == 0:
        raise argparse.ArgumentTypeError("scale must be nonzero")
    return value


def _load(args):
    """(RawInstance, descriptor) from ``--catalog`` or an input file."""
    if args.catalog and args.input:
        raise InputError("give either an input file or --catalog, not both")
    if args.catalog:
        try:
            system = parse_catalog(args.catalog)
        except (CatalogError, BothZero) as exc:
            raise InputError(str(exc)) from exc
        return raw_from_system(system), {"catalog": args.catalog}
    if not args.input:
        raise InputError("no input: give a JSON file or --catalog")
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    raw = parse_instance(loads(text))
    return raw, {"file": path.name, "name": raw.name}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def render_text(data: dict) -> str:
    """Fixed-width table of check results followed by the scalar outputs."""
    lines = []
    inst = ", ".join(f"{k}={v}" for k, v in sorted(data["instance"].items()))
    lines.append(f"instance: {inst}")
    width = max(len(c["id"]) for c in data["checks"])
    for c in data["checks"]:
        detail = ""
        if c["status"] == "fail":
            detail = dumps(c["witness"]).replace("\n", " ").replace("  ", "")
        elif c["note"]:
            detail = c["note"]
        lines.append(f"{c['id']:<{width}}  {c['status']:<7}  {detail}".rstrip())
    s = data["summary"]
    lines.append(f"summary: {s['pass']} pass, {s['fail']} fail, {s['not_run']} not_run")
    for key in ("alpha", "lambda", "mu", "Z", "A", "C_tilde", "dims", "metric_signature"):
        if key in data["outputs"]:
            val = data["outputs"][key]
            if isinstance(val, dict) and "label" in val:
                val = val["label"]
            lines.append(f"{key}: {val}")
    lines.append(f"time: {data['timing']['seconds']} s")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    raw, desc = _load(args)
    rep = run_pipeline(raw, alt_tiebreak=args.alt_tiebreak, scale=args.scale, descriptor=desc)
    data = rep.to_json()
    _emit(dumps(data) if args.emit == "json" else render_text(data), args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_build(args) -> int:
    raw, desc = _load(args)
    rep = run_pipeline(raw, alt_tiebreak=args.alt_tiebreak, scale=args.scale, descriptor=desc)
    st = rep.structure
    if st is None:
        first = next(r for r in rep.ordered if r.status == "fail")
        sys.stderr.write(f"construction failed at {first.check_id}: {first.witness}\n")
        return EXIT_FAIL
    data = structure_json(st)
    if args.emit == "json":
        text = dumps(data)
    else:
        text = "".join(f"{k}: {data[k]}\n" for k in ("name", "basis", "alpha", "lambda", "mu"))
        text += f"Z: {data['Z']['label']}\nC_tilde: {data['C_tilde']['label']}\n"
    _emit(text, args.out)
    return EXIT_OK


def _statuses(path: str) -> dict:
    try:
        data = loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        checks = data["checks"]
        table = {c["id"]: c["status"] for c in checks}
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path} is not a check report") from exc
    if set(table) != set(CHECKS):
        raise InputError(f"{path}: check ids do not match this version's registry")
    return table


def cmd_report_diff(args) -> int:
    a, b = _statuses(args.a), _statuses(args.b)
    lines = [f"{cid}: {a[cid]} -> {b[cid]}" for cid in CHECKS if a[cid] != b[cid]]
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK if not lines else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parasasaki", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_text in (
        ("check", cmd_check, "run the full verification pipeline"),
        ("build", cmd_build, "construct the structure and emit it as JSON"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", help="JSON instance file")
        p.add_argument("--catalog", help="catalog name, e.g. sl_r:2,1 or quad_ext:-1")
        p.add_argument("--emit", choices=("json", "text"), default="text" if name == "check" else "json")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--alt-tiebreak", action="store_true", help="use the alternate admissible C~")
        p.add_argument("--scale", type=_rational, help="rescale the metric on n by this rational")
        p.set_defaults(func=func)
    p = sub.add_parser("report-diff", help="compare check statuses of two JSON reports")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report_diff)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, SymmetricSystemError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
