"""Command-line front end: ``qtheta {list,verify,verify-all,expand,check}``.

Exit codes: 0 when every requested check passes, 1 when at least one report
is ``fail`` or ``error`` (reports are still written), 2 for usage, parse and
evaluation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import catalog, dsl
from .errors import QThetaError, UnknownIdentity

FORMATS = ("text", "json", "csv")
CSV_HEADER = [
    "id",
    "status",
    "checked_order",
    "exponent_num",
    "exponent_den",
    "lhs_a",
    "lhs_b",
    "rhs_a",
    "rhs_b",
    "monomial",
    "wall_time_ms",
]


@dataclass
class RunConfig:
    command: str
    ids: list = field(default_factory=list)
    order: Optional[int] = None
    format: str = "text"
    out: Optional[str] = None
    jobs: Optional[int] = None

    def __post_init__(self):
        if self.order is not None and self.order < 0:
            raise ValueError("order must be >= 0")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


def emit_report(reports, fmt: str = "text") -> str:
    records = [r.to_record() for r in reports]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for rec in records:
            fm = rec["first_mismatch"] or {}
            mono = fm.get("monomial")
            w.writerow([
                rec["id"],
                rec["status"],
                rec["checked_order"],
                fm.get("exponent_num", ""),
                fm.get("exponent_den", ""),
                fm.get("lhs", {}).get("a", ""),
                fm.get("lhs", {}).get("b", ""),
                fm.get("rhs", {}).get("a", ""),
                fm.get("rhs", {}).get("b", ""),
                "" if mono is None else " ".join(map(str, mono)),
                rec["wall_time_ms"],
            ])
        return buf.getvalue()
    rows = []
    for r in reports:
        detail = ""
        m = r.first_mismatch
        if m is not None:
            where = f"q^{m.exponent}" if m.monomial is None else f"{m.monomial} q^{m.exponent}"
            detail = f"first mismatch at {where}: lhs {m.lhs}, rhs {m.rhs}"
        elif r.message:
            detail = r.message
        rows.append((r.id, r.status, str(r.checked_order), f"{r.wall_time_ms:.1f}", detail))
    head = ("id", "status", "order", "ms", "detail")
    widths = [max(len(x[i]) for x in rows + [head]) for i in range(4)]
    lines = []
    for row in [head] + rows:
        cells = [row[i].ljust(widths[i]) for i in range(4)] + [row[4]]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _series_output(s, den: Optional[int], fmt: str) -> str:
    if fmt == "json":
        terms = []
        for line in s.dump(den).splitlines():
            e, a, b = line.split("\t")
            num, d = e.split("/")
            terms.append({"exponent_num": int(num), "exponent_den": int(d), "a": a, "b": b})
        return json.dumps({"order": str(s.order_q), "terms": terms}, indent=2) + "\n"
    if fmt == "csv":
        return "exponent\ta\tb\n" + s.dump(den)
    return s.dump(den)


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtheta", description="Exact q-series identity verifier.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        if order:
            p.add_argument("--order", type=int, help="guarantee order (q-exponent)")
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("list", help="list registered identities")
    common(p, order=False)
    p = sub.add_parser("verify", help="verify identities by id")
    p.add_argument("ids", nargs="+")
    common(p)
    p = sub.add_parser("verify-all", help="verify every registered identity")
    common(p)
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--scale", type=float, help="multiply each default order by this factor")
    p = sub.add_parser("expand", help="expand an expression")
    p.add_argument("expr")
    common(p)
    p.add_argument("--den", type=int, help="exponent denominator used in the dump")
    p = sub.add_parser("check", help="compare two expressions")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    common(p)
    return ap


def _env_order() -> Optional[int]:
    raw = os.environ.get("QTHETA_DEFAULT_ORDER")
    if raw is None or raw.strip() == "":
        return None
    v = int(raw)
    if v < 0:
        raise ValueError("QTHETA_DEFAULT_ORDER must be >= 0")
    return v


def _exit_for(reports) -> int:
    return 0 if all(r.status == "pass" for r in reports) else 1


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _run(args)
    except UnknownIdentity as exc:
        print(f"qtheta: {exc}", file=sys.stderr)
        return 2
    except (QThetaError, ValueError, OSError) as exc:
        print(f"qtheta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    # validates order and format; raises ValueError (exit 2) on bad input
    RunConfig(args.command, getattr(args, "ids", []), getattr(args, "order", None), args.format, args.out,
              getattr(args, "jobs", None))
    if args.command == "list":
        cases = catalog.list_cases()
        if args.format == "json":
            text = json.dumps([c.summary() for c in cases], indent=2) + "\n"
        elif args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["id", "kind", "default_order", "exponent_den", "description"])
            for c in cases:
                w.writerow([c.id, c.kind, c.default_order, c.exponent_den, c.description])
            text = buf.getvalue()
        else:
            width = max(len(c.id) for c in cases)
            text = "".join(f"{c.id.ljust(width)}  {c.kind:10s}  {c.default_order:3d}  {c.description}\n" for c in cases)
        _write(text, args.out)
        return 0
    if args.command == "verify":
        for i in args.ids:
            catalog.get_case(i)  # unknown ids are usage errors before any work
        reports = [catalog.verify(i, args.order) for i in args.ids]
        _write(emit_report(reports, args.format), args.out)
        return _exit_for(reports)
    if args.command == "verify-all":
        if args.jobs is not None and args.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        reports = catalog.verify_all(order_scale=args.scale, jobs=args.jobs, order=args.order)
        _write(emit_report(reports, args.format), args.out)
        return _exit_for(reports)
    order = args.order if args.order is not None else _env_order()
    if order is None:
        order = 10
    if args.command == "expand":
        s = dsl.evaluate(args.expr, order)
        if args.den is not None and args.den <= 0:
            raise ValueError("--den must be positive")
        _write(_series_output(s, args.den, args.format), args.out)
        return 0
    report = dsl.check(args.lhs, args.rhs, order)
    _write(emit_report([report], args.format), args.out)
    return _exit_for([report])


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
