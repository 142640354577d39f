"""Command-line front end: check suites, compute limits, verify
isomorphisms, and emit machine-readable reports.

Exit code 0 means no failing law (skips allowed); 1 means failures; 2 means
the document or the invocation itself was rejected.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .dsl import DslError, elaborate, parse
from .duality import DualityError
from .families import COVARIANT, FamilyError
from .limits import (
    LimitError,
    cofinal_direct_iso,
    cofinal_inverse_iso,
    direct_limit,
    inverse_limit,
)
from .order import OrderError
from .report import Report, emit_report
from .runner import ConfigError, RunConfig, run_suite
from .setoid import SetoidError
from .spectra import SpectrumError
from .topology import TopologyError

# content-level rejections: the document parsed but its structures are invalid
KERNEL_ERRORS = (SetoidError, OrderError, FamilyError, TopologyError,
                 SpectrumError, LimitError, DualityError)


def _add_common(p):
    p.add_argument("file", help="document to load")
    p.add_argument("--thread-bound", type=int, default=10_000)
    p.add_argument("--cert-depth", type=int, default=4)
    p.add_argument("--uniq-bound", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="PATH",
                   help="also write the report as JSON to PATH ('-' for stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bspec",
        description="verify finite spectra: limits, cofinality, duality")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run a suite of checks")
    _add_common(p_check)
    p_check.add_argument("--suite", help="suite block to run (default: all)")

    p_limit = sub.add_parser("limit", help="compute a limit and export it")
    _add_common(p_limit)
    group = p_limit.add_mutually_exclusive_group(required=True)
    group.add_argument("--direct", metavar="SPECTRUM")
    group.add_argument("--inverse", metavar="SPECTRUM")

    p_iso = sub.add_parser("iso", help="verify a cofinality or duality isomorphism")
    _add_common(p_iso)
    group = p_iso.add_mutually_exclusive_group(required=True)
    group.add_argument("--cofinal", metavar="COFINAL")
    group.add_argument("--duality", metavar="POOL")
    p_iso.add_argument("--spectrum", help="spectrum name (with --cofinal)")

    p_report = sub.add_parser("report", help="run a suite and write JSON")
    _add_common(p_report)
    p_report.add_argument("--suite", help="suite block to run (default: all)")
    return parser


def _config(args):
    return RunConfig(args.thread_bound, args.cert_depth, args.uniq_bound,
                     args.seed)


def _emit(report, args):
    color = os.environ.get("BSPEC_COLOR", "") not in ("", "0", "never")
    text = emit_report(report, "human", color=color)
    sys.stdout.write(text)
    if args.json:
        payload = emit_report(report, "json")
        if args.json == "-":
            sys.stdout.write(payload)
        else:
            Path(args.json).write_text(payload, encoding="utf-8")
    return 1 if report.failed else 0


def _load(args):
    text = Path(args.file).read_text(encoding="utf-8")
    return parse(text)


def cmd_check(args):
    doc = _load(args)
    report = run_suite(doc, args.suite, _config(args))
    return _emit(report, args)


def limit_export_text(name, lim, inverse=False):
    lines = [f"limit-export {name} {{"]
    if inverse:
        lines.append(f"  choices: {lim.class_count()}")
        for n, tok in enumerate(lim.carrier.elements):
            parts = ", ".join(
                f"{i} => {x}" for i, x in lim.assignments[tok].items())
            lines.append(f"  choice c{n}: {parts}")
    else:
        lines.append(f"  classes: {lim.class_count()}")
        for n, cls in enumerate(lim.carrier.classes()):
            i, x = lim.canonical(cls[0])
            lines.append(f"  class c{n}: {i} @ {x}")
            lines.append(f"  members c{n}: " + ", ".join(cls))
    for k, g in enumerate(lim.space.gens):
        name_k = lim.space.subbase.names[k]
        parts = []
        for n, cls in enumerate(lim.carrier.classes()):
            parts.append(f"c{n} => {g(cls[0])}")
        lines.append(f"  gen {name_k}: " + ", ".join(parts))
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_limit(args):
    doc = _load(args)
    env = elaborate(doc, cert_depth=args.cert_depth)
    report = Report()
    name = args.direct or args.inverse
    t0 = time.perf_counter()
    s = env.spectrum(name)
    if args.direct:
        lim = direct_limit(s, cap=args.thread_bound)
    else:
        lim = inverse_limit(s, bound=args.uniq_bound)
    report.add("limit", f"limit.{name}.build", [],
               witness=(f"classes={lim.class_count()}",),
               elapsed=time.perf_counter() - t0)
    sys.stdout.write(limit_export_text(name, lim, inverse=bool(args.inverse)))
    return _emit(report, args)


def cmd_iso(args):
    doc = _load(args)
    env = elaborate(doc, cert_depth=args.cert_depth)
    report = Report()
    if args.cofinal:
        if not args.spectrum:
            raise ConfigError("--cofinal needs --spectrum")
        s = env.spectrum(args.spectrum)
        if args.cofinal not in env.cofinals:
            raise DslError(f"no cofinal block named {args.cofinal!r}")
        _, cof = env.cofinals[args.cofinal]
        t0 = time.perf_counter()
        if s.direction == COVARIANT:
            iso = cofinal_direct_iso(s, cof)
            lim = direct_limit(s)
        else:
            iso = cofinal_inverse_iso(s, cof)
            lim = inverse_limit(s)
        report.add("iso", f"cofinal.{args.spectrum}.{args.cofinal}",
                   iso.findings,
                   witness=(f"classes={lim.class_count()}",),
                   elapsed=time.perf_counter() - t0)
    else:
        from .runner import check_duality

        config = _config(args)
        t0 = time.perf_counter()
        check_duality(env, (args.duality,), config, report, "iso")
    return _emit(report, args)


def cmd_report(args):
    doc = _load(args)
    report = run_suite(doc, args.suite, _config(args))
    if not args.json:
        args.json = "-"
    return _emit(report, args)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": cmd_check,
        "limit": cmd_limit,
        "iso": cmd_iso,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (DslError, ConfigError, OSError) + KERNEL_ERRORS as exc:
        sys.stderr.write(f"bspec: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
