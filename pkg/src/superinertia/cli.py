"""Command line: ``analyze``, ``gen`` and ``check``."""

from __future__ import annotations

import argparse
import json
import sys

from .documents import dump_document, generate_instance
from .errors import AnalysisError
from .report import emit_dot, emit_json, emit_text, failed_verdicts, run_corpus, run_report
from .valued import as_rational, is_prime


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superinertia",
                                 description="Inertia and monodromy pairing of split degenerate superelliptic curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="analyze one input document")
    an.add_argument("--input", required=True, help="JSON document, or - for stdin")
    an.add_argument("--oracle", action="store_true", help="also compute the path-intersection Gram matrix")
    an.add_argument("--emit", choices=("json", "text", "dot"), default="json")
    an.add_argument("--ell", type=int, help="prime for a display reduction of the monodromy matrix")
    an.add_argument("--power", type=int, default=1)

    gen = sub.add_parser("gen", help="print a random split degenerate instance")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--h", type=int, required=True)
    gen.add_argument("--vp", default="0")
    gen.add_argument("--seed", type=int, default=0)

    chk = sub.add_parser("check", help="run every cross-check over a generated corpus")
    chk.add_argument("--seeds", type=int, default=540)
    chk.add_argument("--no-oracle", action="store_true")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "analyze":
            if args.ell is not None and (not is_prime(args.ell) or args.power < 1):
                print("error: --ell must be prime and --power positive", file=sys.stderr)
                return 2
            try:
                text = _read(args.input)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            report = run_report(text, oracle=args.oracle, ell=args.ell, power=args.power)
            emit = {"json": emit_json, "text": emit_text, "dot": emit_dot}[args.emit]
            sys.stdout.write(emit(report) if args.emit != "json" else emit(report) + "\n")
            bad = failed_verdicts(report)
            if bad:
                print(f"verdict failure: {', '.join(bad)}", file=sys.stderr)
                return 5
            return 0
        if args.command == "gen":
            if not is_prime(args.p) or args.h < 1:
                print("error: --p must be prime and --h at least 1", file=sys.stderr)
                return 2
            try:
                vp = as_rational(args.vp)
            except (TypeError, ValueError) as exc:
                print(f"error: bad --vp: {exc}", file=sys.stderr)
                return 2
            print(dump_document(generate_instance(args.p, args.h, vp, args.seed)))
            return 0
        summary = run_corpus(args.seeds, with_oracle=not args.no_oracle)
        print(json.dumps(summary, sort_keys=True, indent=2))
        return 5 if summary["failures"] else 0
    except AnalysisError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
