"""Command-line driver: ``tcpel {rank,exact,validate,stats} FILE``.

Exit codes: 0 success, 1 invalid knowledge base, 2 refused (size caps),
64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .mln import DEFAULT_GROUNDING_CAP, GroundingRefused, ground_kb, projected_size
from .oracle import DEFAULT_ORACLE_CAP, OracleRefused, exact_probabilities
from .rank import StopCondition, anytime_rank
from .report import emit_report, exact_json
from .syntax import KbError, parse_kb

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tcpel", description="Ranking queries over probabilistic EL++ knowledge bases.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rank", help="anytime ranking of atomic consequences")
    r.add_argument("file")
    r.add_argument("--max-classes", type=int)
    r.add_argument("--max-worlds", type=int)
    r.add_argument("--max-seconds", type=float)
    r.add_argument("--target-bound", type=float)
    r.add_argument("--inconsistency", choices=("explode", "skip"), default="explode")
    r.add_argument("--tight-bound", action="store_true", help="skip empty classes when computing U")
    r.add_argument("--output", choices=("json", "tsv"), default="json")
    r.add_argument("--out", help="write the report here instead of stdout")
    r.add_argument("--grounding-cap", type=int, default=DEFAULT_GROUNDING_CAP)

    e = sub.add_parser("exact", help="exact probabilities by world enumeration")
    e.add_argument("file")
    e.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help="maximum number of ground atoms")
    e.add_argument("--inconsistency", choices=("explode", "skip"), default="explode")
    e.add_argument("--out")

    v = sub.add_parser("validate", help="parse and check a knowledge base")
    v.add_argument("file")

    s = sub.add_parser("stats", help="grounding sizes")
    s.add_argument("file")
    return p


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_kb(text)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _rank(args) -> int:
    kb = _load(args.file).kb
    stop = StopCondition(args.max_classes, args.max_worlds, args.max_seconds, args.target_bound)
    result = anytime_rank(
        kb, stop, policy=args.inconsistency, tight_bound=args.tight_bound, grounding_cap=args.grounding_cap
    )
    _write(emit_report(result, args.output), args.out)
    return EXIT_OK


def _exact(args) -> int:
    kb = _load(args.file).kb
    _write(exact_json(exact_probabilities(kb, args.inconsistency, args.cap)), args.out)
    return EXIT_OK


def _validate(args) -> int:
    doc = _load(args.file)
    print(f"{args.file}: ok ({len(doc.kb.axioms)} axioms, {len(doc.kb.mln.formulas)} formulas)")
    return EXIT_OK


def _stats(args) -> int:
    kb = _load(args.file).kb
    atoms, instances = projected_size(kb.mln, kb.signature.mln_predicates)
    g = ground_kb(kb)
    print(f"ground atoms: {g.n}")
    print(f"ground formulas: {len(g.formulas)}")
    print(f"worlds: {2 ** g.n}")
    print(f"classes: {2 ** len(g.formulas)}")
    print(f"projected grounding: {atoms} atoms, {instances} formula instances")
    return EXIT_OK


COMMANDS = {"rank": _rank, "exact": _exact, "validate": _validate, "stats": _stats}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tcpel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KbError as exc:
        for d in exc.diagnostics:
            print(f"{args.file}:{d}", file=sys.stderr)
        return EXIT_INVALID
    except (GroundingRefused, OracleRefused) as exc:
        print(f"tcpel: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
