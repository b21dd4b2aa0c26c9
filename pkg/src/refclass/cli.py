"""``refclass`` command-line interface.

Exit codes: 0 success, 1 KB parse error, 2 KB inconsistency (or failed
consistency check), 3 bad query, 4 candidate limit exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import corpus
from .engine import CandidateLimitError, evaluate
from .model import InconsistencyError
from .oracle import check_extensional
from .parser import ParseError, QueryError, parse_kb, parse_query
from .report import dumps_trace, explain, verdict_line

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INCONSISTENT = 2
EXIT_QUERY = 3
EXIT_LIMIT = 4

DEFAULT_MAX_CANDIDATES = 10000


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def max_candidates() -> int:
    raw = os.environ.get("REFCLASS_MAX_CANDIDATES", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_CANDIDATES
    except ValueError:
        raise _Exit(EXIT_QUERY, f"REFCLASS_MAX_CANDIDATES must be an integer, got {raw!r}")


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc.strerror}")
    try:
        return parse_kb(text)
    except InconsistencyError as exc:
        raise _Exit(EXIT_INCONSISTENT, _diagnostics(path, exc))
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, _diagnostics(path, exc))


def _diagnostics(path: str, exc: ParseError) -> str:
    return "\n".join(f"{path}:{e.line}:{e.column}: {e.message}" + (f" ({e.token})" if e.token else "")
                     for e in exc.errors)


def _verdict(kb, query_text: str):
    try:
        sentence = parse_query(query_text, kb)
    except QueryError as exc:
        raise _Exit(EXIT_QUERY, f"bad query: {exc}")
    try:
        return evaluate(kb, sentence, max_candidates=max_candidates())
    except CandidateLimitError as exc:
        raise _Exit(EXIT_LIMIT, str(exc))
    except InconsistencyError as exc:
        raise _Exit(EXIT_INCONSISTENT, str(exc))


def cmd_query(args, out) -> int:
    kb = _load(args.file)
    verdict = _verdict(kb, args.sentence)
    out.write(verdict_line(verdict.interval, decimal=args.decimal) + "\n")
    if args.trace:
        Path(args.trace).write_text(dumps_trace(verdict), encoding="utf-8")
    return EXIT_OK


def cmd_explain(args, out) -> int:
    kb = _load(args.file)
    verdict = _verdict(kb, args.sentence)
    out.write(explain(verdict))
    if args.figure:
        from .plotting import plot_verdict

        plot_verdict(verdict, args.figure)
    return EXIT_OK


def cmd_check(args, out, err) -> int:
    kb = _load(args.file)
    if not kb.extensions:
        err.write("warning: no extensional classes; nothing to check\n")
        return EXIT_OK
    report = check_extensional(kb)
    for v in report.violations:
        out.write(f"violation: {v.fact}: declared {v.expected}, enumerated {v.actual}\n")
    out.write(f"checked {report.checked} facts, skipped {report.skipped}, "
              f"{len(report.violations)} violations\n")
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def cmd_replay(args, out) -> int:
    """Evaluate every bundled corpus; one tab-separated row each."""
    fig_dir = Path(args.figures) if args.figures else None
    if fig_dir:
        from .plotting import plot_verdict

        fig_dir.mkdir(parents=True, exist_ok=True)
    out.write("corpus\tquery\tverdict\texpected\tstatus\n")
    failures = 0
    for entry in corpus.ENTRIES:
        kb = parse_kb(entry.text())
        verdict = evaluate(kb, parse_query(entry.query, kb))
        ok = verdict.interval == entry.expected
        failures += not ok
        out.write(f"{entry.name}\t{entry.query}\t{verdict.interval}\t{entry.expected}\t"
                  f"{'ok' if ok else 'MISMATCH'}\n")
        if fig_dir:
            plot_verdict(verdict, fig_dir / f"{entry.name}.png", title=f"{entry.name}: {entry.query}")
    return EXIT_OK if not failures else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refclass",
        description="Probability intervals from statistical knowledge via reference classes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="print the verdict interval for a sentence")
    q.add_argument("file", help=".rkb knowledge base")
    q.add_argument("sentence", help='atomic sentence, e.g. "tweety in Flier"')
    q.add_argument("--trace", metavar="OUT", help="write the JSON trace document here")
    q.add_argument("--decimal", action="store_true", help="append a decimal rendering")

    e = sub.add_parser("explain", help="list candidates, defeats, labels and the verdict")
    e.add_argument("file")
    e.add_argument("sentence")
    e.add_argument("--figure", metavar="PNG", help="also draw the candidate intervals")

    c = sub.add_parser("check", help="compare stats with enumerated class extensions")
    c.add_argument("file")

    r = sub.add_parser("replay", help="evaluate the bundled example corpora")
    r.add_argument("--figures", metavar="DIR", help="write one figure per corpus into DIR")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "query":
            return cmd_query(args, out)
        if args.command == "explain":
            return cmd_explain(args, out)
        if args.command == "check":
            return cmd_check(args, out, err)
        return cmd_replay(args, out)
    except _Exit as exc:
        err.write(exc.message + "\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
