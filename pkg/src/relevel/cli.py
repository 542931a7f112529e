"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .doi import DEFAULT_DECAY, DEFAULT_EDIT_WEIGHT
from .errors import RelevelError
from .heuristics import RunConfig, load_keyword_file, parse_category_levels
from .mining import DEFAULT_MAX_COMMITS
from .pipeline import run
from .profiles import load_profiles
from .report import (
    build_report,
    dump_doi,
    evaluate_bug_contexts,
    load_bug_labels,
    render_csv,
    render_json,
)
from .rewrite import apply_to_tree, render_diffs


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="relevel",
        description=(
            "Recommend and apply logging level adjustments driven by a "
            "project's development history."
        ),
    )
    ap.add_argument("--repo", default=".", help="git repository to analyze (default: .)")
    ap.add_argument("--head", default="HEAD", help="revision to analyze (default: HEAD)")
    ap.add_argument(
        "--max-commits",
        type=int,
        default=DEFAULT_MAX_COMMITS,
        metavar="N",
        help="first-parent history window size (default: %(default)s)",
    )
    ap.add_argument(
        "--profiles",
        metavar="SPEC",
        help="comma list of built-in profile names or profile JSON files "
        "(default: jul,slf4j)",
    )
    ap.add_argument(
        "--decay",
        type=float,
        default=DEFAULT_DECAY,
        help="interest lost per foreign edit event (default: %(default)s)",
    )
    ap.add_argument(
        "--edit-weight",
        type=float,
        default=DEFAULT_EDIT_WEIGHT,
        help="interest gained per own edit event (default: %(default)s)",
    )
    ap.add_argument(
        "--categories",
        nargs="?",
        const="",
        default=None,
        metavar="LEVELS",
        help="treat category levels as untouchable; optional comma list "
        "overrides the built-in WARNING/SEVERE/WARN/ERROR set",
    )
    ap.add_argument("--no-protect-catch", action="store_true", help="allow rewrites inside catch blocks")
    ap.add_argument("--no-protect-branch", action="store_true", help="allow rewrites of branch-leading statements")
    ap.add_argument("--no-wrapping-check", action="store_true", help="ignore enclosing level-guard conditionals")
    ap.add_argument("--no-inheritance-check", action="store_true", help="ignore override families when deciding")
    ap.add_argument("--keywords-lower", metavar="FILE", help="file of keywords that veto lowering, one per line")
    ap.add_argument("--keywords-raise", metavar="FILE", help="file of keywords required to raise into a category level")
    ap.add_argument(
        "--max-distance",
        type=int,
        default=None,
        metavar="N",
        help="suppress transforms moving more than N levels (default: unlimited)",
    )
    ap.add_argument("--apply", action="store_true", help="write accepted rewrites into the working tree")
    ap.add_argument(
        "--diff",
        nargs="?",
        const="-",
        default=None,
        metavar="FILE",
        help="emit a unified diff of the rewrites to FILE (default: stdout)",
    )
    ap.add_argument("--report", choices=("json", "csv"), default="json", help="report format (default: json)")
    ap.add_argument("--dump-doi", metavar="FILE", help="write per-method interest values as CSV")
    ap.add_argument("--bug-labels", metavar="FILE", help="CSV of path,line,is_bug to evaluate against ideal directions")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kwargs = {}
    if args.keywords_lower:
        kwargs["keywords_lower"] = load_keyword_file(args.keywords_lower)
    if args.keywords_raise:
        kwargs["keywords_raise"] = load_keyword_file(args.keywords_raise)
    return RunConfig(
        decay=args.decay,
        edit_weight=args.edit_weight,
        max_commits=args.max_commits,
        category_levels=parse_category_levels(args.categories) if args.categories is not None else None,
        protect_catch=not args.no_protect_catch,
        protect_branch=not args.no_protect_branch,
        wrapping_check=not args.no_wrapping_check,
        inheritance_check=not args.no_inheritance_check,
        max_distance=args.max_distance,
        **kwargs,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr, level=logging.WARNING, format="relevel: %(levelname)s: %(message)s"
    )
    started = time.perf_counter()
    try:
        profiles = load_profiles(args.profiles)
        config = config_from_args(args)
        result = run(args.repo, config, profiles, head=args.head)

        bug_eval = None
        if args.bug_labels:
            bug_eval = evaluate_bug_contexts(result, load_bug_labels(args.bug_labels))
        if args.dump_doi:
            dump_doi(result, args.dump_doi)
        if args.diff is not None:
            diff_text = render_diffs(result.scan.files, result.edits)
            if args.diff == "-":
                sys.stdout.write(diff_text)
            else:
                Path(args.diff).write_text(diff_text, encoding="utf-8")
        if args.apply:
            for path in apply_to_tree(result.repo_root, result.edits):
                print(f"relevel: rewrote {path}", file=sys.stderr)

        report = build_report(result, bug_eval=bug_eval)
        if args.report == "json":
            sys.stdout.write(render_json(report))
        else:
            sys.stdout.write(render_csv(report, time.perf_counter() - started))
    except RelevelError as exc:
        print(f"relevel: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
