"""Metrics report rendering and the labeled bug-context evaluation.

The JSON report is canonical: fixed key order, schema-versioned, and free of
anything nondeterministic, so identical runs produce identical bytes. The CSV
row mirrors the JSON counters in a fixed column order and additionally
carries the wall-clock runtime.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import statistics
from pathlib import Path

from .errors import ConfigError
from .heuristics import (
    LOWER,
    NONE,
    RAISE,
    SUPPRESSION_CODES,
    ideal_direction,
    message_has,
)
from .pipeline import PipelineResult

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "subject",
    "head",
    "kloc",
    "kcms",
    "delta_kloc",
    "fw",
    "logs",
    "fails",
    "trns",
    "ctch",
    "ifs",
    "cnds",
    "keyl",
    "keyr",
    "inh",
    "dist_mean",
    "dist_stdev",
    "sigma_pre",
    "sigma_post",
    "low",
    "rse",
    "t_s",
)


def _round(x: float | None, digits: int = 6) -> float | None:
    return None if x is None else round(x, digits)


def _config_block(result: PipelineResult) -> dict:
    cfg = result.config
    return {
        "profiles": [p.name for p in result.profiles],
        "decay": cfg.decay,
        "edit_weight": cfg.edit_weight,
        "max_commits": cfg.max_commits,
        "categories": sorted(cfg.category_levels) if cfg.category_levels is not None else None,
        "protect_catch": cfg.protect_catch,
        "protect_branch": cfg.protect_branch,
        "wrapping_check": cfg.wrapping_check,
        "inheritance_check": cfg.inheritance_check,
        "keywords_lower": list(cfg.keywords_lower),
        "keywords_raise": list(cfg.keywords_raise),
        "max_distance": cfg.max_distance,
    }


def _sigma_indices(result: PipelineResult) -> tuple[list[int], list[int]]:
    """Scale indices of the primary profile's resolvable statements, before
    and after applying the accepted transforms."""
    primary = result.profiles[0]
    retarget = {
        id(m.statement): m.target for m in result.transforms
    }
    pre: list[int] = []
    post: list[int] = []
    for st in result.scan.statements:
        if st.profile.name != primary.name or st.level is None:
            continue
        pre.append(primary.index(st.level))
        post.append(primary.index(retarget.get(id(st), st.level)))
    return pre, post


def _frameworks(result: PipelineResult) -> str:
    with_statements = [
        p.name
        for p in result.profiles
        if any(st.profile.name == p.name for st in result.scan.statements)
    ]
    return ",".join(with_statements) if with_statements else result.profiles[0].name


def build_report(result: PipelineResult, bug_eval: dict | None = None) -> dict:
    logs = len(result.scan.statements)
    fails = sum(1 for st in result.scan.statements if st.level is None)
    distances = [m.distance for m in result.transforms]
    pre, post = _sigma_indices(result)
    low = sum(1 for m in result.transforms if m.direction == LOWER)
    rse = sum(1 for m in result.transforms if m.direction == RAISE)

    report = {
        "schema": 1,
        "subject": result.subject,
        "head": result.head,
        "config": _config_block(result),
        "kloc": round(result.scan.total_lines / 1000, 3),
        "kcms": round(len(result.changesets) / 1000, 3),
        "delta_kloc": round(result.delta_lines / 1000, 3),
        "fw": _frameworks(result),
        "logs": logs,
        "fails": fails,
        "mismatches": len(result.mismatches),
        "trns": len(result.transforms),
        "suppressed": {
            code: int(result.suppressions.get(code, 0)) for code in SUPPRESSION_CODES
        },
        "dist_mean": _round(statistics.mean(distances)) if distances else None,
        "dist_stdev": _round(statistics.pstdev(distances)) if distances else None,
        "sigma_pre": _round(statistics.pstdev(pre)) if pre else None,
        "sigma_post": _round(statistics.pstdev(post)) if post else None,
        "low": low,
        "rse": rse,
    }
    if bug_eval is not None:
        report["bug_eval"] = bug_eval
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_csv(report: dict, runtime_seconds: float) -> str:
    suppressed = report["suppressed"]
    row = {
        "subject": report["subject"],
        "head": report["head"],
        "kloc": report["kloc"],
        "kcms": report["kcms"],
        "delta_kloc": report["delta_kloc"],
        "fw": report["fw"],
        "logs": report["logs"],
        "fails": report["fails"],
        "trns": report["trns"],
        "ctch": suppressed["ctch"],
        "ifs": suppressed["ifs"],
        "cnds": suppressed["cnds"],
        "keyl": suppressed["keyl"],
        "keyr": suppressed["keyr"],
        "inh": suppressed["inh"],
        "dist_mean": report["dist_mean"],
        "dist_stdev": report["dist_stdev"],
        "sigma_pre": report["sigma_pre"],
        "sigma_post": report["sigma_post"],
        "low": report["low"],
        "rse": report["rse"],
        "t_s": round(runtime_seconds, 2),
    }
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerow({k: ("N/A" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def dump_doi(result: PipelineResult, path) -> None:
    """Write the per-method interest values of all tracked methods as CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "doi"])
        for mid in sorted(result.values):
            writer.writerow([str(mid), round(result.values[mid], 6)])


# ---------------------------------------------------------------------------
# Labeled bug contexts
# ---------------------------------------------------------------------------


def _parse_bool(text: str) -> bool | None:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "t", "yes", "y"):
        return True
    if lowered in ("0", "false", "f", "no", "n"):
        return False
    return None


def load_bug_labels(path) -> list[tuple[str, int, bool]]:
    """Rows of (path, line, is_bug) from a label CSV; a header row is allowed."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read bug labels {path}: {exc}") from exc
    rows: list[tuple[str, int, bool]] = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and [c.strip().lower() for c in row[:3]] == ["path", "line", "is_bug"]:
            continue
        if len(row) < 3:
            raise ConfigError(f"{path}:{lineno}: expected path,line,is_bug")
        flag = _parse_bool(row[2])
        try:
            line = int(row[1])
        except ValueError:
            flag = None
            line = -1
        if flag is None:
            logger.warning("%s:%d: unreadable label row, skipped", path, lineno)
            continue
        rows.append((row[0].strip(), line, flag))
    return rows


def evaluate_bug_contexts(result: PipelineResult, labels: list[tuple[str, int, bool]]) -> dict:
    """Compare each labeled statement's actual direction with its ideal one.

    A label resolves by exact (path, line) against the extracted statements.
    Unresolvable labels and statements outside the verbosity scale are
    excluded with a warning.
    """
    by_site = {(st.path, st.line): st for st in result.scan.statements}
    actual_by_site = {
        (m.statement.path, m.statement.line): m.direction for m in result.transforms
    }
    cfg = result.config
    ideal_tally = {RAISE: 0, LOWER: 0, NONE: 0}
    actual_tally = {RAISE: 0, LOWER: 0, NONE: 0}
    match = 0
    n = 0
    excluded = 0
    for path, line, is_bug in labels:
        st = by_site.get((path, line))
        if st is None or st.level is None:
            logger.warning("label %s:%d does not resolve to a statement", path, line)
            excluded += 1
            continue
        try:
            ideal = ideal_direction(
                st.level,
                is_bug,
                lower_triggered=message_has(st.message, cfg.keywords_lower),
                raise_keyword=message_has(st.message, cfg.keywords_raise),
            )
        except ConfigError:
            logger.warning(
                "label %s:%d is at %s, outside the verbosity scale", path, line, st.level
            )
            excluded += 1
            continue
        actual = actual_by_site.get((path, line), NONE)
        ideal_tally[ideal] += 1
        actual_tally[actual] += 1
        n += 1
        if ideal == actual:
            match += 1
    return {
        "n": n,
        "match": match,
        "excluded": excluded,
        "ideal": {"raise": ideal_tally[RAISE], "lower": ideal_tally[LOWER], "none": ideal_tally[NONE]},
        "actual": {"raise": actual_tally[RAISE], "lower": actual_tally[LOWER], "none": actual_tally[NONE]},
    }
