"""End-to-end orchestration: scan, mine, score, decide, plan edits.

Every stage is deterministic given the repository state and configuration;
the result object carries all intermediate products so reporting, diffing,
and application are side-effect-free afterwards.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .doi import InterestModel
from .errors import RepoError
from .heuristics import (
    Decision,
    Mismatch,
    PartitionTable,
    RunConfig,
    build_partitions,
    cohort_targets,
    decide,
    find_mismatches,
)
from .logscan import ProjectScan, scan_project
from .mining import (
    BlobCache,
    Changeset,
    MethodId,
    changes_to_edit_events,
    copy_seed_pairs,
    detect_method_renames,
    open_repo,
    resolve_commit,
    walk_history,
)
from .profiles import FrameworkProfile
from .rewrite import SourceEdit, edits_for_transforms

logger = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    repo_root: Path
    subject: str
    head: str  # resolved commit id
    profiles: list[FrameworkProfile]
    config: RunConfig
    scan: ProjectScan
    changesets: list[Changeset]
    values: dict[MethodId, float]  # interest of tracked methods at HEAD
    tables: dict[str, PartitionTable]
    mismatches: list[Mismatch]
    decisions: list[tuple[Mismatch, Decision]]
    transforms: list[Mismatch]
    suppressions: Counter
    edits: list[SourceEdit]
    delta_lines: int  # net line change over the walked window, .java only
    rename_warnings: list[str] = field(default_factory=list)

    @property
    def tracked(self) -> set[MethodId]:
        return set(self.values)


def tracked_methods(scan: ProjectScan) -> set[MethodId]:
    """Methods eligible for partitioning: those with a logging statement."""
    return {st.method for st in scan.statements if st.method in scan.methods}


def replay_history(
    repo,
    changesets: list[Changeset],
    head_methods: set[MethodId],
    config: RunConfig,
    cache: BlobCache | None = None,
) -> tuple[InterestModel, list[str]]:
    """Build the interest model from a window of changesets.

    Renames are resolved first so edits accrue to surviving identities; each
    changeset's copy seeds run before its edit events so a copy inherits the
    source's value as of the previous commit.
    """
    cache = cache or BlobCache(repo)
    rmap = detect_method_renames(repo, changesets, cache)
    rmap.prune_resurrected(head_methods)
    model = InterestModel(decay=config.decay, edit_weight=config.edit_weight)
    for cs in changesets:
        for src, dst in copy_seed_pairs(cs, rmap, cache, head_methods):
            model.seed_copy(src, dst)
        for event in changes_to_edit_events(
            cs, rmap, cache, head_methods, weight=config.edit_weight
        ):
            model.record_edit(event.element, event.weight)
    return model, list(rmap.warnings)


def _net_java_lines(changesets: list[Changeset]) -> int:
    total = 0
    for cs in changesets:
        for fd in cs.file_diffs:
            path = fd.path_after or fd.path_before or ""
            if not path.endswith(".java"):
                continue
            for h in fd.hunks:
                total += h.post_len - h.pre_len
    return total


def run(
    repo_path,
    config: RunConfig,
    profiles: list[FrameworkProfile],
    head: str = "HEAD",
) -> PipelineResult:
    repo = open_repo(repo_path)
    if repo.working_tree_dir is None:
        raise RepoError(f"{repo_path}: bare repository has no sources to scan")
    root = Path(repo.working_tree_dir)

    scan = scan_project(root, profiles)
    changesets = walk_history(repo, head, config.max_commits)
    head_sha = resolve_commit(repo, head).hexsha

    head_methods = set(scan.methods)
    model, rename_warnings = replay_history(repo, changesets, head_methods, config)

    values = {m: model.value(m) for m in sorted(tracked_methods(scan))}
    tables = build_partitions(profiles, values, config)
    mismatches = find_mismatches(scan.statements, values, tables, config)

    cohort = cohort_targets(mismatches)
    decisions = [(m, decide(m, config, cohort)) for m in mismatches]
    transforms = [m for m, d in decisions if d.transform]
    suppressions = Counter(d.reason for _, d in decisions if not d.transform)

    edits = edits_for_transforms(transforms, scan.files)

    return PipelineResult(
        repo_root=root,
        subject=root.resolve().name,
        head=head_sha,
        profiles=list(profiles),
        config=config,
        scan=scan,
        changesets=changesets,
        values=values,
        tables=tables,
        mismatches=mismatches,
        decisions=decisions,
        transforms=transforms,
        suppressions=suppressions,
        edits=edits,
        delta_lines=_net_java_lines(changesets),
        rename_warnings=rename_warnings,
    )
