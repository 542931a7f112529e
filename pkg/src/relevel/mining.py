"""History mining: changesets, method renames, file copies, edit events.

Commits are walked oldest to newest along the first-parent chain, diffed with
zero context lines, and every (method, hunk) overlap becomes one edit event.
A preliminary pass pairs disappeared and appeared methods into renames so
that edits accrue to the surviving identity; files reported by Git as copies
are surfaced so the interest model can seed the copy from its source.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import git

from .errors import ConfigError, RepoError
from .javasrc import JavaFile, MethodDecl, decode_source, parse_java

logger = logging.getLogger(__name__)

DEFAULT_MAX_COMMITS = 1000
DEFAULT_RENAME_THRESHOLD = 0.6

_DIFF_ARGS = (
    "--unified=0",
    "--no-color",
    "--no-ext-diff",
    "--find-renames",
    "--find-copies-harder",
)


@dataclass(frozen=True, order=True)
class MethodId:
    """Stable identity of a method: repository path plus textual signature."""

    path: str
    signature: str

    def __str__(self) -> str:
        return f"{self.path}:{self.signature}"


@dataclass(frozen=True)
class EditEvent:
    element: MethodId
    ordinal: int  # commit ordinal within the walked window
    weight: float = 1.0


@dataclass(frozen=True)
class Hunk:
    pre_start: int  # 1-based; for empty ranges git reports the anchor line
    pre_len: int
    post_start: int
    post_len: int
    lines: tuple[str, ...]  # raw diff body lines, sign characters included

    @property
    def anchor_line(self) -> int:
        return self.post_start if self.post_len else self.pre_start


@dataclass(frozen=True)
class FileDiff:
    path_before: str | None  # None for added files
    path_after: str | None  # None for deleted files
    kind: str  # A added, M modified, D deleted, R renamed, C copied
    hunks: tuple[Hunk, ...]


@dataclass(frozen=True)
class Changeset:
    commit_id: str
    parent_id: str | None  # first parent; None for a root commit
    ordinal: int  # dense, increasing along the walked window
    file_diffs: tuple[FileDiff, ...]


# ---------------------------------------------------------------------------
# Repository access
# ---------------------------------------------------------------------------


def open_repo(repo_path) -> git.Repo:
    try:
        return git.Repo(repo_path)
    except (git.NoSuchPathError, git.InvalidGitRepositoryError) as exc:
        raise RepoError(f"not a readable git repository: {repo_path}") from exc


def resolve_commit(repo: git.Repo, ref: str) -> git.objects.Commit:
    try:
        return repo.commit(ref)
    except (git.BadName, git.GitCommandError, ValueError) as exc:
        raise ConfigError(f"cannot resolve revision {ref!r}") from exc


def _empty_tree(repo: git.Repo) -> str:
    # hash of the empty tree; derived from the repo so sha256 layouts work too
    import os

    return repo.git.hash_object("-t", "tree", os.devnull)


def walk_history(repo_path, head: str = "HEAD", max_commits: int = DEFAULT_MAX_COMMITS) -> list[Changeset]:
    """Changesets for at most max_commits first-parent commits ending at head.

    Ordered oldest to newest with dense ordinals. Merge commits contribute
    only their first-parent diff.
    """
    if max_commits < 1:
        raise ConfigError("max_commits must be at least 1")
    repo = repo_path if isinstance(repo_path, git.Repo) else open_repo(repo_path)
    tip = resolve_commit(repo, head)
    try:
        commits = list(
            repo.iter_commits(tip.hexsha, max_count=max_commits, first_parent=True)
        )
    except git.GitCommandError as exc:
        raise RepoError(f"history walk failed: {exc}") from exc
    commits.reverse()
    empty = None
    out: list[Changeset] = []
    for ordinal, commit in enumerate(commits):
        parent = commit.parents[0] if commit.parents else None
        if parent is None:
            if empty is None:
                empty = _empty_tree(repo)
            base = empty
        else:
            base = parent.hexsha
        try:
            raw = repo.git.diff(base, commit.hexsha, *_DIFF_ARGS)
        except git.GitCommandError as exc:
            raise RepoError(f"diff failed at {commit.hexsha[:10]}: {exc}") from exc
        out.append(
            Changeset(
                commit_id=commit.hexsha,
                parent_id=parent.hexsha if parent else None,
                ordinal=ordinal,
                file_diffs=tuple(parse_patch(raw)),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Patch text parsing
# ---------------------------------------------------------------------------

_HUNK_RE = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


def _unquote(path: str) -> str:
    if path.startswith('"') and path.endswith('"') and len(path) >= 2:
        try:
            return path[1:-1].encode("latin-1", "backslashreplace").decode("unicode_escape")
        except UnicodeDecodeError:
            return path[1:-1]
    return path


def _strip_side(path: str) -> str | None:
    path = _unquote(path.split("\t")[0])
    if path == "/dev/null":
        return None
    if path.startswith(("a/", "b/")):
        return path[2:]
    return path


class _FileAcc:
    def __init__(self) -> None:
        self.path_before: str | None = None
        self.path_after: str | None = None
        self.kind: str | None = None
        self.hunks: list[Hunk] = []
        self.saw_minus_side = False
        self.saw_plus_side = False
        self.fallback: tuple[str, str] | None = None

    def finish(self) -> FileDiff | None:
        before, after = self.path_before, self.path_after
        if before is None and after is None and self.fallback:
            before, after = self.fallback
        if self.saw_minus_side and self.path_before is None:
            before = None
        if self.saw_plus_side and self.path_after is None:
            after = None
        kind = self.kind
        if kind is None:
            if before is None and after is not None:
                kind = "A"
            elif after is None and before is not None:
                kind = "D"
            else:
                kind = "M"
        if kind == "M" and before is None and after is None:
            return None  # header noise with no usable path
        if kind in ("M",) and before is None:
            before = after
        if kind in ("M",) and after is None:
            after = before
        return FileDiff(before, after, kind, tuple(self.hunks))


def parse_patch(text: str) -> list[FileDiff]:
    """Parse `git diff --unified=0` output into FileDiff records."""
    diffs: list[FileDiff] = []
    acc: _FileAcc | None = None
    pending: list[str] | None = None
    pending_header: tuple[int, int, int, int] | None = None
    expect = 0

    def close_hunk() -> None:
        nonlocal pending, pending_header
        if acc is not None and pending_header is not None:
            acc.hunks.append(Hunk(*pending_header, tuple(pending or ())))
        pending = None
        pending_header = None

    def close_file() -> None:
        nonlocal acc
        close_hunk()
        if acc is not None:
            fd = acc.finish()
            if fd is not None:
                diffs.append(fd)
        acc = None

    for line in text.split("\n"):
        if expect > 0:
            if line.startswith("\\"):
                continue  # "No newline at end of file"
            if pending is not None:
                pending.append(line)
            expect -= 1
            continue
        if line.startswith("diff --git "):
            close_file()
            acc = _FileAcc()
            rest = line[len("diff --git ") :]
            cut = rest.rfind(" b/")
            if rest.startswith("a/") and cut > 0:
                acc.fallback = (rest[2:cut], rest[cut + 3 :])
            continue
        if acc is None:
            continue
        if line.startswith("--- "):
            acc.path_before = _strip_side(line[4:])
            acc.saw_minus_side = True
        elif line.startswith("+++ "):
            acc.path_after = _strip_side(line[4:])
            acc.saw_plus_side = True
        elif line.startswith("rename from "):
            acc.kind = "R"
            acc.path_before = _unquote(line[len("rename from ") :])
        elif line.startswith("rename to "):
            acc.kind = "R"
            acc.path_after = _unquote(line[len("rename to ") :])
        elif line.startswith("copy from "):
            acc.kind = "C"
            acc.path_before = _unquote(line[len("copy from ") :])
        elif line.startswith("copy to "):
            acc.kind = "C"
            acc.path_after = _unquote(line[len("copy to ") :])
        elif line.startswith("new file mode"):
            acc.kind = "A"
        elif line.startswith("deleted file mode"):
            acc.kind = "D"
        elif line.startswith("\\"):
            continue
        else:
            m = _HUNK_RE.match(line)
            if m:
                close_hunk()
                pre_start = int(m.group(1))
                pre_len = int(m.group(2)) if m.group(2) is not None else 1
                post_start = int(m.group(3))
                post_len = int(m.group(4)) if m.group(4) is not None else 1
                pending_header = (pre_start, pre_len, post_start, post_len)
                pending = []
                expect = pre_len + post_len
    close_file()
    return diffs


# ---------------------------------------------------------------------------
# Blob parse cache
# ---------------------------------------------------------------------------


class BlobCache:
    """Parsed historical files, keyed by blob object id.

    Rename detection and event conversion both walk the same blobs; the cache
    guarantees the second pass re-reads nothing. `misses` counts actual parses
    so tests can assert the reuse.
    """

    def __init__(self, repo: git.Repo):
        self.repo = repo
        self._by_blob: dict[str, JavaFile] = {}
        self.misses = 0

    def file_at(self, commit_id: str | None, path: str | None) -> JavaFile | None:
        if commit_id is None or path is None:
            return None
        try:
            blob = self.repo.commit(commit_id).tree / path
        except KeyError:
            return None
        cached = self._by_blob.get(blob.hexsha)
        if cached is not None:
            return cached
        self.misses += 1
        jf = parse_java(path, decode_source(blob.data_stream.read()))
        if not jf.ok:
            logger.warning("skipping unparseable blob %s at %s", path, commit_id[:10])
        self._by_blob[blob.hexsha] = jf
        return jf


def _is_java(fd: FileDiff) -> bool:
    path = fd.path_after or fd.path_before or ""
    return path.endswith(".java")


# ---------------------------------------------------------------------------
# Rename detection
# ---------------------------------------------------------------------------


class RenameMap:
    """Transitively closed map from historical method ids to current ones.

    resolve() returns the surviving identity, the id itself when no rename
    touched it, or None for a tombstoned (deleted) method.
    """

    def __init__(self) -> None:
        self._fwd: dict[MethodId, MethodId | None] = {}
        self._rev: dict[MethodId, set[MethodId]] = {}
        self.warnings: list[str] = []

    def _redirect(self, old: MethodId, new: MethodId | None) -> None:
        keys = self._rev.pop(old, set())
        keys.add(old)
        for key in keys:
            if key == new:
                self._fwd.pop(key, None)  # chain closed on itself; identity wins
                continue
            self._fwd[key] = new
        if new is not None:
            self._rev.setdefault(new, set()).update(k for k in keys if k != new)

    def record_rename(self, old: MethodId, new: MethodId) -> None:
        self._redirect(old, new)

    def record_delete(self, old: MethodId) -> None:
        self._redirect(old, None)

    def resolve(self, mid: MethodId) -> MethodId | None:
        if mid in self._fwd:
            return self._fwd[mid]
        return mid

    def prune_resurrected(self, head_ids: set[MethodId]) -> None:
        """Drop tombstones for ids that exist again at HEAD under the same name."""
        for key in [k for k, v in self._fwd.items() if v is None and k in head_ids]:
            del self._fwd[key]

    def entries(self) -> dict[MethodId, MethodId | None]:
        return dict(self._fwd)


def _body_text(jf: JavaFile, m: MethodDecl) -> str:
    return jf.source[m.body_start : m.body_end] if m.has_body else ""


def _body_tokens(jf: JavaFile, m: MethodDecl) -> frozenset[str]:
    if not m.has_body:
        return frozenset()
    return frozenset(
        t.text for t in jf.tokens if m.body_start <= t.start < m.body_end
    )


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _match_renames(
    pre_jf: JavaFile,
    post_jf: JavaFile,
    removed: list[MethodDecl],
    added: list[MethodDecl],
    threshold: float,
    warnings: list[str],
) -> list[tuple[MethodDecl, MethodDecl]]:
    """Pair removed with added methods by body similarity.

    A pair qualifies when body-token Jaccard similarity reaches the threshold
    or the body bytes are identical. Best score wins; ties fall back to source
    order. Ambiguous candidates are reported as warnings.
    """
    candidates: list[tuple[float, int, int]] = []
    options: dict[int, int] = {}
    for i, old in enumerate(removed):
        old_tokens = _body_tokens(pre_jf, old)
        old_text = _body_text(pre_jf, old)
        for j, new in enumerate(added):
            score = _jaccard(old_tokens, _body_tokens(post_jf, new))
            if old_text == _body_text(post_jf, new):
                score = 2.0  # byte-identical body, names differ
            if score >= threshold:
                candidates.append((score, i, j))
                options[i] = options.get(i, 0) + 1
    for i, count in options.items():
        if count > 1:
            warnings.append(
                f"ambiguous rename for {removed[i].signature}: {count} candidates"
            )
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_old: set[int] = set()
    used_new: set[int] = set()
    pairs: list[tuple[MethodDecl, MethodDecl]] = []
    for score, i, j in candidates:
        if i in used_old or j in used_new:
            continue
        used_old.add(i)
        used_new.add(j)
        pairs.append((removed[i], added[j]))
    pairs.sort(key=lambda p: p[0].decl_start)
    return pairs


def detect_method_renames(
    repo: git.Repo,
    changesets: list[Changeset],
    cache: BlobCache | None = None,
    threshold: float = DEFAULT_RENAME_THRESHOLD,
) -> RenameMap:
    """Build the rename map for a window of changesets, oldest first."""
    cache = cache or BlobCache(repo)
    rmap = RenameMap()
    for cs in changesets:
        for fd in cs.file_diffs:
            if not _is_java(fd):
                continue
            if fd.kind == "D" and fd.path_before:
                pre = cache.file_at(cs.parent_id, fd.path_before)
                if pre is not None:
                    for m in pre.methods:
                        rmap.record_delete(MethodId(fd.path_before, m.signature))
                continue
            if fd.kind not in ("M", "R") or not fd.path_before or not fd.path_after:
                continue
            pre = cache.file_at(cs.parent_id, fd.path_before)
            post = cache.file_at(cs.commit_id, fd.path_after)
            if pre is None or post is None or not pre.ok or not post.ok:
                continue
            pre_sigs = {m.signature: m for m in pre.methods}
            post_sigs = {m.signature: m for m in post.methods}
            removed = [m for s, m in pre_sigs.items() if s not in post_sigs]
            added = [m for s, m in post_sigs.items() if s not in pre_sigs]
            removed.sort(key=lambda m: m.decl_start)
            added.sort(key=lambda m: m.decl_start)
            pairs = _match_renames(
                pre,
                post,
                [m for m in removed if m.has_body],
                [m for m in added if m.has_body],
                threshold,
                rmap.warnings,
            )
            paired_old = {old.signature for old, _ in pairs}
            if fd.kind == "R":
                for sig in pre_sigs:
                    if sig in post_sigs:
                        rmap.record_rename(
                            MethodId(fd.path_before, sig), MethodId(fd.path_after, sig)
                        )
            for old, new in pairs:
                rmap.record_rename(
                    MethodId(fd.path_before, old.signature),
                    MethodId(fd.path_after, new.signature),
                )
            for m in removed:
                if m.signature not in paired_old:
                    rmap.record_delete(MethodId(fd.path_before, m.signature))
    return rmap


# ---------------------------------------------------------------------------
# Copies and events
# ---------------------------------------------------------------------------


def detect_file_copies(changeset: Changeset) -> list[tuple[str, str]]:
    """Git-reported file copies in one changeset as (source, copy) pairs."""
    pairs = [
        (fd.path_before, fd.path_after)
        for fd in changeset.file_diffs
        if fd.kind == "C" and fd.path_before and fd.path_after and _is_java(fd)
    ]
    pairs.sort()
    return pairs


def copy_seed_pairs(
    changeset: Changeset,
    rename_map: RenameMap,
    cache: BlobCache,
    head_methods: set[MethodId],
) -> list[tuple[MethodId, MethodId]]:
    """Method-level (source, copy) seed pairs for Git-reported file copies."""
    out: list[tuple[MethodId, MethodId]] = []
    for src_path, dst_path in detect_file_copies(changeset):
        post = cache.file_at(changeset.commit_id, dst_path)
        if post is None:
            continue
        for m in post.methods:
            if not m.has_body:
                continue
            src = rename_map.resolve(MethodId(src_path, m.signature))
            dst = rename_map.resolve(MethodId(dst_path, m.signature))
            if src is None or dst is None or dst not in head_methods:
                continue
            out.append((src, dst))
    out.sort()
    return out


def changes_to_edit_events(
    changeset: Changeset,
    rename_map: RenameMap,
    cache: BlobCache,
    head_methods: set[MethodId],
    weight: float = 1.0,
) -> list[EditEvent]:
    """One event per (method, hunk) overlap, resolved to surviving identities.

    Hunks in newly added files are not edits and emit nothing; pure deletions
    map against the pre-image, everything else against the post-image. Events
    whose method does not resolve to a HEAD method are dropped.
    """
    events: list[EditEvent] = []
    for fd in changeset.file_diffs:
        if fd.kind == "A" or not _is_java(fd):
            continue
        post_jf = cache.file_at(changeset.commit_id, fd.path_after) if fd.path_after else None
        pre_jf = cache.file_at(changeset.parent_id, fd.path_before) if fd.path_before else None
        for hunk in fd.hunks:
            if hunk.post_len > 0:
                jf, path = post_jf, fd.path_after
                lo, hi = hunk.post_start, hunk.post_start + hunk.post_len - 1
            else:
                jf, path = pre_jf, fd.path_before
                lo, hi = hunk.pre_start, hunk.pre_start + hunk.pre_len - 1
            if jf is None or path is None or not jf.ok:
                continue
            for m in jf.methods:
                if not m.has_body:
                    continue
                if m.decl_line <= hi and m.end_line >= lo:
                    resolved = rename_map.resolve(MethodId(path, m.signature))
                    if resolved is not None and resolved in head_methods:
                        events.append(EditEvent(resolved, changeset.ordinal, weight))
    return events
