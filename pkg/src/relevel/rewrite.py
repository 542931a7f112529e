"""Token-level source rewriting for accepted transforms.

A transform replaces exactly one token: the convenience method name
(logger.finer -> logger.fine) or the level literal's name part
(Level.FINER -> Level.FINE), leaving qualification and formatting intact.
Edits are applied as an ordered splice, can be reversed, and can be rendered
as a unified diff without touching the working tree.
"""

from __future__ import annotations

import difflib
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path

from .errors import RewriteError
from .heuristics import Mismatch
from .javasrc import JavaFile


@dataclass(frozen=True)
class SourceEdit:
    path: str
    span: tuple[int, int]  # byte offsets into the decoded source
    replacement: str
    original: str  # text currently at span; validated before splicing


def edits_for_transforms(
    transforms: Iterable[Mismatch], files: Mapping[str, JavaFile]
) -> list[SourceEdit]:
    """One SourceEdit per transform, validated against the parsed source."""
    out: list[SourceEdit] = []
    for m in transforms:
        st = m.statement
        if st.level_span is None:
            raise RewriteError(f"{st.path}:{st.line}: transform without a level token")
        jf = files.get(st.path)
        if jf is None:
            raise RewriteError(f"{st.path}: no parsed source for transform")
        lo, hi = st.level_span
        original = jf.source[lo:hi]
        if st.uses_convenience:
            if st.profile.convenience.get(original) != m.current:
                raise RewriteError(
                    f"{st.path}:{st.line}: expected a {m.current} call, found {original!r}"
                )
            replacement = st.profile.method_for(m.target)
        else:
            if original != m.current:
                raise RewriteError(
                    f"{st.path}:{st.line}: expected literal {m.current}, found {original!r}"
                )
            replacement = m.target
        out.append(SourceEdit(st.path, (lo, hi), replacement, original))
    return out


def group_by_path(edits: Iterable[SourceEdit]) -> dict[str, list[SourceEdit]]:
    grouped: dict[str, list[SourceEdit]] = defaultdict(list)
    for e in edits:
        grouped[e.path].append(e)
    return {p: sorted(es, key=lambda e: e.span) for p, es in sorted(grouped.items())}


def apply_edits(source: str, edits: Iterable[SourceEdit]) -> str:
    """Splice edits into one file's source, earliest first.

    Overlapping spans and stale original text are hard errors; a rewrite must
    never silently clobber code it did not inspect.
    """
    pieces: list[str] = []
    pos = 0
    for e in sorted(edits, key=lambda e: e.span):
        lo, hi = e.span
        if lo < pos:
            raise RewriteError(f"{e.path}: overlapping edits at offset {lo}")
        if hi > len(source) or source[lo:hi] != e.original:
            raise RewriteError(
                f"{e.path}: source drifted at offset {lo}; expected {e.original!r}"
            )
        pieces.append(source[pos:lo])
        pieces.append(e.replacement)
        pos = hi
    pieces.append(source[pos:])
    return "".join(pieces)


def reverse_edits(edits: Iterable[SourceEdit]) -> list[SourceEdit]:
    """Edits that undo the given ones when applied to the edited text.

    Spans are shifted by the cumulative length drift of earlier replacements.
    """
    out: list[SourceEdit] = []
    delta = 0
    for e in sorted(edits, key=lambda e: e.span):
        lo, hi = e.span
        out.append(
            SourceEdit(
                path=e.path,
                span=(lo + delta, lo + delta + len(e.replacement)),
                replacement=e.original,
                original=e.replacement,
            )
        )
        delta += len(e.replacement) - (hi - lo)
    return out


def unified_diff_text(path: str, before: str, after: str) -> str:
    lines = difflib.unified_diff(
        before.splitlines(keepends=True),
        after.splitlines(keepends=True),
        fromfile=f"a/{path}",
        tofile=f"b/{path}",
    )
    return "".join(lines)


def render_diffs(files: Mapping[str, JavaFile], edits: Iterable[SourceEdit]) -> str:
    """Concatenated unified diffs for every touched file, path order."""
    chunks = []
    for path, file_edits in group_by_path(edits).items():
        jf = files[path]
        after = apply_edits(jf.source, file_edits)
        diff = unified_diff_text(path, jf.source, after)
        if diff:
            chunks.append(diff)
    return "".join(chunks)


def _decode_keeping_encoding(data: bytes) -> tuple[str, str]:
    try:
        return data.decode("utf-8"), "utf-8"
    except UnicodeDecodeError:
        return data.decode("latin-1"), "latin-1"


def apply_to_tree(root, edits: Iterable[SourceEdit]) -> list[str]:
    """Write rewrites into the working tree; returns the touched paths.

    Each file is re-read from disk so the original check in apply_edits
    guards against concurrent modification, and is written back in whatever
    encoding it was read with.
    """
    root = Path(root)
    touched = []
    for path, file_edits in group_by_path(edits).items():
        fs_path = root / path
        try:
            raw = fs_path.read_bytes()
        except OSError as exc:
            raise RewriteError(f"cannot read {path}: {exc}") from exc
        text, encoding = _decode_keeping_encoding(raw)
        new_text = apply_edits(text, file_edits)
        if new_text == text:
            continue
        fs_path.write_bytes(new_text.encode(encoding))
        touched.append(path)
    return touched
