"""Extraction of logging statements and their syntactic context.

A call site counts as a logging statement when its receiver looks like a
logger (the last receiver segment contains "log") and the invoked method
belongs to an enabled framework profile, either as a convenience method
(logger.fine(...)) or as the standard entry point with an explicit level
argument (logger.log(Level.FINE, ...)). Each statement carries the byte span
of the token a rewrite would replace, plus flags describing where it sits:
inside a catch block, first in a branch body, under a level guard, or in a
method participating in project-local override relations.
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .javasrc import CallSite, JavaFile, MethodDecl, Token, decode_source, parse_java
from .mining import MethodId
from .profiles import FrameworkProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContextFlags:
    in_catch: bool = False
    first_in_branch: bool = False
    level_guarded: bool = False
    overrides: tuple[MethodId, ...] = ()  # counterpart methods up/down the hierarchy


@dataclass(frozen=True)
class LoggingStatement:
    path: str
    method: MethodId
    profile: FrameworkProfile
    level: str | None  # None when the level argument cannot be resolved
    level_span: tuple[int, int] | None  # token to replace on rewrite
    uses_convenience: bool  # replacement is a method name, not a level literal
    message: str  # concatenated string literal content of all arguments
    line: int
    call_span: tuple[int, int]
    flags: ContextFlags = field(default_factory=ContextFlags)

    @property
    def resolvable(self) -> bool:
        return self.level is not None


@dataclass
class ProjectScan:
    files: dict[str, JavaFile]
    methods: dict[MethodId, MethodDecl]  # bodied methods in parseable files
    statements: list[LoggingStatement]
    parse_failures: list[str]

    @property
    def total_lines(self) -> int:
        return sum(jf.source.count("\n") + 1 for jf in self.files.values() if jf.source)


# ---------------------------------------------------------------------------
# Level argument parsing
# ---------------------------------------------------------------------------


def _literal_content(tok: Token) -> str:
    text = tok.text
    if tok.kind != "string":
        return ""
    if text.startswith('"""') and text.endswith('"""') and len(text) >= 6:
        return text[3:-3]
    if len(text) >= 2:
        return text[1:-1]
    return ""


def _collect_literals(call: CallSite) -> str:
    parts = []
    for arg in call.args:
        for tok in arg:
            if tok.kind == "string":
                parts.append(_literal_content(tok))
    return "".join(parts)


def _find_level_token(arg: tuple[Token, ...], profile: FrameworkProfile) -> Token | None:
    """Level name token in one argument, or None.

    Accepts the profile's qualified form (Level.FINE, possibly with a longer
    package prefix before it) and a single bare identifier brought in by a
    static import.
    """
    prefix_parts = [p for p in profile.level_prefix.split(".") if p]
    if len(arg) == 1 and arg[0].kind == "ident" and arg[0].text in profile.levels:
        return arg[0]
    if not prefix_parts:
        return None
    for i, t in enumerate(arg):
        if t.kind != "ident" or t.text != prefix_parts[0]:
            continue
        j = i
        matched = True
        for part in prefix_parts[1:]:
            j = _next_after_dot(arg, j)
            if j is None or arg[j].text != part:
                matched = False
                break
        if not matched:
            continue
        k = _next_after_dot(arg, j)
        if k is not None and arg[k].kind == "ident" and arg[k].text in profile.levels:
            return arg[k]
    return None


def _next_after_dot(arg: tuple[Token, ...], i: int) -> int | None:
    if i + 2 < len(arg) and arg[i + 1].text == ".":
        return i + 2
    return None


def _looks_like_logger(receiver: str) -> bool:
    if not receiver:
        return False
    return "log" in receiver.split(".")[-1].lower()


def _classify_call(
    call: CallSite, profiles: list[FrameworkProfile]
) -> tuple[FrameworkProfile, str | None, tuple[int, int] | None, bool] | None:
    """(profile, level, level_span, uses_convenience) or None for non-logging."""
    if not _looks_like_logger(call.receiver):
        return None
    for p in profiles:
        if call.name in p.convenience:
            return p, p.convenience[call.name], (call.name_start, call.name_end), True
    standard = [p for p in profiles if call.name == p.standard_method]
    if not standard:
        return None
    for p in standard:
        for arg in call.args:
            tok = _find_level_token(arg, p)
            if tok is not None:
                return p, tok.text, (tok.start, tok.end), False
    # standard entry point, but the level is held in a variable or expression
    return standard[0], None, None, False


# ---------------------------------------------------------------------------
# Context flags
# ---------------------------------------------------------------------------


def _guard_pattern(profiles: list[FrameworkProfile]) -> re.Pattern[str]:
    names = sorted({lvl for p in profiles for lvl in p.levels})
    alternatives = [r"\bisLoggable\b", r"\bis\w*Enabled\b"]
    if names:
        alternatives.append(r"\b(?:%s)\b" % "|".join(re.escape(n) for n in names))
    return re.compile("|".join(alternatives), re.IGNORECASE)


def _context_flags(
    jf: JavaFile,
    call: CallSite,
    guard_re: re.Pattern[str],
    related: tuple[MethodId, ...],
) -> ContextFlags:
    offset = call.span[0]
    branch = jf.branch_at(offset)
    first = branch is not None and branch.first_stmt == offset
    guarded = any(
        b.condition and guard_re.search(b.condition)
        for b in jf.branches
        if b.body_start <= offset < b.body_end
    )
    return ContextFlags(
        in_catch=jf.in_catch(offset),
        first_in_branch=first,
        level_guarded=guarded,
        overrides=related,
    )


# ---------------------------------------------------------------------------
# Project-local type hierarchy
# ---------------------------------------------------------------------------


class TypeGraph:
    """Override relations across the types declared in the scanned files.

    Supertype names are resolved by simple name against the project's own
    declarations; anything external is ignored. Methods match by name plus
    textual parameter list, falling back to name plus arity when the spelling
    of a parameter type differs between files.
    """

    def __init__(self, files: dict[str, JavaFile]):
        self._methods: dict[tuple[str, str], list[MethodDecl]] = {}
        by_simple: dict[str, list[tuple[str, str]]] = defaultdict(list)
        decls: dict[tuple[str, str], tuple[str, ...]] = {}
        for path in sorted(files):
            jf = files[path]
            if not jf.ok:
                continue
            for t in jf.types:
                key = (path, t.name)
                decls[key] = t.supertypes
                by_simple[t.name.split(".")[-1]].append(key)
                self._methods[key] = []
            for m in jf.methods:
                key = (path, m.type_name)
                if key in self._methods and not m.is_ctor:
                    self._methods[key].append(m)
        self._up: dict[tuple[str, str], list[tuple[str, str]]] = defaultdict(list)
        self._down: dict[tuple[str, str], list[tuple[str, str]]] = defaultdict(list)
        for key, supers in decls.items():
            for sup in supers:
                for target in by_simple.get(sup.split(".")[-1], []):
                    if target != key:
                        self._up[key].append(target)
                        self._down[target].append(key)

    def _reachable(self, key: tuple[str, str], edges) -> list[tuple[str, str]]:
        seen = {key}
        queue = list(edges.get(key, []))
        out = []
        while queue:
            cur = queue.pop(0)
            if cur in seen:
                continue
            seen.add(cur)
            out.append(cur)
            queue.extend(edges.get(cur, []))
        return out

    def related_methods(self, path: str, m: MethodDecl) -> tuple[MethodId, ...]:
        key = (path, m.type_name)
        relatives = self._reachable(key, self._up) + self._reachable(key, self._down)
        out = []
        for rpath, rtype in relatives:
            candidates = [c for c in self._methods.get((rpath, rtype), []) if c.name == m.name]
            exact = [c for c in candidates if c.params == m.params]
            if not exact:
                exact = [c for c in candidates if len(c.params) == len(m.params)]
            out.extend(MethodId(rpath, c.signature) for c in exact)
        return tuple(sorted(set(out)))


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


def extract_statements(
    jf: JavaFile,
    profiles: list[FrameworkProfile],
    graph: TypeGraph | None = None,
    guard_re: re.Pattern[str] | None = None,
) -> list[LoggingStatement]:
    """Logging statements of one parsed file, in source order."""
    if guard_re is None:
        guard_re = _guard_pattern(profiles)
    out = []
    for call in jf.calls:
        classified = _classify_call(call, profiles)
        if classified is None:
            continue
        profile, level, span, convenience = classified
        m = jf.method_at(call.span[0])
        if m is None:
            continue  # field initializer or static block; nothing to track
        mid = MethodId(jf.path, m.signature)
        related = graph.related_methods(jf.path, m) if graph is not None else ()
        out.append(
            LoggingStatement(
                path=jf.path,
                method=mid,
                profile=profile,
                level=level,
                level_span=span,
                uses_convenience=convenience,
                message=_collect_literals(call),
                line=call.line,
                call_span=call.span,
                flags=_context_flags(jf, call, guard_re, related),
            )
        )
    return out


def scan_files(files: dict[str, JavaFile], profiles: list[FrameworkProfile]) -> ProjectScan:
    if not profiles:
        raise ConfigError("at least one framework profile must be enabled")
    graph = TypeGraph(files)
    guard_re = _guard_pattern(profiles)
    methods: dict[MethodId, MethodDecl] = {}
    statements: list[LoggingStatement] = []
    failures: list[str] = []
    for path in sorted(files):
        jf = files[path]
        if not jf.ok:
            failures.append(path)
            logger.warning("could not parse %s; its methods are not tracked", path)
            continue
        for m in jf.methods:
            if m.has_body:
                methods[MethodId(path, m.signature)] = m
        statements.extend(extract_statements(jf, profiles, graph, guard_re))
    return ProjectScan(files=files, methods=methods, statements=statements, parse_failures=failures)


def scan_project(root, profiles: list[FrameworkProfile]) -> ProjectScan:
    """Parse every .java file under root and extract logging statements."""
    root = Path(root)
    files: dict[str, JavaFile] = {}
    for p in sorted(root.rglob("*.java")):
        if not p.is_file():
            continue
        rel = p.relative_to(root).as_posix()
        files[rel] = parse_java(rel, decode_source(p.read_bytes()))
    return scan_files(files, profiles)
