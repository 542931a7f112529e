"""Logging framework profiles.

A profile describes one logging API well enough to find its statements in
source and rewrite their levels: the ordered level scale, the per-level
convenience methods (logger.finer(...)), the generic method that takes a
level argument (logger.log(Level.FINER, ...)), and the qualifier that marks
a level literal. Two profiles ship built in; more can be loaded from JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class FrameworkProfile:
    name: str
    levels: tuple[str, ...]  # ascending severity
    convenience: dict[str, str] = field(default_factory=dict)  # method -> level
    standard_method: str = "log"
    level_prefix: str = "Level."  # qualifier preceding a level literal

    def __post_init__(self) -> None:
        if len(self.levels) < 2:
            raise ConfigError(f"profile {self.name!r} needs at least two levels")
        bad = [lvl for lvl in self.convenience.values() if lvl not in self.levels]
        if bad:
            raise ConfigError(f"profile {self.name!r} maps methods to unknown levels {bad}")

    def index(self, level: str) -> int:
        try:
            return self.levels.index(level)
        except ValueError:
            raise ConfigError(f"level {level!r} is not on the {self.name} scale") from None

    def method_for(self, level: str) -> str | None:
        """First convenience method writing at the given level, if any."""
        for method, lvl in self.convenience.items():
            if lvl == level:
                return method
        return None


JUL = FrameworkProfile(
    name="jul",
    levels=("FINEST", "FINER", "FINE", "INFO", "WARNING", "SEVERE"),
    convenience={
        "finest": "FINEST",
        "finer": "FINER",
        "fine": "FINE",
        "info": "INFO",
        "warning": "WARNING",
        "severe": "SEVERE",
    },
)

SLF4J = FrameworkProfile(
    name="slf4j",
    levels=("TRACE", "DEBUG", "INFO", "WARN", "ERROR"),
    convenience={
        "trace": "TRACE",
        "debug": "DEBUG",
        "info": "INFO",
        "warn": "WARN",
        "error": "ERROR",
    },
)

BUILTIN_PROFILES: dict[str, FrameworkProfile] = {p.name: p for p in (JUL, SLF4J)}

# Levels treated as error categories rather than verbosity steps, when the
# category heuristic is enabled. One union set covers both built-in scales.
DEFAULT_CATEGORY_LEVELS = frozenset({"WARNING", "SEVERE", "WARN", "ERROR"})


def load_profiles(spec: str | None) -> list[FrameworkProfile]:
    """Resolve a --profiles value to an ordered profile list.

    Accepts a comma-separated list of built-in names, a path to a JSON file,
    or a mix of both (a token that names a readable file is loaded as JSON).
    None selects every built-in profile.
    """
    if spec is None:
        return [JUL, SLF4J]
    out: list[FrameworkProfile] = []
    for raw in spec.split(","):
        token = raw.strip()
        if not token:
            continue
        if token in BUILTIN_PROFILES:
            out.append(BUILTIN_PROFILES[token])
        elif Path(token).is_file():
            out.extend(load_profile_file(Path(token)))
        else:
            raise ConfigError(f"unknown profile {token!r} (not built in, not a file)")
    if not out:
        raise ConfigError("at least one framework profile must be enabled")
    seen: set[str] = set()
    for p in out:
        if p.name in seen:
            raise ConfigError(f"profile {p.name!r} enabled twice")
        seen.add(p.name)
    return out


def load_profile_file(path: Path) -> list[FrameworkProfile]:
    """Load one JSON profile file holding a profile object or a list of them."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read profile file {path}: {exc}") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ConfigError(f"profile file {path} must hold an object or a list")
    profiles = []
    for entry in data:
        try:
            profiles.append(
                FrameworkProfile(
                    name=entry["name"],
                    levels=tuple(entry["levels"]),
                    convenience=dict(entry.get("convenience", {})),
                    standard_method=entry.get("standard_method", "log"),
                    level_prefix=entry.get("level_prefix", "Level."),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed profile entry in {path}: {exc}") from exc
    return profiles
