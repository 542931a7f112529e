"""Interest partitioning, mismatch detection, and suppression heuristics.

The observed interest range of all tracked methods is split into as many
equal intervals as a profile has eligible levels; a logging statement whose
current level differs from its method's interval is a mismatch. Each mismatch
then runs a fixed sequence of suppression checks; the first one that fires
wins, otherwise the mismatch becomes a transform.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path

from .doi import DEFAULT_DECAY, DEFAULT_EDIT_WEIGHT
from .errors import ConfigError
from .logscan import LoggingStatement
from .mining import DEFAULT_MAX_COMMITS, MethodId
from .profiles import DEFAULT_CATEGORY_LEVELS, FrameworkProfile

RAISE = "raise"
LOWER = "lower"
NONE = "none"

DEFAULT_LOWER_KEYWORDS = ("fail", "disabl", "error", "exception")
DEFAULT_RAISE_KEYWORDS = ("stop", "shut", "kill", "dead", "not alive")

# suppression reason codes, in check order
SUPPRESS_CATEGORY = "ctgy"
SUPPRESS_CATCH = "ctch"
SUPPRESS_WRAPPING = "cnds"
SUPPRESS_BRANCH = "ifs"
SUPPRESS_KEYWORD_LOWER = "keyl"
SUPPRESS_KEYWORD_RAISE = "keyr"
SUPPRESS_INHERITANCE = "inh"
SUPPRESS_DISTANCE = "dst"

SUPPRESSION_CODES = (
    SUPPRESS_CATCH,
    SUPPRESS_BRANCH,
    SUPPRESS_WRAPPING,
    SUPPRESS_KEYWORD_LOWER,
    SUPPRESS_KEYWORD_RAISE,
    SUPPRESS_INHERITANCE,
    SUPPRESS_CATEGORY,
    SUPPRESS_DISTANCE,
)


@dataclass(frozen=True)
class RunConfig:
    decay: float = DEFAULT_DECAY
    edit_weight: float = DEFAULT_EDIT_WEIGHT
    max_commits: int = DEFAULT_MAX_COMMITS
    category_levels: frozenset[str] | None = None  # None: category filtering off
    protect_catch: bool = True
    protect_branch: bool = True
    wrapping_check: bool = True
    inheritance_check: bool = True
    keywords_lower: tuple[str, ...] = DEFAULT_LOWER_KEYWORDS
    keywords_raise: tuple[str, ...] = DEFAULT_RAISE_KEYWORDS
    max_distance: int | None = None  # None: unlimited

    @property
    def raise_gate(self) -> frozenset[str]:
        """Levels a raise may only enter with an explicit severity keyword."""
        if self.category_levels is not None:
            return self.category_levels
        return DEFAULT_CATEGORY_LEVELS


def load_keyword_file(path) -> tuple[str, ...]:
    """One keyword per line; blank lines and # comments are skipped."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read keyword file {path}: {exc}") from exc
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    if not words:
        raise ConfigError(f"keyword file {path} contains no keywords")
    return tuple(words)


def parse_category_levels(spec: str | None) -> frozenset[str]:
    """Category set from a comma list; empty or missing means the default."""
    if spec is None or not spec.strip():
        return DEFAULT_CATEGORY_LEVELS
    levels = frozenset(s.strip() for s in spec.split(",") if s.strip())
    if not levels:
        return DEFAULT_CATEGORY_LEVELS
    return levels


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


def eligible_levels(profile: FrameworkProfile, config: RunConfig) -> tuple[str, ...]:
    """Levels a partition may assign, ascending. Category levels are carved
    out of the scale when category filtering is on."""
    if config.category_levels is None:
        return profile.levels
    return tuple(l for l in profile.levels if l not in config.category_levels)


@dataclass(frozen=True)
class PartitionTable:
    profile: FrameworkProfile
    levels: tuple[str, ...]  # ascending target levels, one interval each
    low: float
    high: float
    degenerate: bool  # all tracked methods share one value; nothing to rank

    @property
    def step(self) -> float:
        return (self.high - self.low) / len(self.levels)

    def target_for(self, value: float) -> str | None:
        """Level whose interval contains value; the last interval is closed.

        None for a degenerate table: with no spread there is no ranking, so
        no statement is considered mismatched.
        """
        if self.degenerate:
            return None
        idx = int(math.floor((value - self.low) / self.step))
        idx = min(max(idx, 0), len(self.levels) - 1)
        return self.levels[idx]

    def interval_of(self, level: str) -> tuple[float, float]:
        i = self.levels.index(level)
        return (self.low + i * self.step, self.low + (i + 1) * self.step)


def build_partition(
    profile: FrameworkProfile,
    tracked_values: Mapping[MethodId, float],
    config: RunConfig,
) -> PartitionTable:
    levels = eligible_levels(profile, config)
    if len(levels) < 2:
        raise ConfigError(
            f"profile {profile.name}: fewer than two levels remain after "
            "category filtering; nothing can be partitioned"
        )
    if not tracked_values:
        return PartitionTable(profile, levels, 0.0, 0.0, degenerate=True)
    low = min(tracked_values.values())
    high = max(tracked_values.values())
    return PartitionTable(profile, levels, low, high, degenerate=(high == low))


def build_partitions(
    profiles: Iterable[FrameworkProfile],
    tracked_values: Mapping[MethodId, float],
    config: RunConfig,
) -> dict[str, PartitionTable]:
    return {p.name: build_partition(p, tracked_values, config) for p in profiles}


# ---------------------------------------------------------------------------
# Mismatches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    statement: LoggingStatement
    current: str
    target: str
    value: float  # the enclosing method's interest at HEAD
    distance: int  # levels moved on the profile scale

    @property
    def direction(self) -> str:
        p = self.statement.profile
        return RAISE if p.index(self.target) > p.index(self.current) else LOWER


def find_mismatches(
    statements: Iterable[LoggingStatement],
    values: Mapping[MethodId, float],
    tables: Mapping[str, PartitionTable],
    config: RunConfig,
) -> list[Mismatch]:
    """Statements whose level disagrees with their method's interval.

    Unresolvable statements never match; with category filtering on,
    statements already at a category level are left alone entirely.
    """
    out: list[Mismatch] = []
    for st in statements:
        if st.level is None:
            continue
        table = tables.get(st.profile.name)
        if table is None or table.degenerate:
            continue
        if config.category_levels is not None and st.level in config.category_levels:
            continue
        value = values.get(st.method, 0.0)
        target = table.target_for(value)
        if target is None or target == st.level:
            continue
        p = st.profile
        out.append(
            Mismatch(
                statement=st,
                current=st.level,
                target=target,
                value=value,
                distance=abs(p.index(target) - p.index(st.level)),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Suppression checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    action: str  # 'transform' | 'suppress'
    reason: str | None = None  # suppression code, None for transforms

    @property
    def transform(self) -> bool:
        return self.action == "transform"


def message_has(message: str, keywords: Iterable[str]) -> bool:
    lowered = message.lower()
    return any(k in lowered for k in keywords)


CohortTargets = Mapping[tuple[MethodId, str], str]


def decide(
    mismatch: Mismatch,
    config: RunConfig,
    cohort: CohortTargets | None = None,
) -> Decision:
    """Run the suppression checks in order; first hit wins.

    cohort maps (method id, profile name) to the proposed target of other
    mismatched methods, so the inheritance check can compare targets across
    an override family.
    """
    st = mismatch.statement
    flags = st.flags
    if config.category_levels is not None and mismatch.current in config.category_levels:
        return Decision("suppress", SUPPRESS_CATEGORY)
    if config.protect_catch and flags.in_catch:
        return Decision("suppress", SUPPRESS_CATCH)
    if config.wrapping_check and flags.level_guarded:
        return Decision("suppress", SUPPRESS_WRAPPING)
    if config.protect_branch and flags.first_in_branch:
        return Decision("suppress", SUPPRESS_BRANCH)
    if mismatch.direction == LOWER and message_has(st.message, config.keywords_lower):
        return Decision("suppress", SUPPRESS_KEYWORD_LOWER)
    if (
        mismatch.direction == RAISE
        and mismatch.target in config.raise_gate
        and not message_has(st.message, config.keywords_raise)
    ):
        return Decision("suppress", SUPPRESS_KEYWORD_RAISE)
    if config.inheritance_check and cohort and flags.overrides:
        key_profile = st.profile.name
        for other in flags.overrides:
            other_target = cohort.get((other, key_profile))
            if other_target is not None and other_target != mismatch.target:
                return Decision("suppress", SUPPRESS_INHERITANCE)
    if config.max_distance is not None and mismatch.distance > config.max_distance:
        return Decision("suppress", SUPPRESS_DISTANCE)
    return Decision("transform")


def cohort_targets(mismatches: Iterable[Mismatch]) -> dict[tuple[MethodId, str], str]:
    """Proposed target per (method, profile) over a mismatch list."""
    return {
        (m.statement.method, m.statement.profile.name): m.target for m in mismatches
    }


# ---------------------------------------------------------------------------
# Ideal direction for labeled bug contexts
# ---------------------------------------------------------------------------

_EVAL_SCALE = ("FINEST", "FINER", "FINE", "INFO")


def ideal_direction(
    orig_level: str,
    is_bug: bool,
    lower_triggered: bool,
    raise_keyword: bool,
) -> str:
    """What a labeled statement should have done, on the verbosity scale.

    Statements in buggy methods deserve a raise only when their message
    already signals severity; healthy methods drift down unless an anti-lower
    keyword anchors them. Levels outside the verbosity scale have no defined
    ideal.
    """
    if orig_level not in _EVAL_SCALE:
        raise ConfigError(f"no ideal direction defined for level {orig_level!r}")
    if is_bug:
        if orig_level == "INFO":
            return NONE
        return RAISE if raise_keyword else NONE
    if orig_level == "FINEST":
        return NONE
    return NONE if lower_triggered else LOWER
