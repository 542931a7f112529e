"""Degree-of-interest bookkeeping over an edit event stream.

Each element earns a configurable worth per own edit and loses a small decay
amount for every event in the stream that is not its own. The model stores
per-element counters instead of replaying history, so reading a value is a
closed-form computation:

    value(x) = max(0, worth(x) + seed(x) - decay * idle(x))

where idle(x) is the number of events since x first appeared that did not
touch x. Copied elements start with the source's current value as seed.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable
from dataclasses import dataclass

from .errors import ConfigError

DEFAULT_DECAY = 0.001
DEFAULT_EDIT_WEIGHT = 1.0


@dataclass
class InterestState:
    own: float = 0.0  # raw own-event count
    worth: float = 0.0  # weighted own-event total
    offset: float = 0.0  # stream length at first appearance
    seed: float = 0.0  # inherited interest at copy time


class InterestModel:
    """Event-count interest with linear decay and copy seeding."""

    def __init__(
        self,
        decay: float = DEFAULT_DECAY,
        edit_weight: float = DEFAULT_EDIT_WEIGHT,
    ):
        if decay < 0:
            raise ConfigError(f"decay must be non-negative, got {decay}")
        if edit_weight < 0:
            raise ConfigError(f"edit weight must be non-negative, got {edit_weight}")
        self.decay = decay
        self.edit_weight = edit_weight
        self.total = 0  # events recorded so far
        self._states: dict[Hashable, InterestState] = {}

    def record_edit(self, element: Hashable, weight: float | None = None) -> None:
        w = self.edit_weight if weight is None else weight
        st = self._states.get(element)
        if st is None:
            st = InterestState(offset=self.total)
            self._states[element] = st
        st.own += 1
        st.worth += w
        self.total += 1

    def seed_copy(self, source: Hashable, copy: Hashable) -> None:
        """Give a fresh copy the source's current value as starting interest.

        A copy that already has state keeps it; the first identity wins.
        """
        if copy in self._states:
            return
        self._states[copy] = InterestState(offset=self.total, seed=self.value(source))

    def value(self, element: Hashable) -> float:
        st = self._states.get(element)
        if st is None:
            return 0.0
        idle = self.total - st.offset - st.own
        return max(0.0, st.worth + st.seed - self.decay * idle)

    def values(self, elements: Iterable[Hashable] | None = None) -> dict[Hashable, float]:
        if elements is None:
            return {e: self.value(e) for e in self._states}
        return {e: self.value(e) for e in elements}

    def seen(self, element: Hashable) -> bool:
        return element in self._states
