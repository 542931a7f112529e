"""Acceptance sweep: one test per shipped guarantee, end to end.

Each test is a single pass/fail line under `pytest -v`. Fixture repos come
from gitfix via conftest; expected numbers are frozen from independent hand
computation over those histories.
"""

import random
import shutil
import time

import pytest

from relevel import pipeline
from relevel.doi import InterestModel
from relevel.errors import ConfigError
from relevel.heuristics import RunConfig, build_partition, ideal_direction
from relevel.profiles import DEFAULT_CATEGORY_LEVELS, JUL, SLF4J, FrameworkProfile
from relevel.report import build_report, render_json
from relevel.rewrite import apply_edits, apply_to_tree, group_by_path, reverse_edits

PROFILES = [JUL, SLF4J]
CATEGORIES_ON = RunConfig(category_levels=DEFAULT_CATEGORY_LEVELS)
DEFAULTS = RunConfig()


@pytest.fixture(scope="module")
def wombat(wombat_repo):
    return pipeline.run(wombat_repo, CATEGORIES_ON, PROFILES)


@pytest.fixture(scope="module")
def service(service_repo):
    return pipeline.run(service_repo, DEFAULTS, PROFILES)


@pytest.fixture(scope="module")
def telemetry(telemetry_repo):
    return pipeline.run(telemetry_repo, DEFAULTS, PROFILES)


@pytest.fixture(scope="module")
def workers(worker_repos):
    renamed, control = worker_repos
    return (
        pipeline.run(renamed, DEFAULTS, PROFILES),
        pipeline.run(control, DEFAULTS, PROFILES),
    )


@pytest.fixture(scope="module")
def copyshop(copyshop_repo):
    return pipeline.run(copyshop_repo, DEFAULTS, PROFILES)


@pytest.fixture(scope="module")
def every_run(wombat, service, telemetry, workers, copyshop, wombat_repo,
              service_repo, telemetry_repo, worker_repos, copyshop_repo):
    """(result, repo, config) for each fixture, for fleet-wide properties."""
    return [
        (wombat, wombat_repo, CATEGORIES_ON),
        (service, service_repo, DEFAULTS),
        (telemetry, telemetry_repo, DEFAULTS),
        (workers[0], worker_repos[0], DEFAULTS),
        (workers[1], worker_repos[1], DEFAULTS),
        (copyshop, copyshop_repo, DEFAULTS),
    ]


def transform_sites(result):
    return {(m.statement.path, m.statement.line) for m in result.transforms}


def decision_for(result, needle):
    hits = [(m, d) for m, d in result.decisions if needle in m.statement.message]
    assert len(hits) == 1, f"{needle!r} matched {len(hits)} decisions"
    return hits[0]


# ---------------------------------------------------------------------------
# 1. Wombat end to end
# ---------------------------------------------------------------------------


def test_01_wombat_end_to_end(wombat_repo):
    started = time.perf_counter()
    result = pipeline.run(wombat_repo, CATEGORIES_ON, PROFILES)
    elapsed = time.perf_counter() - started

    by_line = {m.statement.line: m for m in result.transforms}
    assert sorted(by_line) == [15, 19, 35]
    for line in (15, 19):  # both setTemp trace logs climb
        assert by_line[line].current == "FINER"
        assert by_line[line].target == "FINE"
        assert by_line[line].direction == "raise"
    assert by_line[35].current == "FINE"
    assert by_line[35].target == "FINEST"
    assert by_line[35].direction == "lower"

    untouched = {38, 39}  # the SEVERE and INFO logs in the catch block
    assert untouched.isdisjoint(by_line)
    assert elapsed < 5.0


# ---------------------------------------------------------------------------
# 2. Interest model vs. brute-force replay
# ---------------------------------------------------------------------------


def replayed_value(elements, weights, decay, element):
    """Literal one-pass reading of the interest definition for one element."""
    seen = False
    worth = 0.0
    idle = 0
    for elem, w in zip(elements, weights):
        if elem == element:
            seen = True
            worth += w
        elif seen:
            idle += 1
    if not seen:
        return 0.0
    return max(0.0, worth - decay * idle)


def test_02_interest_matches_bruteforce_on_random_streams():
    rng = random.Random(0xD01)
    for _ in range(1000):
        n_elems = rng.randint(1, 50)
        n_events = rng.randint(0, 500)
        decay = rng.choice([0.0, 0.001, 0.017])
        model = InterestModel(decay=decay)
        elements = []
        weights = []
        for _ in range(n_events):
            elem = rng.randrange(n_elems)
            w = rng.choice((None, None, None, 0.5, 2.0))
            model.record_edit(elem, w)
            elements.append(elem)
            weights.append(1.0 if w is None else w)
        for x in range(n_elems):
            assert model.value(x) == replayed_value(elements, weights, decay, x)


# ---------------------------------------------------------------------------
# 3. Partition geometry
# ---------------------------------------------------------------------------


def test_03_partition_geometry_on_random_ranges(telemetry):
    rng = random.Random(0xB1D)
    for _ in range(250):
        k = rng.randint(2, 8)
        m = rng.uniform(-50.0, 50.0)
        big = m + rng.uniform(1e-6, 100.0)
        profile = FrameworkProfile(
            name="scale", levels=tuple(f"L{i}" for i in range(k))
        )
        tracked = {0: m, 1: big}
        for extra in range(2, 2 + rng.randint(0, 5)):
            tracked[extra] = rng.uniform(m, big)
        table = build_partition(profile, tracked, DEFAULTS)
        assert not table.degenerate

        # equal widths, adjacent, covering [m, big]
        for i, level in enumerate(profile.levels):
            lo, hi = table.interval_of(level)
            assert abs((hi - lo) - table.step) <= 1e-9
            if i + 1 < k:
                assert hi == table.interval_of(profile.levels[i + 1])[0]
        assert table.interval_of(profile.levels[0])[0] == m
        assert abs(table.interval_of(profile.levels[-1])[1] - big) <= 1e-9

        # lookup is monotone, hits the ends, and lands in its own interval
        samples = sorted([rng.uniform(m, big) for _ in range(20)] + [m, big])
        indices = [profile.levels.index(table.target_for(v)) for v in samples]
        assert indices == sorted(indices)
        assert table.target_for(m) == profile.levels[0]
        assert table.target_for(big) == profile.levels[-1]
        for v, idx in zip(samples, indices):
            lo, hi = table.interval_of(profile.levels[idx])
            assert lo - 1e-9 <= v <= hi + 1e-9

    # no spread, nothing to rank: every statement is left alone
    flat = build_partition(JUL, {0: 3.3, 1: 3.3}, DEFAULTS)
    assert flat.degenerate and flat.target_for(3.3) is None
    assert all(t.degenerate for t in telemetry.tables.values())
    assert telemetry.mismatches == []


# ---------------------------------------------------------------------------
# 4. Ideal-direction decision table
# ---------------------------------------------------------------------------

# Decision rows: (bug, levels covered, raise-kw, lower-kw) -> ideal direction.
# None in a flag column means the row holds for either flag value.
_DIRECTION_ROWS = [
    (True, {"INFO"}, None, None, "none"),
    (True, {"FINEST", "FINER", "FINE"}, True, None, "raise"),
    (True, {"FINEST", "FINER", "FINE"}, False, None, "none"),
    (False, {"FINEST"}, None, None, "none"),
    (False, {"FINER", "FINE", "INFO"}, None, True, "none"),
    (False, {"FINER", "FINE", "INFO"}, None, False, "lower"),
]


def test_04_ideal_direction_reproduces_every_row():
    fired = [0] * len(_DIRECTION_ROWS)
    for level in ("FINEST", "FINER", "FINE", "INFO"):
        for bug in (False, True):
            for lower_kw in (False, True):
                for raise_kw in (False, True):
                    matches = [
                        i
                        for i, (b, levels, rk, lk, _) in enumerate(_DIRECTION_ROWS)
                        if b == bug
                        and level in levels
                        and (rk is None or rk == raise_kw)
                        and (lk is None or lk == lower_kw)
                    ]
                    assert len(matches) == 1, (level, bug, lower_kw, raise_kw)
                    fired[matches[0]] += 1
                    want = _DIRECTION_ROWS[matches[0]][4]
                    assert ideal_direction(level, bug, lower_kw, raise_kw) == want
    assert all(fired)  # every row exercised
    with pytest.raises(ConfigError):
        ideal_direction("WARNING", False, False, False)


# ---------------------------------------------------------------------------
# 5. Suppression heuristics on realistic shapes
# ---------------------------------------------------------------------------


def test_05_suppression_fixtures_and_count_invariant(service, every_run):
    wrapped, wrapped_d = decision_for(service, "cache warmed")
    assert not wrapped_d.transform and wrapped_d.reason == "cnds"

    caught, caught_d = decision_for(service, "cleanup after interrupt")
    assert caught.direction == "lower"
    assert not caught_d.transform and caught_d.reason == "ctch"
    branched, branched_d = decision_for(service, "verbose trace on")
    assert branched.direction == "lower"
    assert not branched_d.transform and branched_d.reason == "ifs"

    gated, gated_d = decision_for(service, "Node is not alive")
    assert gated_d.transform
    assert gated.direction == "raise"
    assert gated.target in DEFAULT_CATEGORY_LEVELS

    for result, _, _ in every_run:
        assert len(result.mismatches) == len(result.decisions)
        assert len(result.mismatches) == (
            len(result.transforms) + sum(result.suppressions.values())
        )
        report = build_report(result)
        assert report["mismatches"] == (
            report["trns"] + sum(report["suppressed"].values())
        )


# ---------------------------------------------------------------------------
# 6. Interest follows renames
# ---------------------------------------------------------------------------


def test_06_renamed_method_keeps_its_history(workers):
    renamed, control = workers

    def value_of(result, fragment):
        hits = {m: v for m, v in result.values.items() if fragment in m.signature}
        assert len(hits) == 1
        return hits.popitem()[1]

    assert not any(".process(" in m.signature for m in renamed.values)
    assert value_of(renamed, ".handle(") == value_of(control, ".handle(")
    assert value_of(renamed, ".handle(") == 1.999  # two edits, one idle event
    assert value_of(renamed, ".other(") == value_of(control, ".other(")


# ---------------------------------------------------------------------------
# 7. Rewrites are reversible and settle
# ---------------------------------------------------------------------------

_LEVEL_VOCAB = (
    set(JUL.levels)
    | set(SLF4J.levels)
    | set(JUL.convenience)
    | set(SLF4J.convenience)
)


def test_07_rewrite_roundtrip_on_every_fixture(every_run, tmp_path):
    edited_fixtures = 0
    for result, repo, config in every_run:
        for edit in result.edits:
            assert edit.original in _LEVEL_VOCAB
            assert edit.replacement in _LEVEL_VOCAB
        for path, edits in group_by_path(result.edits).items():
            before = result.scan.files[path].source
            after = apply_edits(before, edits)
            changed = [
                (a, b)
                for a, b in zip(before.splitlines(), after.splitlines())
                if a != b
            ]
            assert len(changed) == len({e.span for e in edits})
            for old_line, new_line in changed:
                diffs = [
                    (a, b)
                    for a, b in zip(old_line.split(), new_line.split())
                    if a != b
                ]
                assert len(diffs) == 1  # a single token moved per line
            assert apply_edits(after, reverse_edits(edits)) == before

        if not result.edits:
            continue
        edited_fixtures += 1
        workdir = tmp_path / result.subject
        shutil.copytree(repo, workdir)
        apply_to_tree(workdir, result.edits)
        settled = pipeline.run(workdir, config, PROFILES)
        assert transform_sites(settled).isdisjoint(transform_sites(result))
    assert edited_fixtures >= 4  # wombat, service, both workers, copyshop


# ---------------------------------------------------------------------------
# 8. Unreadable levels are counted, not guessed
# ---------------------------------------------------------------------------


def test_08_variable_level_counts_as_failure_not_mismatch(telemetry):
    report = build_report(telemetry)
    assert report["logs"] == 2
    assert report["fails"] == 1
    assert report["mismatches"] == 0
    unresolved = [st for st in telemetry.scan.statements if st.level is None]
    assert len(unresolved) == 1
    assert all(m.statement.level is not None for m in telemetry.mismatches)


# ---------------------------------------------------------------------------
# 9. Level spread widens on the flagship fixture
# ---------------------------------------------------------------------------


def test_09_spread_is_reported_and_grows(wombat):
    report = build_report(wombat)
    assert report["sigma_pre"] == 1.57619
    assert report["sigma_post"] == 1.653595
    assert report["sigma_post"] > report["sigma_pre"]


# ---------------------------------------------------------------------------
# 10. Byte-identical reruns
# ---------------------------------------------------------------------------


def test_10_reruns_render_identical_reports(every_run):
    for result, repo, config in every_run:
        again = pipeline.run(repo, config, PROFILES)
        first = render_json(build_report(result)).encode()
        second = render_json(build_report(again)).encode()
        assert first == second
