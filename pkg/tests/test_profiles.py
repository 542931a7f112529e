"""Framework profile definitions and loading."""

import json

import pytest

from relevel.errors import ConfigError
from relevel.profiles import (
    BUILTIN_PROFILES,
    DEFAULT_CATEGORY_LEVELS,
    JUL,
    SLF4J,
    FrameworkProfile,
    load_profiles,
)


def test_builtin_scales_ascend_from_finest_to_severest():
    assert JUL.levels[0] == "FINEST"
    assert JUL.levels[-1] == "SEVERE"
    assert SLF4J.levels == ("TRACE", "DEBUG", "INFO", "WARN", "ERROR")


def test_builtin_convenience_methods_cover_the_scale():
    assert set(JUL.convenience.values()) == set(JUL.levels)
    assert set(SLF4J.convenience.values()) == set(SLF4J.levels)


def test_default_categories_union_both_scales():
    assert DEFAULT_CATEGORY_LEVELS == {"WARNING", "SEVERE", "WARN", "ERROR"}


def test_index_and_method_for():
    assert JUL.index("FINEST") == 0
    assert JUL.index("SEVERE") == 5
    assert JUL.method_for("FINER") == "finer"
    assert JUL.method_for("NOPE") is None
    with pytest.raises(ConfigError):
        JUL.index("TRACE")


def test_profile_validation():
    with pytest.raises(ConfigError, match="at least two levels"):
        FrameworkProfile(name="tiny", levels=("ONLY",))
    with pytest.raises(ConfigError, match="unknown levels"):
        FrameworkProfile(name="odd", levels=("A", "B"), convenience={"c": "C"})


def test_load_profiles_defaults_to_all_builtins():
    assert load_profiles(None) == [JUL, SLF4J]
    assert list(BUILTIN_PROFILES) == ["jul", "slf4j"]


def test_load_profiles_by_name_preserves_order():
    assert load_profiles("slf4j,jul") == [SLF4J, JUL]
    assert load_profiles(" jul ") == [JUL]


def test_load_profiles_rejects_unknown_duplicate_and_empty():
    with pytest.raises(ConfigError, match="unknown profile"):
        load_profiles("log5j")
    with pytest.raises(ConfigError, match="enabled twice"):
        load_profiles("jul,jul")
    with pytest.raises(ConfigError, match="at least one"):
        load_profiles(",")


def test_load_profiles_from_json_file(tmp_path):
    custom = {
        "name": "tinylog",
        "levels": ["DEBUG", "INFO", "ERROR"],
        "convenience": {"debug": "DEBUG"},
        "level_prefix": "Lvl.",
    }
    path = tmp_path / "tinylog.json"
    path.write_text(json.dumps(custom), encoding="utf-8")
    loaded = load_profiles(f"jul,{path}")
    assert [p.name for p in loaded] == ["jul", "tinylog"]
    assert loaded[1].levels == ("DEBUG", "INFO", "ERROR")
    assert loaded[1].standard_method == "log"
    assert loaded[1].level_prefix == "Lvl."


def test_load_profile_file_accepts_a_list(tmp_path):
    entries = [
        {"name": "a", "levels": ["L", "H"]},
        {"name": "b", "levels": ["L", "H"]},
    ]
    path = tmp_path / "two.json"
    path.write_text(json.dumps(entries), encoding="utf-8")
    assert [p.name for p in load_profiles(str(path))] == ["a", "b"]


def test_load_profile_file_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="cannot read profile file"):
        load_profiles(str(bad))
    scalar = tmp_path / "scalar.json"
    scalar.write_text("42", encoding="utf-8")
    with pytest.raises(ConfigError, match="object or a list"):
        load_profiles(str(scalar))
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"levels": ["L", "H"]}), encoding="utf-8")
    with pytest.raises(ConfigError, match="malformed profile entry"):
        load_profiles(str(missing))
