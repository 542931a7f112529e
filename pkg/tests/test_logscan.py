"""Logging statement extraction: classification, context flags, type graph."""

import pytest

from relevel.errors import ConfigError
from relevel.javasrc import parse_java
from relevel.logscan import extract_statements, scan_files, scan_project
from relevel.mining import MethodId
from relevel.profiles import JUL, SLF4J


def parse(source, path="t/T.java"):
    jf = parse_java(path, source)
    assert jf.ok
    return jf


def stmts(source, profiles=None):
    return extract_statements(parse(source), profiles or [JUL, SLF4J])


def one(source, profiles=None):
    found = stmts(source, profiles)
    assert len(found) == 1
    return found[0]


def wrap(body):
    return "class T {\n    java.util.logging.Logger logger;\n    void f() {\n%s\n    }\n}\n" % body


# ---------------------------------------------------------------------------
# Call classification
# ---------------------------------------------------------------------------


def test_convenience_call():
    st = one(wrap('        logger.finer("slow path");'))
    assert st.profile is JUL
    assert st.level == "FINER"
    assert st.uses_convenience
    assert st.message == "slow path"
    assert st.method == MethodId("t/T.java", "T.f()")
    jf = parse(wrap('        logger.finer("slow path");'))
    assert jf.source[st.level_span[0] : st.level_span[1]] == "finer"


def test_standard_call_with_qualified_level():
    src = wrap('        logger.log(Level.FINE, "msg " + x, err);')
    st = one(src)
    assert st.level == "FINE"
    assert not st.uses_convenience
    assert parse(src).source[st.level_span[0] : st.level_span[1]] == "FINE"


def test_standard_call_with_long_package_prefix():
    st = one(wrap('        logger.log(java.util.logging.Level.WARNING, "w");'))
    assert st.level == "WARNING"


def test_standard_call_with_static_import_level():
    st = one(wrap('        logger.log(FINEST, "deep");'))
    assert st.level == "FINEST"


def test_variable_level_is_unresolvable():
    st = one(wrap('        logger.log(chosen, "who knows");'))
    assert st.level is None
    assert st.level_span is None
    assert not st.resolvable


def test_level_from_foreign_scale_is_unresolvable():
    st = one(wrap('        logger.log(Level.DEBUG, "not jul");'), profiles=[JUL])
    assert st.level is None


def test_non_logger_receivers_ignored():
    assert stmts(wrap('        helper.fine("nope");')) == []
    assert stmts(wrap('        data.log(Level.FINE, "nope");')) == []


def test_receiver_match_is_case_insensitive_last_segment():
    assert one(wrap('        LOG.warning("w");')).level == "WARNING"
    assert one(wrap('        this.myLogger.severe("s");')).level == "SEVERE"


def test_profile_order_breaks_convenience_ties():
    src = wrap('        logger.info("shared name");')
    assert one(src, profiles=[JUL, SLF4J]).profile is JUL
    assert one(src, profiles=[SLF4J, JUL]).profile is SLF4J


def test_message_concatenates_literals_across_args():
    st = one(wrap('        logger.log(Level.FINE, "a " + n + "b", "tail");'))
    assert st.message == "a btail"
    assert one(wrap("        logger.fine(String.valueOf(n));")).message == ""


def test_field_initializer_calls_are_skipped():
    src = (
        "class T {\n"
        '    String banner = logger.log(Level.FINE, "boot");\n'
        '    void f() { logger.fine("in method"); }\n'
        "}\n"
    )
    found = stmts(src)
    assert [s.message for s in found] == ["in method"]


# ---------------------------------------------------------------------------
# Context flags
# ---------------------------------------------------------------------------


def test_catch_flag():
    src = wrap(
        "        try {\n"
        '            logger.fine("inside try");\n'
        "        } catch (RuntimeException e) {\n"
        '            logger.severe("inside catch");\n'
        "        }"
    )
    in_try, in_catch = stmts(src)
    assert not in_try.flags.in_catch
    assert in_catch.flags.in_catch


def test_first_in_branch_flag():
    src = wrap(
        "        if (x > 0) {\n"
        '            logger.fine("first");\n'
        '            logger.fine("second");\n'
        "        } else\n"
        '            logger.fine("braceless else");'
    )
    first, second, braceless = stmts(src)
    assert first.flags.first_in_branch
    assert not second.flags.first_in_branch
    assert braceless.flags.first_in_branch


def test_switch_case_counts_as_branch_but_loops_do_not():
    src = wrap(
        "        switch (x) {\n"
        "        case 1:\n"
        '            logger.fine("case body");\n'
        "            break;\n"
        "        }\n"
        "        while (x > 0)\n"
        '            logger.fine("loop body");'
    )
    case_stmt, loop_stmt = stmts(src)
    assert case_stmt.flags.first_in_branch
    assert not loop_stmt.flags.first_in_branch


def test_level_guard_detection():
    src = wrap(
        "        if (logger.isLoggable(Level.FINE)) {\n"
        '            logger.fine("guarded");\n'
        "        }\n"
        "        if (logger.isDebugEnabled())\n"
        '            logger.fine("also guarded");\n'
        "        if (mode == Mode.FINE) {\n"
        '            logger.fine("level name in condition");\n'
        "        }\n"
        "        if (verbose) {\n"
        '            logger.fine("not guarded");\n'
        "        }"
    )
    a, b, c, d = stmts(src)
    assert a.flags.level_guarded
    assert b.flags.level_guarded
    assert c.flags.level_guarded
    assert not d.flags.level_guarded


def test_guard_in_outer_branch_still_counts():
    src = wrap(
        "        if (logger.isLoggable(Level.FINER)) {\n"
        "            if (x > 0) {\n"
        "                prep(x);\n"
        '                logger.finer("nested but guarded");\n'
        "            }\n"
        "        }"
    )
    st = one(src)
    assert st.flags.level_guarded
    assert not st.flags.first_in_branch  # second statement of the inner body


def test_guard_must_be_a_whole_word():
    st = one(wrap('        if (x > FINEST_LIMIT) { logger.fine("m"); }'))
    assert not st.flags.level_guarded


# ---------------------------------------------------------------------------
# Override relations
# ---------------------------------------------------------------------------

BASE = """\
class Base {
    java.util.logging.Logger logger;
    void work(int n) { logger.fine("base work"); }
    void solo() { logger.fine("solo"); }
}
"""

SUB = """\
class Sub extends Base {
    java.util.logging.Logger logger;
    void work(int n) { logger.info("sub work"); }
}
"""

LEAF = """\
class Leaf extends Sub {
    java.util.logging.Logger logger;
    void work(int n) { logger.severe("leaf work"); }
}
"""


def scan_sources(**sources):
    files = {path: parse_java(path, text) for path, text in sources.items()}
    return scan_files(files, [JUL])


def by_message(scan):
    return {st.message: st for st in scan.statements}


def test_override_pairs_are_symmetric():
    scan = scan_sources(**{"a/Base.java": BASE, "a/Sub.java": SUB})
    got = by_message(scan)
    assert got["base work"].flags.overrides == (MethodId("a/Sub.java", "Sub.work(int)"),)
    assert got["sub work"].flags.overrides == (MethodId("a/Base.java", "Base.work(int)"),)
    assert got["solo"].flags.overrides == ()


def test_override_closure_is_transitive():
    scan = scan_sources(
        **{"a/Base.java": BASE, "a/Sub.java": SUB, "a/Leaf.java": LEAF}
    )
    got = by_message(scan)
    assert got["leaf work"].flags.overrides == (
        MethodId("a/Base.java", "Base.work(int)"),
        MethodId("a/Sub.java", "Sub.work(int)"),
    )
    assert got["base work"].flags.overrides == (
        MethodId("a/Leaf.java", "Leaf.work(int)"),
        MethodId("a/Sub.java", "Sub.work(int)"),
    )


def test_override_matching_falls_back_to_arity():
    base = (
        "class Base {\n"
        "    java.util.logging.Logger logger;\n"
        '    void emit(java.lang.String s) { logger.fine("base emit"); }\n'
        "}\n"
    )
    sub = (
        "class Sub extends Base {\n"
        "    java.util.logging.Logger logger;\n"
        '    void emit(String s) { logger.fine("sub emit"); }\n'
        "}\n"
    )
    got = by_message(scan_sources(**{"a/Base.java": base, "a/Sub.java": sub}))
    assert got["sub emit"].flags.overrides == (
        MethodId("a/Base.java", "Base.emit(java.lang.String)"),
    )


def test_external_supertypes_are_ignored():
    src = (
        "class Impl implements Runnable {\n"
        "    java.util.logging.Logger logger;\n"
        '    public void run() { logger.fine("running"); }\n'
        "}\n"
    )
    got = by_message(scan_sources(**{"a/Impl.java": src}))
    assert got["running"].flags.overrides == ()


def test_constructors_never_join_override_cohorts():
    base = (
        "class Base {\n"
        "    java.util.logging.Logger logger;\n"
        '    Base(int n) { logger.fine("base ctor"); }\n'
        "}\n"
    )
    sub = (
        "class Sub extends Base {\n"
        "    java.util.logging.Logger logger;\n"
        '    Sub(int n) { logger.fine("sub ctor"); }\n'
        "}\n"
    )
    got = by_message(scan_sources(**{"a/Base.java": base, "a/Sub.java": sub}))
    assert got["base ctor"].flags.overrides == ()
    assert got["sub ctor"].flags.overrides == ()


# ---------------------------------------------------------------------------
# Project scans
# ---------------------------------------------------------------------------


def test_scan_files_requires_a_profile():
    with pytest.raises(ConfigError):
        scan_files({}, [])


def test_unparseable_files_are_reported_and_skipped():
    files = {
        "a/Good.java": parse_java("a/Good.java", wrap('        logger.fine("ok");')),
        "a/Bad.java": parse_java("a/Bad.java", "class Bad { void f() { {{ }\n"),
    }
    scan = scan_files(files, [JUL])
    assert scan.parse_failures == ["a/Bad.java"]
    assert all(m.path == "a/Good.java" for m in scan.methods)
    assert [st.message for st in scan.statements] == ["ok"]


def test_bodied_methods_only_are_tracked():
    src = (
        "interface Api {\n"
        "    void hook();\n"
        "    default void go() { int x = 1; }\n"
        "}\n"
    )
    scan = scan_sources(**{"a/Api.java": src})
    assert set(scan.methods) == {MethodId("a/Api.java", "Api.go()")}


def test_scan_project_walks_tree(tmp_path):
    (tmp_path / "src" / "p").mkdir(parents=True)
    (tmp_path / "src" / "p" / "A.java").write_text(
        wrap('        logger.fine("deep");'), encoding="utf-8"
    )
    (tmp_path / "Top.java").write_text("class Top {\n}\n", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("not java\n", encoding="utf-8")
    scan = scan_project(tmp_path, [JUL])
    assert set(scan.files) == {"Top.java", "src/p/A.java"}
    assert [st.message for st in scan.statements] == ["deep"]
    assert scan.total_lines == 3 + 7  # Top.java plus the wrapped file
