"""Fixed-point exception sets and per-try partitioning."""

import pytest

from exflow.classify import Strategy
from exflow.flow import (
    CallSiteOrigin,
    EvidenceKind,
    LexicalThrowOrigin,
    analyze_try_block,
    attribute_sources,
    compute_method_exception_sets,
)
from exflow.model import build_semantic_model, parse_platform_document
from exflow.syntax import parse_compilation_unit

TS = EvidenceKind.THROW_STATEMENT
TD = EvidenceKind.THROWS_DECLARATION
DC = EvidenceKind.DOC_COMMENT
ED = EvidenceKind.EXTERNAL_DOCUMENTATION

IOE = "java.io.IOException"
RTE = "java.lang.RuntimeException"


def flow_platform(methods=()):
    doc = {
        "types": [
            {"name": "java.lang.Throwable", "superclass": None,
             "kind": "checked"},
            {"name": "java.lang.Exception",
             "superclass": "java.lang.Throwable", "kind": "checked"},
            {"name": "java.lang.RuntimeException",
             "superclass": "java.lang.Exception", "kind": "unchecked"},
            {"name": "java.io.IOException",
             "superclass": "java.lang.Exception", "kind": "checked"},
        ],
        "methods": [
            {"signature": "java.io.IOException#<init>(0)", "throws": []},
            {"signature": "java.lang.RuntimeException#<init>(0)", "throws": []},
            {"signature": "java.lang.Exception#<init>(0)", "throws": []},
        ] + list(methods),
    }
    return parse_platform_document(doc, "flow-test")


def build(source, platform=None):
    unit = parse_compilation_unit(
        "package app;\nimport java.io.IOException;\n" + source, "A.java")
    model = build_semantic_model([unit], platform or flow_platform())
    return model, compute_method_exception_sets(model)


def mid(name, arity=0):
    return ("app.A", name, arity)


def facts_of(sets, name):
    return sets[mid(name)].facts


def first_try(model):
    return model.try_blocks()[0]


# -- method-level sets -------------------------------------------------------

def test_lexical_throw_with_declaration_and_doc():
    _, sets = build(
        "class A {\n"
        "  /** @throws IOException on failure */\n"
        "  void f() throws IOException { throw new IOException(); }\n"
        "}\n")
    facts = facts_of(sets, "f")
    assert set(facts) == {IOE}
    assert facts[IOE].evidence == {TS, TD, DC}
    assert facts[IOE].sources == {mid("f")}


def test_callee_facts_lift_with_evidence_union():
    _, sets = build(
        "class A {\n"
        "  void g() throws IOException { throw new IOException(); }\n"
        "  void f() { g(); }\n"
        "}\n")
    facts = facts_of(sets, "f")
    assert facts[IOE].evidence == {TS, TD}
    assert facts[IOE].sources == {mid("g")}


def test_sources_accumulate_along_call_chain():
    _, sets = build(
        "class A {\n"
        "  void h() { throw new RuntimeException(); }\n"
        "  void g() { h(); }\n"
        "  void f() { g(); }\n"
        "}\n")
    assert facts_of(sets, "h")[RTE].sources == {mid("h")}
    assert facts_of(sets, "g")[RTE].sources == {mid("h")}
    assert facts_of(sets, "f")[RTE].sources == {mid("h")}


def test_own_declaration_joins_callee_sources():
    _, sets = build(
        "class A {\n"
        "  void g() throws IOException {}\n"
        "  void f() throws IOException { g(); }\n"
        "}\n")
    facts = facts_of(sets, "f")
    assert facts[IOE].sources == {mid("f"), mid("g")}
    assert facts[IOE].evidence == {TD}


def test_merge_across_callees_of_same_type():
    _, sets = build(
        "class A {\n"
        "  void g() { throw new IOException(); }\n"
        "  void h() throws IOException {}\n"
        "  void f() { g(); h(); }\n"
        "}\n")
    facts = facts_of(sets, "f")
    assert facts[IOE].evidence == {TS, TD}
    assert facts[IOE].sources == {mid("g"), mid("h")}


def test_catch_stops_escape_at_method_level():
    _, sets = build(
        "class A {\n"
        "  void f() { try { throw new IOException(); } catch (IOException e) {} }\n"
        "}\n")
    assert facts_of(sets, "f") == {}


def test_subsumption_catch_also_stops_escape():
    _, sets = build(
        "class A {\n"
        "  void f() { try { throw new IOException(); } catch (Exception e) {} }\n"
        "}\n")
    assert facts_of(sets, "f") == {}


def test_catch_body_throw_escapes():
    _, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try { throw new IOException(); }\n"
        "    catch (IOException e) { throw new RuntimeException(); }\n"
        "  }\n"
        "}\n")
    assert set(facts_of(sets, "f")) == {RTE}


def test_finally_throw_escapes():
    _, sets = build(
        "class A {\n"
        "  void f() { try { g(); } finally { throw new RuntimeException(); } }\n"
        "  void g() {}\n"
        "}\n")
    assert set(facts_of(sets, "f")) == {RTE}


def test_rethrow_of_variable_contributes_nothing():
    _, sets = build(
        "class A { void f(Exception e) { throw e; } }\n")
    assert sets[mid("f", 1)].facts == {}


def test_opaque_throw_keeps_call_effects():
    _, sets = build(
        "class A {\n"
        "  Exception make() throws IOException { return null; }\n"
        "  void f() { throw make(); }\n"
        "}\n")
    facts = facts_of(sets, "f")
    assert set(facts) == {IOE}
    assert facts[IOE].evidence == {TD}


def test_external_documentation(jre_mini):
    unit = parse_compilation_unit(
        "package app;\n"
        "import java.nio.file.Paths;\n"
        "class A { void f() { Paths.getPath(\"x\"); } }\n", "A.java")
    model = build_semantic_model([unit], jre_mini)
    sets = compute_method_exception_sets(model)
    facts = sets[("app.A", "f", 0)].facts
    ipe = "java.nio.file.InvalidPathException"
    assert facts[ipe].evidence == {ED}
    assert facts[ipe].sources == {("java.nio.file.Paths", "getPath", 1)}


def test_self_recursion_converges():
    _, sets = build(
        "class A { void f() throws IOException { f(); } }\n")
    facts = facts_of(sets, "f")
    assert facts[IOE].evidence == {TD}
    assert facts[IOE].sources == {mid("f")}


def test_mutual_recursion_converges():
    _, sets = build(
        "class A {\n"
        "  void f() { g(); }\n"
        "  void g() { f(); throw new RuntimeException(); }\n"
        "}\n")
    for name in ("f", "g"):
        facts = facts_of(sets, name)
        assert set(facts) == {RTE}
        assert facts[RTE].sources == {mid("g")}


def test_unknown_names_are_diagnosed():
    model, sets = build(
        "class A {\n"
        "  /** @throws Mist2 gone */\n"
        "  void f() throws Mist1 { throw new Mist3(); }\n"
        "}\n")
    assert facts_of(sets, "f") == {}
    text = "\n".join(model.diagnostics)
    assert "unknown declared exception Mist1" in text
    assert "doc comment names unknown exception Mist2" in text
    assert "thrown type Mist3 is not a known exception" in text


# -- try-block analysis ------------------------------------------------------

def fig1_try(fig1_result):
    model = fig1_result.model
    (method, stmt), = [(m, t) for m, t in model.try_blocks()]
    return model, method, stmt


def test_figure_one_method_sets(fig1_result):
    sets = fig1_result.method_sets
    ex = "fig1.Example"
    ipe = "java.nio.file.InvalidPathException"
    c_facts = sets[(ex, "C", 0)].facts
    assert c_facts[IOE].evidence == {TS, TD, DC}
    assert c_facts[IOE].sources == {(ex, "C", 0)}
    b_facts = sets[(ex, "B", 0)].facts
    assert b_facts[IOE].evidence == {TS, TD, DC}
    assert b_facts[IOE].sources == {(ex, "B", 0), (ex, "C", 0)}
    assert b_facts[ipe].evidence == {ED}
    assert b_facts[ipe].sources == {("java.nio.file.Paths", "getPath", 1)}
    a_facts = sets[(ex, "A", 0)].facts
    assert set(a_facts) == {IOE}


def test_figure_one_try_partition(fig1_result):
    model, method, stmt = fig1_try(fig1_result)
    analysis = analyze_try_block(stmt, fig1_result.method_sets, model, method)
    ipe = "java.nio.file.InvalidPathException"
    by_type = {f.type: f for f in analysis.possible}
    assert set(by_type) == {IOE, ipe}
    call_b = by_type[IOE].origin
    assert isinstance(call_b, CallSiteOrigin)
    assert call_b.callee == ("fig1.Example", "B", 0)
    assert by_type[ipe].origin == call_b

    assert set(analysis.handled) == {by_type[ipe]}
    clause, matched, strategy = analysis.handled[by_type[ipe]]
    assert matched == ipe
    assert strategy == Strategy.SPECIFIC
    assert analysis.propagated == {by_type[IOE]}
    assert analysis.distinct_method_count == {IOE: 1, ipe: 1}


def test_figure_one_attribution_direct_and_transitive(fig1_result):
    model, method, stmt = fig1_try(fig1_result)
    analysis = analyze_try_block(stmt, fig1_result.method_sets, model, method)
    direct = attribute_sources(analysis)
    assert direct[IOE] == (1, frozenset({TS, TD, DC}))
    transitive = attribute_sources(analysis, transitive=True)
    assert transitive[IOE][0] == 2
    ipe = "java.nio.file.InvalidPathException"
    assert direct[ipe] == (1, frozenset({ED}))
    assert transitive[ipe][0] == 1


def test_direct_throw_in_try_has_no_source_methods():
    model, sets = build(
        "class A {\n"
        "  void f() { try { throw new IOException(); } catch (Exception e) {} }\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    (fact,) = analysis.possible
    assert isinstance(fact.origin, LexicalThrowOrigin)
    assert fact.origin_methods == frozenset()
    assert fact.source_methods == frozenset()
    assert analysis.distinct_method_count == {IOE: 0}


def test_two_callees_counted_distinctly():
    model, sets = build(
        "class A {\n"
        "  void g() throws IOException {}\n"
        "  void h() throws IOException {}\n"
        "  void f() { try { g(); h(); } catch (IOException e) {} }\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    assert len(analysis.possible) == 2
    assert analysis.distinct_method_count == {IOE: 2}
    assert attribute_sources(analysis)[IOE][0] == 2


def test_first_matching_clause_wins():
    model, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try { throw new IOException(); }\n"
        "    catch (Exception e) {}\n"
        "    catch (IOException e) {}\n"
        "  }\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    (fact,) = analysis.possible
    clause, matched, strategy = analysis.handled[fact]
    assert clause is stmt.catches[0]
    assert matched == "java.lang.Exception"
    assert strategy == Strategy.SUBSUMPTION


def test_multi_catch_matches_first_alternative():
    model, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try { throw new IOException(); }\n"
        "    catch (IOException | RuntimeException e) {}\n"
        "  }\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    (fact,) = analysis.possible
    _, matched, strategy = analysis.handled[fact]
    assert matched == IOE
    assert strategy == Strategy.SPECIFIC


def test_nested_try_filters_inner_handled_types():
    model, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try {\n"
        "      try { throw new IOException(); } catch (IOException e) {}\n"
        "      throw new RuntimeException();\n"
        "    } catch (RuntimeException e) {}\n"
        "  }\n"
        "}\n")
    sets_by_line = {t.position.line: (m, t) for m, t in model.try_blocks()}
    outer_line = min(sets_by_line)
    method, outer = sets_by_line[outer_line]
    analysis = analyze_try_block(outer, sets, model, method)
    assert {f.type for f in analysis.possible} == {RTE}


def test_nested_catch_and_finally_feed_outer_region():
    model, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try {\n"
        "      try { g(); }\n"
        "      catch (RuntimeException e) { throw new IOException(); }\n"
        "      finally { h(); }\n"
        "    } catch (Exception e) {}\n"
        "  }\n"
        "  void g() {}\n"
        "  void h() throws IOException {}\n"
        "}\n")
    entries = sorted(model.try_blocks(), key=lambda p: p[1].position.line)
    method, outer = entries[0]
    analysis = analyze_try_block(outer, sets, model, method)
    origins = {type(f.origin).__name__ for f in analysis.possible}
    assert {f.type for f in analysis.possible} == {IOE}
    assert origins == {"LexicalThrowOrigin", "CallSiteOrigin"}


def test_catch_body_facts_not_part_of_own_try():
    model, sets = build(
        "class A {\n"
        "  void f() {\n"
        "    try { g(); } catch (Exception e) { throw new RuntimeException(); }\n"
        "  }\n"
        "  void g() throws IOException {}\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    assert {f.type for f in analysis.possible} == {IOE}


def test_same_type_from_two_origins_shares_strategy():
    model, sets = build(
        "class A {\n"
        "  void g() throws IOException {}\n"
        "  void f() {\n"
        "    try { g(); throw new IOException(); } catch (Exception e) {}\n"
        "  }\n"
        "}\n")
    method, stmt = first_try(model)
    analysis = analyze_try_block(stmt, sets, model, method)
    strategies = {analysis.handled[f][2] for f in analysis.possible}
    assert strategies == {Strategy.SUBSUMPTION}


def test_lambda_body_counts_toward_enclosing_region():
    model, sets = build(
        "class A {\n"
        "  void f() { Runnable r = () -> { throw new RuntimeException(); }; }\n"
        "}\n")
    assert set(facts_of(sets, "f")) == {RTE}
