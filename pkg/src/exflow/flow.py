"""Possible-exception computation.

Per-method escaping sets are the least fixed point of

    facts(M) = lexical throws surviving M's own try/catch nesting
             ∪ declared throws of M  ∪  doc-tagged throws of M
             ∪ facts(callee) surviving the catch context, per call in M

with external methods contributing their platform-documented exceptions.
Iteration is round-robin over all corpus methods until no set changes,
which converges for recursive and mutually recursive call graphs.

Evidence accumulates through call chains: a fact arriving at a try block
carries every evidence kind observed anywhere along its paths, and facts
with the same exception type at the same call site are merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .classify import Strategy, classify_strategy
from .model import (
    CorpusMethod, ExternalMethod, MethodId, SemanticModel, Unresolved,
)
from .syntax.ast import (
    CatchClause, CompilationUnit, Invocation, NewInstance, SourcePosition,
    Statement, ThrowStmt, TryStmt,
)
from .syntax.walk import (
    iter_expressions, nested_blocks, statement_children,
    statement_expressions,
)

import enum


class EvidenceKind(enum.Enum):
    THROW_STATEMENT = "ThrowStatement"
    THROWS_DECLARATION = "ThrowsDeclaration"
    DOC_COMMENT = "DocComment"
    EXTERNAL_DOCUMENTATION = "ExternalDocumentation"


@dataclass(frozen=True)
class LexicalThrowOrigin:
    position: SourcePosition


@dataclass(frozen=True)
class CallSiteOrigin:
    position: SourcePosition
    callee: MethodId


Origin = Union[LexicalThrowOrigin, CallSiteOrigin]


@dataclass(frozen=True)
class PossibleException:
    """One exception type at one origin within a region.

    origin_methods holds the directly invoked method for call-site facts
    (empty for lexical throws); source_methods holds every method that
    contributed the type transitively along the call chain.
    """

    type: str
    origin: Origin
    evidence: frozenset[EvidenceKind]
    origin_methods: frozenset[MethodId]
    source_methods: frozenset[MethodId]


@dataclass(frozen=True)
class MethodFact:
    evidence: frozenset[EvidenceKind]
    sources: frozenset[MethodId]


@dataclass
class MethodExceptionSet:
    method: MethodId
    facts: dict[str, MethodFact]  # exception type -> merged fact


@dataclass
class TryBlockAnalysis:
    try_id: str
    position: SourcePosition
    possible: frozenset[PossibleException]
    handled: dict[PossibleException, tuple[CatchClause, str, Strategy]]
    propagated: frozenset[PossibleException]
    distinct_method_count: dict[str, int]


class _Context:
    __slots__ = ("model", "sets", "unit")

    def __init__(self, model: SemanticModel,
                 sets: dict[MethodId, MethodExceptionSet],
                 unit: CompilationUnit):
        self.model = model
        self.sets = sets
        self.unit = unit


def compute_method_exception_sets(
        model: SemanticModel) -> dict[MethodId, MethodExceptionSet]:
    """Fixed-point possible-exception sets for every method in the table."""
    sets: dict[MethodId, MethodExceptionSet] = {}
    for mid, entry in sorted(model.method_table.items()):
        if isinstance(entry, ExternalMethod):
            facts = {tid: MethodFact(frozenset({EvidenceKind.EXTERNAL_DOCUMENTATION}),
                                     frozenset({mid}))
                     for tid in entry.documented}
            sets[mid] = MethodExceptionSet(mid, facts)
        else:
            sets[mid] = MethodExceptionSet(mid, {})

    corpus = model.corpus_methods()
    base: dict[MethodId, dict[str, MethodFact]] = {}
    for method in corpus:
        base[method.id] = {}
        for name in method.decl.declared_throws:
            tid = model.resolve_exception_name(name, method.unit)
            if tid is None:
                model.diagnostics.append(
                    f"{method.decl.position}: unknown declared exception {name}")
                continue
            _merge_method_fact(base[method.id], tid,
                               frozenset({EvidenceKind.THROWS_DECLARATION}),
                               frozenset({method.id}))
        if method.decl.doc is not None:
            for name, _description in method.decl.doc.throws_tags:
                tid = model.resolve_exception_name(name, method.unit)
                if tid is None:
                    model.diagnostics.append(
                        f"{method.decl.position}: doc comment names unknown "
                        f"exception {name}")
                    continue
                _merge_method_fact(base[method.id], tid,
                                   frozenset({EvidenceKind.DOC_COMMENT}),
                                   frozenset({method.id}))

    bound = max(1, len(model.method_table)) * max(1, len(model.exception_universe)) + 2
    passes = 0
    changed = True
    while changed:
        passes += 1
        assert passes <= bound, "exception propagation failed to converge"
        changed = False
        for method in corpus:
            facts: dict[str, MethodFact] = {}
            for tid, fact in base[method.id].items():
                _merge_method_fact(facts, tid, fact.evidence, fact.sources)
            if method.decl.body is not None:
                ctx = _Context(model, sets, method.unit)
                region = _region_facts(method.decl.body.statements, ctx)
                for fact in region.values():
                    if isinstance(fact.origin, CallSiteOrigin):
                        sources = fact.source_methods
                    else:
                        sources = frozenset({method.id})
                    _merge_method_fact(facts, fact.type, fact.evidence, sources)
            if facts != sets[method.id].facts:
                sets[method.id] = MethodExceptionSet(method.id, facts)
                changed = True
    return sets


def analyze_try_block(t: TryStmt, sets: dict[MethodId, MethodExceptionSet],
                      model: SemanticModel,
                      method: CorpusMethod) -> TryBlockAnalysis:
    """Partition the try body's possible exceptions into handled (with the
    first matching clause and its strategy) and propagated."""
    ctx = _Context(model, sets, method.unit)
    region = _region_facts(t.body.statements, ctx)
    possible = frozenset(region.values())
    handled: dict[PossibleException, tuple[CatchClause, str, Strategy]] = {}
    propagated: set[PossibleException] = set()
    for fact in sorted(possible, key=_fact_key):
        match = _first_match(fact.type, t.catches, ctx)
        if match is None:
            propagated.add(fact)
        else:
            clause, matched_type = match
            handled[fact] = (clause, matched_type,
                             classify_strategy(fact.type, matched_type, model))
    counts: dict[str, set[MethodId]] = {}
    for fact in possible:
        counts.setdefault(fact.type, set()).update(fact.origin_methods)
    distinct = {tid: len(methods) for tid, methods in counts.items()}
    return TryBlockAnalysis(t.id, t.position, possible, handled,
                            frozenset(propagated), distinct)


def attribute_sources(analysis: TryBlockAnalysis, *, transitive: bool = False
                      ) -> dict[str, tuple[int, frozenset[EvidenceKind]]]:
    """Per exception type: how many distinct methods it traces back to and
    the union of its evidence kinds. Direct invocations of the try body by
    default; transitive counts every contributing method instead."""
    methods: dict[str, set[MethodId]] = {}
    evidence: dict[str, set[EvidenceKind]] = {}
    for fact in analysis.possible:
        pool = fact.source_methods if transitive else fact.origin_methods
        methods.setdefault(fact.type, set()).update(pool)
        evidence.setdefault(fact.type, set()).update(fact.evidence)
    return {tid: (len(methods[tid]), frozenset(evidence[tid]))
            for tid in methods}


# ---------------------------------------------------------------------------
# region collection
# ---------------------------------------------------------------------------

def _region_facts(statements: Iterable[Statement],
                  ctx: _Context) -> dict[tuple, PossibleException]:
    """Facts arising from a statement region. Nested try statements filter
    their body's facts through their own clauses; their catch and finally
    bodies contribute unfiltered."""
    facts: dict[tuple, PossibleException] = {}
    for stmt in statements:
        if isinstance(stmt, TryStmt):
            inner = _region_facts(stmt.body.statements, ctx)
            for fact in inner.values():
                if _first_match(fact.type, stmt.catches, ctx) is None:
                    _add(facts, fact)
            for clause in stmt.catches:
                for fact in _region_facts(clause.body.statements, ctx).values():
                    _add(facts, fact)
            if stmt.finally_block is not None:
                for fact in _region_facts(stmt.finally_block.statements, ctx).values():
                    _add(facts, fact)
            continue
        if isinstance(stmt, ThrowStmt) and isinstance(stmt.thrown, NewInstance):
            tid = ctx.model.resolve_exception_name(stmt.thrown.type_name, ctx.unit)
            if tid is None:
                ctx.model.diagnostics.append(
                    f"{stmt.position}: thrown type {stmt.thrown.type_name} "
                    f"is not a known exception")
            else:
                _add(facts, PossibleException(
                    tid, LexicalThrowOrigin(stmt.position),
                    frozenset({EvidenceKind.THROW_STATEMENT}),
                    frozenset(), frozenset()))
        for expr in statement_expressions(stmt):
            for node in iter_expressions(expr):
                if isinstance(node, (Invocation, NewInstance)):
                    _add_call_facts(facts, node, ctx)
            for block in nested_blocks(expr):
                for fact in _region_facts(block.statements, ctx).values():
                    _add(facts, fact)
        for child in statement_children(stmt):
            for fact in _region_facts([child], ctx).values():
                _add(facts, fact)
    return facts


def _add_call_facts(facts: dict, node: Union[Invocation, NewInstance],
                    ctx: _Context) -> None:
    resolved = ctx.model.resolve_invocation(node)
    if isinstance(resolved, Unresolved):
        return
    callee_set = ctx.sets.get(resolved)
    if callee_set is None:
        return
    origin = CallSiteOrigin(node.position, resolved)
    for tid, fact in callee_set.facts.items():
        _add(facts, PossibleException(tid, origin, fact.evidence,
                                      frozenset({resolved}), fact.sources))


def _add(facts: dict, fact: PossibleException) -> None:
    key = (fact.type, fact.origin)
    existing = facts.get(key)
    if existing is None:
        facts[key] = fact
    else:
        facts[key] = PossibleException(
            fact.type, fact.origin,
            existing.evidence | fact.evidence,
            existing.origin_methods | fact.origin_methods,
            existing.source_methods | fact.source_methods)


def _merge_method_fact(facts: dict[str, MethodFact], tid: str,
                       evidence: frozenset, sources: frozenset) -> None:
    existing = facts.get(tid)
    if existing is None:
        facts[tid] = MethodFact(evidence, sources)
    else:
        facts[tid] = MethodFact(existing.evidence | evidence,
                                existing.sources | sources)


def _first_match(fact_type: str, catches: list[CatchClause],
                 ctx: _Context) -> Optional[tuple[CatchClause, str]]:
    """First clause (and first caught alternative) that handles the type."""
    for clause in catches:
        for name in clause.caught_types:
            caught = ctx.model.resolve_type_name(name, ctx.unit)
            if caught is None or caught not in ctx.model.types:
                continue
            if ctx.model.is_subtype(fact_type, caught):
                return clause, caught
    return None


def _fact_key(fact: PossibleException) -> tuple:
    position = fact.origin.position
    return (fact.type, position.file, position.line, position.column)
