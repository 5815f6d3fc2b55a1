"""End-to-end analysis of a source tree: parse, resolve, propagate,
classify, aggregate."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .classify import HandlerClassification, classify_actions
from .config import Config
from .flow import (
    MethodExceptionSet, analyze_try_block, compute_method_exception_sets,
)
from .model import MethodId, PlatformModel, SemanticModel, build_semantic_model
from .report import ProjectReport, TryBundle, aggregate_project
from .syntax import ParseError, parse_compilation_unit


@dataclass
class AnalysisResult:
    model: SemanticModel
    method_sets: dict[MethodId, MethodExceptionSet]
    bundles: list[TryBundle]
    report: ProjectReport
    diagnostics: list[str] = field(default_factory=list)


def analyze_project(project_dir: Union[str, Path], platform: PlatformModel,
                    config: Optional[Config] = None, *,
                    name: Optional[str] = None,
                    strict: bool = False) -> AnalysisResult:
    """Analyze every .java file under project_dir. Files that fail to parse
    are skipped with a diagnostic unless strict, which re-raises."""
    config = config or Config()
    root = Path(project_dir)
    diagnostics: list[str] = []
    units = []
    for path in sorted(root.rglob("*.java")):
        try:
            units.append(parse_compilation_unit(path.read_text(), str(path)))
        except ParseError as exc:
            if strict:
                raise
            diagnostics.append(f"skipped unparseable file: {exc}")
    model = build_semantic_model(units, platform)
    sets = compute_method_exception_sets(model)
    bundles = []
    for method, stmt in model.try_blocks():
        analysis = analyze_try_block(stmt, sets, model, method)
        handlers = []
        for clause in stmt.catches:
            strategies = {
                fact: strategy
                for fact, (hit, _matched, strategy) in analysis.handled.items()
                if hit is clause}
            handlers.append(HandlerClassification(
                clause.id, classify_actions(clause, config, model),
                strategies))
        bundles.append(TryBundle(stmt, analysis, handlers, method.unit))
    report = aggregate_project(bundles, model, name or root.name,
                               transitive=config.transitive_origins)
    diagnostics.extend(model.diagnostics)
    return AnalysisResult(model, sets, bundles, report, diagnostics)
