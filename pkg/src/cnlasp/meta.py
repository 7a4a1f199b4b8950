"""Evaluate a reified knowledge base with the meta-interpreter program.

The meta program derives ``in_AS`` membership for the literals encoded by
rule/1, head/2, pbl/2, nbl/2, and cstr/1 facts; constraint violations and
strong-negation clashes make the evaluation unsatisfiable.  Ground-pattern
queries run against the extracted model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .engine import EngineConfig, solve
from .reifier import ReifiedRule, emit_facts
from .rules import ProgramAst, parse_program
from .terms import Compound, Substitution, Term, match, render_term, sort_key

IN_AS_KEYS = ((False, "in_AS", 1),)


class QueryOnUnsat(Exception):
    pass


@dataclass
class MetaResult:
    status: str  # "satisfiable" | "unsatisfiable"
    model: list[Term] = field(default_factory=list)  # lit(...) terms, sorted
    violated: list[int] = field(default_factory=list)  # constraint rule ids

    @property
    def is_satisfiable(self) -> bool:
        return self.status == "satisfiable"


def meta_program() -> ProgramAst:
    return parse_program(
        resources.files("cnlasp").joinpath("assets/meta.lp").read_text(encoding="utf-8")
    )


def _in_as_terms(model) -> list[Term]:
    out = []
    for lit in model:
        if not lit.negated and isinstance(lit.atom, Compound) and lit.atom.functor == "in_AS":
            out.append(lit.atom.args[0])
    return sorted(out, key=sort_key)


def evaluate(
    kb: list[ReifiedRule],
    config: Optional[EngineConfig] = None,
    meta: Optional[ProgramAst] = None,
) -> MetaResult:
    meta = meta or meta_program()
    program = meta.extend(emit_facts(kb))
    result = solve(program, config=config)
    if result.is_satisfiable:
        return MetaResult("satisfiable", _in_as_terms(result.first_model))

    # Re-run without the final constraints to read off which integrity
    # constraints fired (or whether a strong-negation clash occurred).
    relaxed = ProgramAst([r for r in meta.rules if r.head is not None]).extend(emit_facts(kb))
    relaxed_result = solve(relaxed, config=config)
    violated: list[int] = []
    if relaxed_result.is_satisfiable:
        for lit in relaxed_result.first_model:
            if not lit.negated and isinstance(lit.atom, Compound) and lit.atom.functor == "violated":
                violated.append(lit.atom.args[0].value)
    return MetaResult("unsatisfiable", [], sorted(set(violated)))


def query(result: MetaResult, pattern: Term) -> list[Substitution]:
    """All matches of a lit(...) pattern against the model, deterministic order."""
    if not result.is_satisfiable:
        raise QueryOnUnsat("cannot query an unsatisfiable knowledge base")
    matches = []
    for lit_term in result.model:
        subst = match(pattern, lit_term)
        if subst is not None:
            matches.append(subst)
    matches.sort(key=lambda s: sorted((k, sort_key(v)) for k, v in s.items()))
    return matches


def render_meta_model(result: MetaResult) -> str:
    return "\n".join(f"in_AS({render_term(t)})" for t in result.model)
