"""Predictive lookup: admissible next categories and words for a prefix.

Dummy ``$lah$`` tokens are appended to the prefix; a prefix is alive at
depth d when some chart edge spans position 1 through the end of the d-th
dummy.  Fragments and ``depth_used`` report the first such depth (deeper
ones are unsatisfiable one step earlier), while the admissible-word set is
the union over every satisfiable depth up to ``max_depth``, because a
short continuation can close a sentence that a longer one still extends.

Suggestions come from the preterminal sitting over the first dummy token
in each fragment; its agreement is recovered by re-deriving the fragment
against the saturated chart, and surfaces are then drawn from the lexicon.
A final soundness pass drops surfaces whose substitution for the first
dummy can neither span again nor complete a sentence (a bare preterminal
edge is always a fragment, so without the filter every category would be
offered everywhere).

Since chart edges never look past their own end position, the charts for
all depths up to ``max_depth`` coincide on every span they share; one
saturation per prefix therefore answers every depth, which is what the
shipped lookahead program computes depth by depth with its end-position
rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .engine import EngineConfig, FactStore, body_matches, solve
from .grammar import grammar_program
from .lexicon import LOOKAHEAD_SURFACE, Lexicon
from .rules import ClassicalLiteral, ProgramAst, RuleAst, parse_program
from .terms import Compound, Term, Text, compound, constant, integer, match, text
from .tokenizer import TokenFact

RULE7 = (False, "rule", 7)


class NoContinuation(Exception):
    def __init__(self, max_depth: int):
        super().__init__(f"no spanning fragment within {max_depth} lookahead tokens")
        self.max_depth = max_depth


@dataclass(frozen=True)
class Suggestion:
    category: str
    agreement: str
    surfaces: tuple[str, ...]


@dataclass
class LookaheadResult:
    depth_used: int
    fragments: list[Term]
    suggestions: list[Suggestion]

    def surfaces(self) -> set[str]:
        return {s for sug in self.suggestions for s in sug.surfaces}


def lookahead_program() -> ProgramAst:
    return parse_program(
        resources.files("cnlasp").joinpath("assets/lookahead.lp").read_text(encoding="utf-8")
    )


def _dummy_tokens(prefix: list[TokenFact], depth: int) -> list[TokenFact]:
    sentence_no = prefix[0].sentence_no if prefix else 1
    start = len(prefix) + 1
    return [
        TokenFact(LOOKAHEAD_SURFACE, sentence_no, start + i, start + i + 1)
        for i in range(depth)
    ]


class LookaheadEngine:
    """Shares parsed assets and caches charts within a session.

    Deep dummy suffixes are ambiguous in every way at once, so a chart
    that carries full trees grows combinatorially with the lookahead
    depth.  Spanning tests, word admissibility, and preterminal discovery
    only depend on which (category, agreement, semantics, span) edges are
    derivable, so those run over a tree-erased copy of the grammar whose
    chart stays polynomial; the tree-carrying chart is built only at the
    minimal spanning depth, where the reported fragments live.
    """

    def __init__(
        self,
        lex: Lexicon,
        grammar: Optional[ProgramAst] = None,
        lookahead: Optional[ProgramAst] = None,
        config: Optional[EngineConfig] = None,
    ):
        self.lex = lex
        self.grammar = grammar or grammar_program()
        self.lookahead = lookahead or lookahead_program()
        self.config = config or EngineConfig()
        companions = [r for r in self.lookahead.rules if r.head and r.head.pred_key == RULE7]
        chart_rules = list(self.grammar.rules) + companions
        self._chart_program = ProgramAst(chart_rules).extend(lex.to_facts())
        erased = [_erase_tree(rule) for rule in chart_rules]
        self._erased_rules = erased
        self._erased_program = ProgramAst(erased).extend(lex.to_facts())
        self._pattern_surfaces = self._literal_tree_surfaces()
        self._charts: dict[tuple, FactStore] = {}

    def _literal_tree_surfaces(self) -> set[str]:
        """Surfaces the grammar matches structurally rather than via the lexicon."""
        surfaces: set[str] = set()

        def walk(t: Term) -> None:
            if isinstance(t, Text):
                surfaces.add(t.value)
            elif isinstance(t, Compound):
                for a in t.args:
                    walk(a)

        for rule in self.grammar.rules + self.lookahead.rules:
            for lit in ([rule.head] if rule.head else []) + [
                el for el in rule.body if isinstance(el, ClassicalLiteral)
            ]:
                walk(lit.atom)
        surfaces.discard(LOOKAHEAD_SURFACE)
        return surfaces

    # -- chart plumbing ----------------------------------------------------

    def _chart(self, tokens: list[TokenFact], depth: int, erased: bool = True) -> FactStore:
        key = (erased, tuple(t.surface for t in tokens), tokens[0].sentence_no if tokens else 1, depth)
        store = self._charts.get(key)
        if store is None:
            base = self._erased_program if erased else self._chart_program
            program = base.extend(
                ProgramAst([t.to_fact() for t in tokens + _dummy_tokens(tokens, depth)])
            )
            result = solve(program, config=self.config)
            store = FactStore()
            for lit in result.first_model:
                store.add(lit)
            self._charts[key] = store
        return store

    def _edges_ending_at(self, store: FactStore, sentence_no: int, end: int):
        return [
            lit
            for lit in store.pred_literals(RULE7)
            if lit.args[5] == integer(1)
            and lit.args[6] == integer(end)
            and lit.args[4] == integer(sentence_no)
        ]

    # -- the lookahead protocol --------------------------------------------

    def suggest(
        self,
        prefix: list[TokenFact],
        max_depth: int = 4,
        verify: bool = True,
    ) -> LookaheadResult:
        if max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        sentence_no = prefix[0].sentence_no if prefix else 1
        first_dummy = len(prefix) + 1
        store = self._chart(prefix, max_depth)

        depth_used: Optional[int] = None
        pairs: list[tuple[str, str]] = []
        for depth in range(1, max_depth + 1):
            edges = self._edges_ending_at(store, sentence_no, first_dummy + depth)
            if not edges:
                continue
            if depth_used is None:
                depth_used = depth
            for cat, agreement in self._dummy_preterminals(edges, store, first_dummy):
                if (cat, agreement) not in pairs:
                    pairs.append((cat, agreement))
        if depth_used is None:
            raise NoContinuation(max_depth)

        tree_store = self._chart(prefix, depth_used, erased=False)
        fragments: list[Term] = []
        for edge in self._edges_ending_at(tree_store, sentence_no, first_dummy + depth_used):
            if edge.args[1] not in fragments:
                fragments.append(edge.args[1])

        suggestions = []
        for cat, agreement in sorted(pairs):
            surfaces = self.lex.surfaces(cat, agreement)
            if verify:
                surfaces = self._verify_surfaces(prefix, max_depth, surfaces)
            if surfaces:
                suggestions.append(Suggestion(cat, agreement, tuple(surfaces)))
        if verify and not suggestions:
            raise NoContinuation(max_depth)
        return LookaheadResult(depth_used, fragments, suggestions)

    # -- derivation reconstruction -------------------------------------

    def _dummy_preterminals(self, edges, store: FactStore, position: int):
        """(category, agreement) of every $lah$ preterminal at ``position``
        reachable in some derivation of the given spanning edges."""
        results: list[tuple[str, str]] = []
        seen: set[ClassicalLiteral] = set()
        pos = integer(position)

        def visit(edge: ClassicalLiteral) -> None:
            if edge in seen:
                return
            seen.add(edge)
            tree, start, end = edge.args[1], edge.args[5], edge.args[6]
            if not (start.value <= position < end.value):
                return
            if (
                isinstance(tree, Compound)
                and len(tree.args) == 1
                and tree.args[0] == text(LOOKAHEAD_SURFACE)
                and start == pos
            ):
                pair = (edge.args[0].name, edge.args[2].name)
                if pair not in results:
                    results.append(pair)
                return
            for rule in self._erased_rules:
                if rule.head.pred_key != RULE7:
                    continue
                seed = match(rule.head.atom, edge.atom)
                if seed is None:
                    continue
                for _subst, facts in body_matches(rule, store, seed):
                    for fact in facts:
                        if fact.pred_key == RULE7:
                            visit(fact)

        for edge in edges:
            visit(edge)
        return results

    # -- soundness filter ------------------------------------------------

    def _verify_surfaces(self, prefix: list[TokenFact], max_depth: int, surfaces) -> list[str]:
        """Keep surfaces whose substitution stays alive.

        Surfaces the grammar only matches via the lexicon are
        interchangeable within a suggestion, so one representative is
        probed; structurally matched marker surfaces are probed one by one.
        """
        kept: list[str] = []
        generic_verdict: Optional[bool] = None
        sentence_no = prefix[0].sentence_no if prefix else 1
        position = len(prefix) + 1
        for surface in surfaces:
            if surface in self._pattern_surfaces:
                ok = self._viable(prefix, surface, sentence_no, position, max_depth)
            else:
                if generic_verdict is None:
                    generic_verdict = self._viable(prefix, surface, sentence_no, position, max_depth)
                ok = generic_verdict
            if ok:
                kept.append(surface)
        return kept

    def _viable(self, prefix, surface, sentence_no, position, max_depth) -> bool:
        extended = prefix + [TokenFact(surface, sentence_no, position, position + 1)]
        # most viable continuations re-span within a couple of tokens, so
        # probe a shallow chart first and only build the deep one to prove
        # a dead end dead
        tiers = [d for d in (2, max_depth) if d <= max_depth]
        for i, tier in enumerate(tiers):
            if i > 0 and tier == tiers[i - 1]:
                break
            store = self._chart(extended, tier)
            # either the extended prefix is itself a complete sentence...
            for lit in store.pred_literals(RULE7):
                if (
                    lit.args[0] == constant("s")
                    and lit.args[5] == integer(1)
                    and lit.args[6] == integer(len(extended) + 1)
                ):
                    return True
            # ...or some fragment still spans it at a later depth
            for depth in range(1, tier + 1):
                if self._edges_ending_at(store, sentence_no, len(extended) + 1 + depth):
                    return True
        return False


def suggest(
    prefix: list[TokenFact],
    lex: Lexicon,
    max_depth: int = 4,
    config: Optional[EngineConfig] = None,
    verify: bool = True,
) -> LookaheadResult:
    return LookaheadEngine(lex, config=config).suggest(prefix, max_depth, verify)


ERASED_TREE = constant("x")


def _erase_tree(rule):
    """Rule with the head edge's tree collapsed to a marker constant.

    Preterminal rules (those reading token/4) keep their one-leaf trees:
    marker-surface patterns in rule bodies only ever inspect those.
    """
    is_preterminal = any(
        isinstance(el, ClassicalLiteral) and el.pred_key == (False, "token", 4)
        for el in rule.body
    )
    if is_preterminal or rule.head is None or rule.head.pred_key != RULE7:
        return rule
    args = list(rule.head.atom.args)
    args[1] = ERASED_TREE
    head = ClassicalLiteral(False, compound("rule", *args))
    return RuleAst(head, rule.body)
