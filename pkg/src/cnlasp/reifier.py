"""Translate syntax trees into reified rules (rules encoded as facts).

The translation itself is an engine pass over the shipped translation
program with ``@rule_num``/``@sk_num`` bound to the session counters; this
module wraps that pass with the order-dependent parts: anaphora
resolution, sanity checks, and assembly of the resulting fact groups into
``ReifiedRule`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .engine import EngineConfig, ExternalRegistry, FactStore, solve
from .grammar import grammar_program, spanning_trees, tree_leaves
from .lexicon import Lexicon
from .rules import ClassicalLiteral, ProgramAst, RuleAst, parse_program, render_rule
from .terms import Compound, Constant, Term, compound, constant, integer, sort_key, text
from .tokenizer import TokenFact


class ReifierError(Exception):
    pass


class AmbiguousParse(ReifierError):
    def __init__(self, sentence_no: int, count: int):
        super().__init__(f"sentence {sentence_no} has {count} parses")
        self.sentence_no = sentence_no
        self.count = count


class LexiconGap(ReifierError):
    def __init__(self, surface: str):
        super().__init__(f"no lexicon entry for {surface!r}")
        self.surface = surface


class UnresolvedAnaphor(ReifierError):
    def __init__(self, surface: str, sentence_no: int):
        super().__init__(f"no antecedent for 'the {surface}' (sentence {sentence_no})")
        self.surface = surface
        self.sentence_no = sentence_no


class UnsupportedSentence(ReifierError):
    pass


class ReificationIncomplete(ReifierError):
    def __init__(self, sentence_no: int, missing: list[str]):
        super().__init__(
            f"sentence {sentence_no} left content words unrepresented: {', '.join(missing)}"
        )
        self.missing = missing


@dataclass(frozen=True)
class ReifiedRule:
    id: int
    head: Optional[Term]  # ground lit(...) term
    pbl: tuple[Term, ...]
    nbl: tuple[Term, ...]
    is_constraint: bool = False

    def literal_terms(self) -> list[Term]:
        out = list(self.pbl) + list(self.nbl)
        if self.head is not None:
            out.insert(0, self.head)
        return out


@dataclass(frozen=True)
class ReifierState:
    next_rule_num: int = 1
    next_sk_num: int = 1
    committed: tuple[ReifiedRule, ...] = ()


def translation_program() -> ProgramAst:
    return parse_program(
        resources.files("cnlasp").joinpath("assets/reify.lp").read_text(encoding="utf-8")
    )


def emit_facts(rules) -> ProgramAst:
    """Serialize reified rules as ground facts (the interchange format)."""
    out: list[RuleAst] = []

    def fact(functor: str, *args: Term) -> RuleAst:
        return RuleAst(ClassicalLiteral(False, compound(functor, *args)), ())

    for rule in rules:
        rid = integer(rule.id)
        if rule.is_constraint:
            out.append(fact("cstr", rid))
        else:
            out.append(fact("rule", rid))
            out.append(fact("head", rid, rule.head))
        for lit in rule.pbl:
            out.append(fact("pbl", rid, lit))
        for lit in rule.nbl:
            out.append(fact("nbl", rid, lit))
    return ProgramAst(out)


def render_kb(rules) -> str:
    program = emit_facts(rules)
    return "\n".join(render_rule(r) for r in program.rules) + ("\n" if program.rules else "")


class Reifier:
    def __init__(
        self,
        lex: Lexicon,
        grammar: Optional[ProgramAst] = None,
        translation: Optional[ProgramAst] = None,
        config: Optional[EngineConfig] = None,
    ):
        self.lex = lex
        self.grammar = grammar or grammar_program()
        self.translation = translation or translation_program()
        self.config = config or EngineConfig()
        self._base = self.grammar.extend(self.translation).extend(lex.to_facts())

    # -- public operations ------------------------------------------------

    def reify(self, tree: Term, sentence_no: int, state: ReifierState):
        """Reified rules for one spanning tree; returns (rules, new state)."""
        tokens = self._tokens_for(tree, sentence_no)
        registry, counters = _counter_registry(state)
        program = self._base.extend(ProgramAst([t.to_fact() for t in tokens]))

        store = self._run(program, registry)
        trees = spanning_trees(store, sentence_no, len(tokens) + 1)
        if len(trees) > 1:
            raise AmbiguousParse(sentence_no, len(trees))
        if tree not in trees:
            raise ReifierError(f"tree is not derivable for sentence {sentence_no}")

        self._check_unsupported(store)

        injected = self._resolve_definite_subjects(store, state)
        if injected:
            store = self._run(program, registry, base=injected)

        rules = self._assemble(store, state)
        self._check_anaphora(store, rules, state, sentence_no)
        self._check_coverage(store, tokens, rules, sentence_no)

        new_state = ReifierState(
            next_rule_num=counters["rule_num"](),
            next_sk_num=counters["sk_num"](),
            committed=state.committed + tuple(rules),
        )
        return rules, new_state

    def resolve_anaphora(self, np: Term, body_literals, state: ReifierState) -> Term:
        """Antecedent argument for a definite noun phrase.

        Searches the current rule body first, then the heads of committed
        bodyless rules, closest (highest) rule id first.
        """
        base = self._definite_base(np)
        if base is None:
            raise ReifierError(f"not a definite noun phrase: {np}")
        wanted = compound("func", constant(base))
        for lit in body_literals:
            if isinstance(lit, Compound) and lit.functor == "lit" and lit.args[0] == wanted:
                return lit.args[1].args[0]
        for rule in sorted(state.committed, key=lambda r: -r.id):
            if rule.is_constraint or rule.pbl or rule.nbl or rule.head is None:
                continue
            if rule.head.args[0] == wanted:
                return rule.head.args[1].args[0]
        surface = self._base_surface(base)
        raise UnresolvedAnaphor(surface, 0)

    # -- helpers ------------------------------------------------------------

    def _tokens_for(self, tree: Term, sentence_no: int) -> list[TokenFact]:
        leaves = tree_leaves(tree)
        known = self.lex.known_surfaces
        for leaf in leaves:
            if leaf not in known:
                raise LexiconGap(leaf)
        return [
            TokenFact(surface, sentence_no, i + 1, i + 2) for i, surface in enumerate(leaves)
        ]

    def _run(self, program: ProgramAst, registry: ExternalRegistry, base: Optional[FactStore] = None) -> FactStore:
        result = solve(program, externals=registry, config=self.config, base_facts=base)
        store = FactStore()
        for lit in result.first_model:
            store.add(lit)
        return store

    def _check_unsupported(self, store: FactStore) -> None:
        markers = store.pred_literals((False, "unsupported", 2))
        if markers:
            reasons = sorted({m.args[1].name for m in markers})
            raise UnsupportedSentence(
                "sentence shape outside the reifiable fragment: " + ", ".join(reasons)
            )

    def _resolve_definite_subjects(self, store: FactStore, state: ReifierState) -> Optional[FactStore]:
        markers = store.pred_literals((False, "def_subj", 4))
        if not markers:
            return None
        injected = FactStore()
        for marker in markers:
            sentence, base_t, surface_t, vp_tree = marker.args
            np_tree = compound(
                "np", compound("det", text("the")), compound("n1", compound("noun", surface_t))
            )
            try:
                antecedent = self.resolve_anaphora(np_tree, [], state)
            except UnresolvedAnaphor:
                raise UnresolvedAnaphor(surface_t.value, sentence.value) from None
            injected.add(
                ClassicalLiteral(False, compound("fact_vp", sentence, vp_tree, antecedent))
            )
        return injected

    def _check_anaphora(self, store: FactStore, rules, state: ReifierState, sentence_no: int) -> None:
        for marker in store.pred_literals((False, "anaphor", 3)):
            rid, base_t, surface_t = marker.args
            rule = next((r for r in rules if r.id == rid.value), None)
            if rule is None:
                continue
            wanted = compound("func", base_t)
            in_body = any(
                isinstance(lit, Compound) and lit.args[0] == wanted
                for lit in list(rule.pbl) + list(rule.nbl)
            )
            if in_body:
                continue
            try:
                self.resolve_anaphora(
                    compound("np", compound("det", text("the")),
                             compound("n1", compound("noun", surface_t))),
                    [],
                    state,
                )
            except UnresolvedAnaphor:
                raise UnresolvedAnaphor(surface_t.value, sentence_no) from None
            raise UnsupportedSentence(
                f"'the {surface_t.value}' resolves outside the rule body; "
                "constant heads in quantified rules are not representable"
            )

    def _assemble(self, store: FactStore, state: ReifierState) -> list[ReifiedRule]:
        heads: dict[int, Term] = {}
        pbl: dict[int, list[Term]] = {}
        nbl: dict[int, list[Term]] = {}
        constraint_ids: set[int] = set()
        ids: set[int] = set()

        for lit in store.pred_literals((False, "head", 2)):
            rid = lit.args[0].value
            heads[rid] = lit.args[1]
            ids.add(rid)
        for lit in store.pred_literals((False, "cstr", 1)):
            rid = lit.args[0].value
            constraint_ids.add(rid)
            ids.add(rid)
        for lit in store.pred_literals((False, "pbl", 2)):
            pbl.setdefault(lit.args[0].value, []).append(lit.args[1])
        for lit in store.pred_literals((False, "nbl", 2)):
            nbl.setdefault(lit.args[0].value, []).append(lit.args[1])

        fresh = [rid for rid in sorted(ids) if rid >= state.next_rule_num]
        rules = []
        for rid in fresh:
            rules.append(
                ReifiedRule(
                    id=rid,
                    head=heads.get(rid),
                    pbl=tuple(sorted(pbl.get(rid, []), key=sort_key)),
                    nbl=tuple(sorted(nbl.get(rid, []), key=sort_key)),
                    is_constraint=rid in constraint_ids,
                )
            )
        return rules

    def _check_coverage(self, store: FactStore, tokens, rules, sentence_no: int) -> None:
        """Every content word must surface in the reified literals."""
        mentioned: set[str] = set()

        def collect(t: Term) -> None:
            if isinstance(t, Constant):
                mentioned.add(t.name)
            elif isinstance(t, Compound):
                mentioned.add(t.functor)
                for a in t.args:
                    collect(a)

        for rule in rules:
            for lit in rule.literal_terms():
                collect(lit)
        for key in (("anaphor", 3), ("def_subj", 4)):
            for marker in store.pred_literals((False,) + key):
                collect(marker.args[1])

        missing = []
        for token in tokens:
            bases = {
                e.base
                for e in self.lex.entries
                if e.surface == token.surface and e.base is not None
            }
            if bases and not (bases & mentioned):
                missing.append(token.surface)
        if not rules or missing:
            raise ReificationIncomplete(sentence_no, missing or ["<whole sentence>"])

    def _definite_base(self, np: Term) -> Optional[str]:
        if (
            isinstance(np, Compound)
            and np.functor == "np"
            and len(np.args) == 2
            and isinstance(np.args[0], Compound)
            and np.args[0].functor == "det"
        ):
            n1 = np.args[1]
            if isinstance(n1, Compound) and n1.functor == "n1" and len(n1.args) >= 1:
                noun = n1.args[0]
                if isinstance(noun, Compound) and noun.functor == "noun":
                    surface = noun.args[0].value
                    entries = self.lex.lookup("noun", surface)
                    if entries and entries[0].base:
                        return entries[0].base
        return None

    def _base_surface(self, base: str) -> str:
        for entry in self.lex.entries:
            if entry.base == base:
                return entry.surface
        return base


def _counter_registry(state: ReifierState):
    registry = ExternalRegistry()
    counters = {}

    def make(name: str, start: int):
        box = {"next": start}

        def mint() -> Term:
            value = box["next"]
            box["next"] += 1
            return integer(value)

        registry.register(name, mint)
        counters[name] = lambda: box["next"]

    make("rule_num", state.next_rule_num)
    make("sk_num", state.next_sk_num)
    return registry, counters
