"""Chart parsing with the grammar program, plus tree extraction/rendering.

A sentence parse is one engine run: grammar rules + lexicon facts + token
facts saturate into rule/7 chart edges, and the trees of every ``s`` edge
spanning the whole sentence come back.  Trees are plain terms whose
functors are category names and whose leaves are the token surfaces.
"""

from __future__ import annotations

from importlib import resources

from .engine import EngineConfig, FactStore, solve
from .lexicon import Lexicon
from .rules import ProgramAst, parse_program
from .terms import Compound, Term, Text, constant, integer

CATEGORY_S = constant("s")


def _asset(name: str) -> str:
    return resources.files("cnlasp").joinpath("assets").joinpath(name).read_text(encoding="utf-8")


def grammar_program() -> ProgramAst:
    """The shipped grammar, parsed."""
    return parse_program(_asset("grammar.lp"))


def chart(tokens, lex: Lexicon, grammar: ProgramAst = None, config: EngineConfig = None) -> FactStore:
    """Saturated chart for one sentence: every derived fact, edges included."""
    program = (grammar or grammar_program()).extend(lex.to_facts()).extend(
        ProgramAst([t.to_fact() for t in tokens])
    )
    result = solve(program, config=config)
    store = FactStore()
    for lit in result.first_model:
        store.add(lit)
    return store


def spanning_trees(store: FactStore, sentence_no: int, final_pos: int) -> list[Term]:
    """Trees of every s edge covering positions 1..final_pos."""
    trees = []
    for edge in store.pred_literals((False, "rule", 7)):
        cat, tree, _y, _m, n, p1, p2 = edge.args
        if (
            cat == CATEGORY_S
            and n == integer(sentence_no)
            and p1 == integer(1)
            and p2 == integer(final_pos)
        ):
            if tree not in trees:
                trees.append(tree)
    return trees


def parse_sentence(tokens, lex: Lexicon, grammar: ProgramAst = None, config: EngineConfig = None) -> list[Term]:
    """All spanning syntax trees for one sentence's tokens (empty: no parse)."""
    if not tokens:
        return []
    sentence_no = tokens[0].sentence_no
    assert all(t.sentence_no == sentence_no for t in tokens), "tokens must share a sentence"
    store = chart(tokens, lex, grammar, config)
    return spanning_trees(store, sentence_no, len(tokens) + 1)


def tree_leaves(tree: Term) -> list[str]:
    """In-order token surfaces at the leaves."""
    out: list[str] = []

    def walk(t: Term) -> None:
        if isinstance(t, Text):
            out.append(t.value)
        elif isinstance(t, Compound):
            for a in t.args:
                walk(a)

    walk(tree)
    return out


def render_tree(tree: Term) -> str:
    """Indented tree notation.

    Preterminals and single-child nodes print inline; any node with two or
    more children puts each later child on its own line, aligned with the
    first child.
    """

    def inline(t: Term) -> str:
        if isinstance(t, Text):
            return f'"{t.value}"'
        if isinstance(t, Compound):
            return f"{t.functor}({', '.join(inline(a) for a in t.args)})"
        return str(getattr(t, "name", t))

    def fmt(t: Term, col: int) -> str:
        if not isinstance(t, Compound) or len(t.args) < 2:
            return inline(t)
        child_col = col + len(t.functor) + 1
        parts = [fmt(a, child_col) for a in t.args]
        sep = ",\n" + " " * child_col
        return f"{t.functor}({sep.join(parts)})"

    return fmt(tree, 0)
