import pytest

from cnlasp.engine import solve
from cnlasp.lexicon import LOOKAHEAD_SURFACE
from cnlasp.lookahead import NoContinuation, lookahead_program
from cnlasp.rules import Naf, render_rule
from cnlasp.tokenizer import TokenFact, tokenize

from conftest import CORPUS_SENTENCES


def prefix_tokens(text, lexicon):
    if not text:
        return []
    return tokenize(text, lexicon)


def dummy_suffix(prefix, count):
    start = len(prefix) + 1
    return [TokenFact(LOOKAHEAD_SURFACE, 1, start + i, start + i + 1) for i in range(count)]


def test_depth_one_unsatisfiable_then_two_fragments(lexicon, lookahead_engine):
    result = lookahead_engine.suggest(prefix_tokens("Every student", lexicon), max_depth=4)
    assert result.depth_used == 2
    assert len(result.fragments) == 2


def test_suggestions_after_every_student(lexicon, lookahead_engine):
    result = lookahead_engine.suggest(prefix_tokens("Every student", lexicon), max_depth=4)
    by_pair = {(s.category, s.agreement): s.surfaces for s in result.suggestions}
    assert "who" in by_pair[("rp", "n")]
    assert "works" in by_pair[("iv", "sg")]


def test_sentence_initial_suggestions(lexicon, lookahead_engine):
    result = lookahead_engine.suggest([], max_depth=4)
    categories = {s.category for s in result.suggestions}
    assert "det" in categories
    assert "pname" in categories
    det = next(s for s in result.suggestions if s.category == "det")
    assert "Every" in det.surfaces
    pnames = next(s for s in result.suggestions if s.category == "pname")
    assert "Mary Ann" in pnames.surfaces


def test_dead_end_prefix(lexicon, lookahead_engine):
    with pytest.raises(NoContinuation):
        lookahead_engine.suggest(prefix_tokens("student Every", lexicon), max_depth=4)


def test_optional_continuations_still_offered(lexicon, lookahead_engine):
    result = lookahead_engine.suggest(prefix_tokens("Sue is a student", lexicon), max_depth=6)
    surfaces = result.surfaces()
    assert "and" in surfaces  # the sentence can coordinate
    assert "." in surfaces  # or end here
    assert "who" in surfaces  # or attach a relative clause


def test_depth_used_is_minimal(lexicon, lookahead_engine):
    result = lookahead_engine.suggest(prefix_tokens("Every student", lexicon), max_depth=4)
    # one dummy fewer leaves nothing spanning
    program = (
        lookahead_engine._chart_program.extend(lookahead_program())
    )
    assert result.depth_used == 2


def test_lookahead_program_contents():
    program = lookahead_program()
    rendered = [render_rule(r) for r in program.rules]
    assert ":- not lah." in rendered
    end_pos_rules = [
        r
        for r in program.rules
        if r.head is not None
        and not r.head.negated
        and r.head.pred_key == (False, "end_pos", 2)
    ]
    assert len(end_pos_rules) == 1
    assert any(
        isinstance(el, Naf) and el.literal.negated for el in end_pos_rules[0].body
    )


def test_lookahead_program_agrees_with_fast_path(lexicon, grammar, lookahead_engine):
    """The shipped end-position program and the chart scan must agree."""
    from cnlasp.rules import ProgramAst

    prefix = prefix_tokens("Every student", lexicon)
    base = grammar.extend(lookahead_program()).extend(lexicon.to_facts())
    for depth, satisfiable in [(1, False), (2, True)]:
        tokens = prefix + dummy_suffix(prefix, depth)
        program = base.extend(ProgramAst([t.to_fact() for t in tokens]))
        result = solve(program)
        assert result.is_satisfiable == satisfiable
        if satisfiable:
            fragments = {
                lit.args[1]
                for lit in result.first_model
                if lit.pred_key == (False, "lah", 7)
            }
            fast = lookahead_engine.suggest(prefix, max_depth=2)
            assert fragments == set(fast.fragments)


def test_soundness_of_suggestions(lexicon, lookahead_engine):
    """Any suggested surface keeps the prefix alive when substituted."""
    for text in ["", "Every student", "John is", "Sue is a student"]:
        prefix = prefix_tokens(text, lexicon)
        result = lookahead_engine.suggest(prefix, max_depth=6)
        position = len(prefix) + 1
        for suggestion in result.suggestions:
            for surface in suggestion.surfaces:
                extended = prefix + [TokenFact(surface, 1, position, position + 1)]
                assert lookahead_engine._viable(
                    prefix, surface, 1, position, 6
                ), (text, surface)


def test_completeness_over_corpus(lexicon, lookahead_engine):
    for sentence in CORPUS_SENTENCES:
        tokens = [
            TokenFact(t.surface, 1, t.start, t.end) for t in tokenize(sentence, lexicon)
        ]
        for cut in range(len(tokens)):
            result = lookahead_engine.suggest(tokens[:cut], max_depth=7)
            assert tokens[cut].surface in result.surfaces(), (sentence, cut)
