import random

import pytest

from cnlasp.engine import (
    EngineConfig,
    ExternalRegistry,
    GroundProgram,
    NafBudgetExceeded,
    NotStratified,
    Strata,
    TermDepthExceeded,
    TooManyAtoms,
    brute_force_oracle,
    ground_all,
    model_lines,
    solve,
    stratify,
)
from cnlasp.rules import ClassicalLiteral, parse_program, render_literal
from cnlasp.terms import constant, integer

DEMO = """\
successful(X) :- student(X), work(X), not absent(X).
-work(X) :- student(X), not work(X).
student(john). work(john). student(sue). work(sue).
student(mary_ann). absent(mary_ann).
:- student(X), cheat(X), successful(X).
"""

EXTRA_FACTS = "student(ray). work(ray). cheat(ray)."

DEMO_MODEL = {
    "student(john)",
    "work(john)",
    "student(sue)",
    "work(sue)",
    "student(mary_ann)",
    "absent(mary_ann)",
    "successful(sue)",
    "successful(john)",
    "-work(mary_ann)",
}


def model_strings(result, i=0):
    return set(model_lines(result.models[i]))


def test_solve_demo_program():
    result = solve(parse_program(DEMO))
    assert result.is_satisfiable
    assert len(result.models) == 1
    assert model_strings(result) == DEMO_MODEL


def test_solve_demo_plus_extra_facts_unsat():
    result = solve(parse_program(DEMO + EXTRA_FACTS))
    assert not result.is_satisfiable
    assert result.models == []
    assert any("cheat" in d for d in result.diagnostics)


def test_solve_empty_program():
    result = solve(parse_program(""))
    assert result.is_satisfiable
    assert result.models == [frozenset()]


def test_solve_even_negation_loop():
    result = solve(parse_program("p :- not q. q :- not p."))
    assert result.is_satisfiable
    assert sorted(model_strings(result, i) for i in range(2)) == [{"p"}, {"q"}]


def test_solve_odd_loop_unsat():
    result = solve(parse_program("p :- not p."))
    assert not result.is_satisfiable


def test_solve_matches_oracle_on_loop():
    program = parse_program("p :- not q. q :- not p.")
    oracle = brute_force_oracle(ground_all(program))
    result = solve(program)
    assert set(result.models) == set(oracle.models)


def test_stratify_demo():
    strata = stratify(parse_program(DEMO))
    assert isinstance(strata, Strata)
    assert strata.level_of("work/1") < strata.level_of("-work/1")
    assert strata.level_of("work/1") < strata.level_of("successful/1")
    assert strata.level_of("absent/1") < strata.level_of("successful/1")


def test_stratify_negative_cycle():
    outcome = stratify(parse_program("p :- not q. q :- not p."))
    assert isinstance(outcome, NotStratified)
    joined = " ".join(outcome.cycle)
    assert "p/0" in joined and "q/0" in joined and "not" in joined


def test_stratify_empty_program():
    strata = stratify(parse_program(""))
    assert isinstance(strata, Strata)
    assert strata.layers == [[]]


def test_stratified_unique_model():
    program = parse_program("a. b :- a. c :- b, not d.")
    result = solve(program)
    assert len(result.models) == 1


def test_consistency_filter():
    # strong negation clash discards the candidate entirely
    result = solve(parse_program("p(a). -p(a)."))
    assert not result.is_satisfiable


def test_oracle_ground_demo():
    ground = ground_all(parse_program(DEMO))
    result = brute_force_oracle(ground)
    assert len(result.models) == 1
    assert set(model_lines(result.models[0])) == DEMO_MODEL


def test_oracle_single_fact():
    result = brute_force_oracle(ground_all(parse_program("p.")))
    assert result.models == [frozenset({ClassicalLiteral(False, constant("p"))})]


def test_oracle_odd_loop():
    result = brute_force_oracle(ground_all(parse_program("p :- not p.")))
    assert not result.is_satisfiable


def test_oracle_too_many_atoms():
    facts = " ".join(f"p{i}." for i in range(21))
    with pytest.raises(TooManyAtoms):
        brute_force_oracle(ground_all(parse_program(facts)))


def test_term_depth_guard():
    program = parse_program("p(a). p(f(X)) :- p(X).")
    with pytest.raises(TermDepthExceeded):
        solve(program, config=EngineConfig(max_term_depth=8))


def test_naf_budget_guard():
    # one component whose negation loop spans more atoms than the budget
    rules = " ".join(f"p{i} :- not p{(i + 1) % 5}." for i in range(5))
    with pytest.raises(NafBudgetExceeded):
        solve(parse_program(rules), config=EngineConfig(naf_atom_budget=3, max_models=64))


def test_external_idempotence():
    program = parse_program("seed(a). seed(b). tagged(X, R) :- seed(X), R := @fresh().")
    registry = ExternalRegistry()
    counter = iter(range(1, 100))
    registry.register("fresh", lambda: integer(next(counter)))
    first = solve(program, externals=registry)
    second = solve(program, externals=registry)
    assert first.models == second.models
    tags = {render_literal(lit) for lit in first.models[0] if lit.pred_key[1] == "tagged"}
    assert tags == {"tagged(a, 1)", "tagged(b, 2)"}


def test_monotone_strata():
    base = parse_program("a. b :- a.")
    extended = parse_program("a. b :- a. top :- b, not missing.")
    lower = {render_literal(l) for l in solve(base).models[0]}
    upper = {render_literal(l) for l in solve(extended).models[0]}
    assert lower <= upper


# ---------------------------------------------------------------------------
# randomized equivalence against the oracle

ATOMS = [f"p{i}" for i in range(8)]


def random_ground_program(rng):
    lines = []
    n_rules = rng.randint(1, 10)
    pool = ATOMS[: rng.randint(3, 8)]

    def literal():
        name = rng.choice(pool)
        return ("-" if rng.random() < 0.15 else "") + name

    for _ in range(n_rules):
        body_pos = [literal() for _ in range(rng.randint(0, 3))]
        body_naf = [f"not {literal()}" for _ in range(rng.randint(0, 2))]
        body = ", ".join(body_pos + body_naf)
        if rng.random() < 0.15:
            if body:
                lines.append(f":- {body}.")
        else:
            head = literal()
            lines.append(f"{head} :- {body}." if body else f"{head}.")
    return parse_program("\n".join(lines))


def test_random_programs_match_oracle():
    rng = random.Random(20240817)
    cfg = EngineConfig(max_models=4096)
    for _ in range(120):
        program = random_ground_program(rng)
        oracle = brute_force_oracle(GroundProgram(list(program.rules)))
        result = solve(program, config=cfg)
        assert result.status == oracle.status, render_literal
        assert set(result.models) == set(oracle.models)
