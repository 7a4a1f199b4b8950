import random

import pytest

from cnlasp.engine import EngineConfig, solve
from cnlasp.meta import QueryOnUnsat, evaluate, meta_program, query
from cnlasp.reifier import ReifiedRule, emit_facts
from cnlasp.rules import ClassicalLiteral, Naf, parse_program, parse_term, render_rule
from cnlasp.terms import compound, constant, render_term

from test_reifier import reify_corpus

REFERENCE_MODEL = {
    "lit(func(student), arg(john))",
    "lit(func(work), arg(john))",
    "lit(func(student), arg(sue))",
    "lit(func(work), arg(sue))",
    "lit(func(student), arg(mary_ann))",
    "lit(func(absent), arg(mary_ann))",
    "lit(func(successful), arg(sue))",
    "lit(func(successful), arg(john))",
    "lit(func(neg(work)), arg(mary_ann))",
}


def test_meta_program_shape():
    program = meta_program()
    in_as_rules = [
        r for r in program.rules if r.head is not None and r.head.pred_key == (False, "in_AS", 1)
    ]
    # one-argument literals: membership via a satisfied body, or directly
    # for bodyless rules (guarded by the positive-body check)
    unary = [r for r in in_as_rules if len(r.head.atom.args[0].args) == 2]
    assert len(unary) == 2
    guarded = [
        r
        for r in unary
        if any(isinstance(el, Naf) and el.literal.pred_key == (False, "pos_body_exists", 1) for el in r.body)
    ]
    assert len(guarded) == 1
    # two-argument generalizations are present as well
    assert any(len(r.head.atom.args[0].args) == 3 for r in in_as_rules)
    rendered = "\n".join(render_rule(r) for r in program.rules)
    assert "A1 != A2" in rendered
    assert "violated(R)" in rendered
    assert ":- violated(R)." in rendered
    assert ":- incons." in rendered


def test_corpus_meta_model(lexicon, reifier):
    kb, _ = reify_corpus(lexicon, reifier)
    result = evaluate(kb)
    assert result.is_satisfiable
    assert {render_term(t) for t in result.model} == REFERENCE_MODEL


def test_empty_kb():
    result = evaluate([])
    assert result.is_satisfiable
    assert result.model == []


def test_ray_extension_unsatisfiable(lexicon, reifier):
    kb, _ = reify_corpus(
        lexicon, reifier, extra=["Ray is a student.", "Ray works.", "Ray cheats."]
    )
    result = evaluate(kb)
    assert not result.is_satisfiable
    constraint_ids = [r.id for r in kb if r.is_constraint]
    assert result.violated == constraint_ids


def test_query_examples(lexicon, reifier):
    kb, _ = reify_corpus(lexicon, reifier)
    result = evaluate(kb)
    successful = query(result, parse_term("lit(func(successful), arg(X))"))
    assert [s["X"] for s in successful] == [constant("john"), constant("sue")]
    negated = query(result, parse_term("lit(func(neg(work)), arg(X))"))
    assert [s["X"] for s in negated] == [constant("mary_ann")]
    assert query(result, parse_term("lit(func(cheat), arg(X))")) == []


def test_query_on_unsat(lexicon, reifier):
    kb, _ = reify_corpus(
        lexicon, reifier, extra=["Ray is a student.", "Ray works.", "Ray cheats."]
    )
    result = evaluate(kb)
    with pytest.raises(QueryOnUnsat):
        query(result, parse_term("lit(func(student), arg(X))"))


def test_body_order_independence(lexicon, reifier):
    kb, _ = reify_corpus(lexicon, reifier)
    reordered = [
        ReifiedRule(r.id, r.head, tuple(reversed(r.pbl)), r.nbl, r.is_constraint)
        for r in kb
    ]
    assert {render_term(t) for t in evaluate(reordered).model} == REFERENCE_MODEL


def test_no_skolem_in_model(lexicon, reifier):
    kb, _ = reify_corpus(lexicon, reifier)
    result = evaluate(kb)
    for term in result.model:
        assert "sk(" not in render_term(term)


# ---------------------------------------------------------------------------
# randomized equivalence: meta-evaluation of the reified form against the
# engine (and oracle) on the original program

PREDS = ["p", "q", "r", "s"]
CONSTS = ["a", "b", "c"]


def random_fragment_program(rng):
    """Single-variable rules and facts in the reifiable fragment."""
    lines = []
    for _ in range(rng.randint(1, 5)):
        pred = rng.choice(PREDS)
        const = rng.choice(CONSTS)
        neg = "-" if rng.random() < 0.1 else ""
        lines.append(f"{neg}{pred}({const}).")
    for _ in range(rng.randint(1, 4)):
        body_preds = rng.sample(PREDS, rng.randint(1, 3))
        pos = [f"{p}(X)" for p in body_preds]
        naf_pool = [p for p in PREDS if p not in body_preds]
        naf = [f"not {p}(X)" for p in rng.sample(naf_pool, min(len(naf_pool), rng.randint(0, 2)))]
        body = ", ".join(pos + naf)
        if rng.random() < 0.2:
            lines.append(f":- {body}.")
        else:
            head_neg = "-" if rng.random() < 0.15 else ""
            head = rng.choice(PREDS)
            lines.append(f"{head_neg}{head}(X) :- {body}.")
    return parse_program("\n".join(lines))


def reify_object_program(program):
    """Encode a fragment program the way the CNL reifier would."""
    rules = []
    next_sk = 1
    for i, rule in enumerate(program.rules, start=1):
        def encode(lit, arg):
            functor = compound("func", compound("neg", constant(lit.atom.functor))) \
                if lit.negated else compound("func", constant(lit.atom.functor))
            return compound("lit", functor, compound("arg", arg))

        if rule.is_fact:
            head_lit = rule.head
            arg = head_lit.atom.args[0]
            rules.append(ReifiedRule(i, encode(head_lit, arg), (), ()))
            continue
        skolem = compound("sk", parse_term(str(next_sk)))
        next_sk += 1
        pbl = tuple(
            encode(el, skolem) for el in rule.body if isinstance(el, ClassicalLiteral)
        )
        nbl = tuple(encode(el.literal, skolem) for el in rule.body if isinstance(el, Naf))
        head = encode(rule.head, skolem) if rule.head is not None else None
        rules.append(ReifiedRule(i, head, pbl, nbl, is_constraint=rule.head is None))
    return rules


def decode_model(meta_model):
    literals = set()
    for lit_term in meta_model:
        functor_term = lit_term.args[0].args[0]
        arg = lit_term.args[1].args[0]
        if functor_term.functor == "neg" if hasattr(functor_term, "functor") else False:
            literals.add(ClassicalLiteral(True, compound(functor_term.args[0].name, arg)))
        else:
            literals.add(ClassicalLiteral(False, compound(functor_term.name, arg)))
    return frozenset(literals)


def test_meta_object_equivalence_random():
    from cnlasp.engine import GroundProgram, brute_force_oracle, ground_all

    rng = random.Random(411)
    cfg = EngineConfig(max_models=512)
    meta = meta_program()
    refereed = 0
    for _ in range(60):
        program = random_fragment_program(rng)
        object_result = solve(program, config=cfg)
        kb = reify_object_program(program)
        meta_result = solve(meta.extend(emit_facts(kb)), config=cfg)
        object_models = set(object_result.models)
        meta_models = {
            decode_model(
                [l.atom.args[0] for l in model if l.pred_key == (False, "in_AS", 1)]
            )
            for model in meta_result.models
        }
        source = "\n".join(render_rule(r) for r in program.rules)
        assert object_result.is_satisfiable == meta_result.is_satisfiable, source
        if object_result.is_satisfiable:
            assert object_models == meta_models, source
        # referee the object side with the exhaustive oracle when small enough
        ground = GroundProgram(list(ground_all(program).rules))
        if len(ground.atoms) <= 16:
            oracle = brute_force_oracle(ground)
            assert oracle.status == object_result.status, source
            assert set(oracle.models) == object_models, source
            refereed += 1
    assert refereed > 10


def test_corpus_fidelity_against_object_program(lexicon, reifier):
    """The reified corpus and the hand-written program denote the same facts."""
    from cnlasp.engine import model_lines

    object_program = parse_program(
        """
        successful(X) :- student(X), work(X), not absent(X).
        -work(X) :- student(X), not work(X).
        student(john). work(john). student(sue). work(sue).
        student(mary_ann). absent(mary_ann).
        :- student(X), cheat(X), successful(X).
        """
    )
    object_model = {
        line for line in model_lines(solve(object_program).first_model)
    }
    kb, _ = reify_corpus(lexicon, reifier)
    meta_model = {render_term(t) for t in evaluate(kb).model}

    def shape(line):
        if line.startswith("-"):
            pred, arg = line[1:].split("(")
            return f"lit(func(neg({pred})), arg({arg[:-1]}))"
        pred, arg = line.split("(")
        return f"lit(func({pred}), arg({arg[:-1]}))"

    assert {shape(line) for line in object_model} == meta_model
