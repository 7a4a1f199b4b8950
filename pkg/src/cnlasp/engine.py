"""Bottom-up evaluation of rule programs.

Evaluation is organized around the predicate dependency graph.  Strongly
connected components are processed in topological order; a component with
no internal negative edge is saturated semi-naively with negation tested
against the completed lower layers, while a component that is recursive
through negation is grounded against its positive envelope and its stable
models are enumerated over the undecided negation-as-failure atoms (after
an alternating well-founded fixpoint has decided everything it can).
Constraints and strong-negation consistency are checked against each
candidate once derivation has finished.

Grounding is lazy (derive-then-instantiate): rules fire only on facts that
actually exist, so compound terms such as syntax trees never force an
upfront Herbrand expansion.  ``max_term_depth`` guards runaway recursion
through function symbols and value invention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

import networkx as nx

from .rules import (
    Assignment,
    ClassicalLiteral,
    Comparison,
    Naf,
    ProgramAst,
    RuleAst,
    check_program_safety,
    render_literal,
    render_rule,
)
from .terms import (
    Compound,
    Term,
    Variable,
    apply,
    compare,
    is_ground,
    term_depth,
    variables_of,
)

PredKey = tuple[bool, str, int]

SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"


class EngineError(Exception):
    pass


class UnsafeRule(EngineError):
    def __init__(self, rule: RuleAst, var_name: str):
        super().__init__(f"unsafe variable {var_name} in rule: {render_rule(rule)}")
        self.rule = rule
        self.var_name = var_name


class MissingExternal(EngineError):
    def __init__(self, name: str):
        super().__init__(f"external function @{name} is not registered")
        self.name = name


class TermDepthExceeded(EngineError):
    def __init__(self, limit: int, literal: ClassicalLiteral):
        super().__init__(f"derived term exceeds depth {limit}: {render_literal(literal)}")
        self.limit = limit


class NafBudgetExceeded(EngineError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"{size} undecided NAF atoms exceed budget {budget}")
        self.size = size
        self.budget = budget


class TooManyAtoms(EngineError):
    pass


@dataclass
class EngineConfig:
    max_term_depth: int = 16
    max_models: int = 8
    naf_atom_budget: int = 24

    def __post_init__(self):
        for name in ("max_term_depth", "max_models", "naf_atom_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class ExternalRegistry:
    """Named value-inventing callables with per-call-site memoization.

    The memo key is (function, call site, binding of the rule's other
    variables), so re-derivation of the same logical event during
    semi-naive iteration always returns the same invented term.
    """

    def __init__(self):
        self._functions: dict[str, Callable[[], Term]] = {}
        self._memo: dict = {}

    def register(self, name: str, fn: Callable[[], Term]) -> None:
        self._functions[name] = fn

    @property
    def names(self) -> set[str]:
        return set(self._functions)

    def __contains__(self, name: str) -> bool:
        return name in self._functions

    def invoke(self, name: str, call_site, binding) -> Term:
        key = (name, call_site, binding)
        value = self._memo.get(key)
        if value is None:
            value = self._functions[name]()
            self._memo[key] = value
        return value


# --------------------------------------------------------------------------
# fact storage

class _PredData:
    __slots__ = ("items", "seen", "indexes")

    def __init__(self):
        self.items: list[ClassicalLiteral] = []
        self.seen: set[ClassicalLiteral] = set()
        # argument-position signature -> value tuple -> facts; built lazily
        # for whatever join shapes actually occur
        self.indexes: dict[tuple[int, ...], dict[tuple, list[ClassicalLiteral]]] = {}


class FactStore:
    """Ground classical literals with on-demand join indexes."""

    def __init__(self):
        self._preds: dict[PredKey, _PredData] = {}

    def add(self, lit: ClassicalLiteral) -> bool:
        data = self._preds.get(lit.pred_key)
        if data is None:
            data = self._preds[lit.pred_key] = _PredData()
        if lit in data.seen:
            return False
        data.seen.add(lit)
        data.items.append(lit)
        args = lit.args
        for sig, index in data.indexes.items():
            values = tuple(args[i] for i in sig)
            index.setdefault(values, []).append(lit)
        return True

    def has(self, lit: ClassicalLiteral) -> bool:
        data = self._preds.get(lit.pred_key)
        return data is not None and lit in data.seen

    def candidates(self, key: PredKey, sig: tuple[int, ...], values: tuple) -> list[ClassicalLiteral]:
        """Facts whose arguments at positions ``sig`` equal ``values``."""
        data = self._preds.get(key)
        if data is None:
            return []
        if not sig:
            return data.items
        index = data.indexes.get(sig)
        if index is None:
            index = {}
            for lit in data.items:
                args = lit.args
                index.setdefault(tuple(args[i] for i in sig), []).append(lit)
            data.indexes[sig] = index
        return index.get(values, [])

    def pred_literals(self, key: PredKey) -> list[ClassicalLiteral]:
        data = self._preds.get(key)
        return data.items if data else []

    def literals(self) -> Iterator[ClassicalLiteral]:
        for data in self._preds.values():
            yield from data.items

    def __len__(self) -> int:
        return sum(len(d.items) for d in self._preds.values())

    def clone(self) -> "FactStore":
        new = FactStore()
        for key, data in self._preds.items():
            copy = _PredData()
            copy.items = list(data.items)
            copy.seen = set(data.seen)
            new._preds[key] = copy
        return new


# --------------------------------------------------------------------------
# results

@dataclass
class ModelResult:
    status: str
    models: list[frozenset[ClassicalLiteral]]
    diagnostics: list[str] = field(default_factory=list)

    @property
    def is_satisfiable(self) -> bool:
        return self.status == SATISFIABLE

    @property
    def first_model(self) -> frozenset[ClassicalLiteral]:
        return self.models[0]


def model_lines(model) -> list[str]:
    return sorted(render_literal(lit) for lit in model)


def render_model(model) -> str:
    return "\n".join(model_lines(model))


# --------------------------------------------------------------------------
# rule compilation

class _CompiledRule:
    __slots__ = ("ast", "index", "head", "head_key", "pos", "probes", "nafs",
                 "assigns", "comp_at", "comp_after")

    def __init__(self, ast: RuleAst, index: int):
        self.ast = ast
        self.index = index
        self.head = ast.head
        self.head_key = ast.head.pred_key if ast.head else None
        self.pos = [el for el in ast.body if isinstance(el, ClassicalLiteral)]
        # per positive literal: argument positions usable as index probes,
        # as (position, variable-name-or-None, ground-term-or-None)
        self.probes = []
        for lit in self.pos:
            spec = []
            for i, arg in enumerate(lit.args):
                if isinstance(arg, Variable):
                    spec.append((i, arg.name, None))
                elif is_ground(arg):
                    spec.append((i, None, arg))
            self.probes.append(spec)
        self.nafs = [el.literal for el in ast.body if isinstance(el, Naf)]
        self.assigns = [el for el in ast.body if isinstance(el, Assignment)]
        comparisons = [el for el in ast.body if isinstance(el, Comparison)]

        # Schedule each comparison at the earliest join depth where its
        # variables are bound; anything left waits until after assignments.
        bound: list[set[str]] = [set()]
        for lit in self.pos:
            bound.append(bound[-1] | set(variables_of(lit.atom)))
        self.comp_at: dict[int, list[Comparison]] = {}
        self.comp_after: list[Comparison] = []
        for comp in comparisons:
            needed = set(variables_of(comp.lhs)) | set(variables_of(comp.rhs))
            for depth in range(len(bound)):
                if needed <= bound[depth]:
                    self.comp_at.setdefault(depth, []).append(comp)
                    break
            else:
                self.comp_after.append(comp)


def _eval_comparison(comp: Comparison, subst) -> bool:
    rel = compare(apply(subst, comp.lhs), apply(subst, comp.rhs))
    if comp.op == "<":
        return rel < 0
    if comp.op == "<=":
        return rel <= 0
    return rel != 0


def _match_push(pattern: Term, ground: Term, bindings: dict, added: list) -> bool:
    if isinstance(pattern, Variable):
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = ground
            added.append(pattern.name)
            return True
        return bound == ground
    if isinstance(pattern, Compound):
        if (
            not isinstance(ground, Compound)
            or pattern.functor != ground.functor
            or len(pattern.args) != len(ground.args)
        ):
            return False
        return all(_match_push(p, g, bindings, added) for p, g in zip(pattern.args, ground.args))
    return pattern == ground


def _match_literal(pattern: ClassicalLiteral, fact: ClassicalLiteral, subst) -> Optional[dict]:
    # mutate-and-undo keeps the failure path allocation-free
    added: list = []
    for p, g in zip(pattern.args, fact.args):
        if not _match_push(p, g, subst, added):
            for name in added:
                del subst[name]
            return None
    extended = dict(subst)
    for name in added:
        del subst[name]
    return extended


def _probe(spec, subst) -> tuple[tuple[int, ...], tuple]:
    """Index signature and values for the pattern positions ground under subst."""
    sig: list[int] = []
    values: list[Term] = []
    for i, var_name, ground_term in spec:
        if var_name is not None:
            bound = subst.get(var_name)
            if bound is None:
                continue
            sig.append(i)
            values.append(bound)
        else:
            sig.append(i)
            values.append(ground_term)
    return tuple(sig), tuple(values)


def _solutions(
    cr: _CompiledRule,
    store: FactStore,
    externals: ExternalRegistry,
    scc_keys: frozenset,
    envelope: bool,
    delta_idx: Optional[int] = None,
    delta: Optional[FactStore] = None,
    seed: Optional[dict] = None,
    collect_all_pos: bool = False,
) -> Iterator[tuple[dict, tuple, tuple]]:
    """Substitutions satisfying the rule body against ``store``.

    Yields (substitution, scc-internal positive facts, scc-internal naf
    facts).  With ``envelope`` set, naf literals on predicates inside
    ``scc_keys`` are assumed true and recorded; all other naf literals are
    tested against the store, which is complete for lower strata.
    """
    pos = cr.pos
    n = len(pos)

    def finalize(subst, pos_acc):
        s = dict(subst)
        for a_idx, assign in enumerate(cr.assigns):
            binding = frozenset((k, v) for k, v in s.items() if k != assign.var.name)
            value = externals.invoke(assign.function, (cr.index, a_idx), binding)
            prev = s.get(assign.var.name)
            if prev is not None and prev != value:
                return
            s[assign.var.name] = value
        for comp in cr.comp_after:
            if not _eval_comparison(comp, s):
                return
        naf_acc = []
        for naf_lit in cr.nafs:
            ground_atom = apply(s, naf_lit.atom)
            glit = ClassicalLiteral(naf_lit.negated, ground_atom)
            if envelope and glit.pred_key in scc_keys:
                naf_acc.append(glit)
                continue
            if store.has(glit):
                return
        yield (s, pos_acc, tuple(naf_acc))

    def walk(i, subst, pos_acc):
        if i == n:
            yield from finalize(subst, pos_acc)
            return
        lit = pos[i]
        source = delta if i == delta_idx else store
        sig, values = _probe(cr.probes[i], subst)
        for fact in source.candidates(lit.pred_key, sig, values):
            extended = _match_literal(lit, fact, subst)
            if extended is None:
                continue
            checks = cr.comp_at.get(i + 1)
            if checks and not all(_eval_comparison(c, extended) for c in checks):
                continue
            acc = pos_acc
            if collect_all_pos or fact.pred_key in scc_keys:
                acc = pos_acc + (fact,)
            yield from walk(i + 1, extended, acc)

    start = seed or {}
    checks = cr.comp_at.get(0)
    if checks and not all(_eval_comparison(c, start) for c in checks):
        return
    yield from walk(0, start, ())


def body_matches(rule: RuleAst, store: FactStore, seed: Optional[dict] = None):
    """Join a rule body against a store; yields (subst, matched positive facts).

    Used for derivation reconstruction over a saturated chart.  The rule
    must be free of assignments and naf.
    """
    cr = _CompiledRule(rule, 0)
    registry = ExternalRegistry()
    for subst, pos_acc, _ in _solutions(
        cr, store, registry, frozenset(), envelope=False, seed=seed, collect_all_pos=True
    ):
        yield subst, pos_acc


# --------------------------------------------------------------------------
# dependency analysis

def _pred_graph(rules: Sequence[RuleAst]):
    """Directed graph with an edge body-pred -> head-pred per dependency."""
    graph = nx.DiGraph()
    neg_edges: set[tuple[PredKey, PredKey]] = set()
    for rule in rules:
        if rule.head is None:
            for el in rule.body:
                if isinstance(el, ClassicalLiteral):
                    graph.add_node(el.pred_key)
                elif isinstance(el, Naf):
                    graph.add_node(el.literal.pred_key)
            continue
        hkey = rule.head.pred_key
        graph.add_node(hkey)
        for el in rule.body:
            if isinstance(el, ClassicalLiteral):
                graph.add_edge(el.pred_key, hkey)
            elif isinstance(el, Naf):
                bkey = el.literal.pred_key
                graph.add_edge(bkey, hkey)
                neg_edges.add((bkey, hkey))
    return graph, neg_edges


def _scc_order(rules: Sequence[RuleAst]):
    graph, neg_edges = _pred_graph(rules)
    condensed = nx.condensation(graph)
    order = []
    for node in nx.topological_sort(condensed):
        members = frozenset(condensed.nodes[node]["members"])
        order.append(members)
    return order, neg_edges


def render_pred(key: PredKey) -> str:
    neg, name, arity = key
    return f"{'-' if neg else ''}{name}/{arity}"


@dataclass
class Strata:
    layers: list[list[str]]

    def level_of(self, pred: str) -> Optional[int]:
        for i, layer in enumerate(self.layers):
            if pred in layer:
                return i
        return None


@dataclass
class NotStratified:
    cycle: list[str]

    def __str__(self):
        return "negative cycle: " + " -> ".join(self.cycle)


def stratify(program: ProgramAst) -> Union[Strata, NotStratified]:
    """Partition predicates into strata, or report one negative cycle."""
    order, neg_edges = _scc_order(program.rules)
    levels: dict[frozenset, int] = {}
    member_scc: dict[PredKey, frozenset] = {}
    for scc in order:
        for key in scc:
            member_scc[key] = scc
    for scc in order:
        level = 0
        for bkey, hkey in neg_edges:
            if hkey in scc and bkey in scc:
                cycle = [render_pred(hkey), f"not {render_pred(bkey)}"]
                graph, _ = _pred_graph(program.rules)
                try:
                    path = nx.shortest_path(graph, bkey, hkey)
                except nx.NetworkXNoPath:  # self-loop
                    path = [bkey, hkey]
                cycle.extend(render_pred(k) for k in path[1:])
                return NotStratified(cycle)
        for key in scc:
            for bkey, hkey in neg_edges:
                if hkey == key and member_scc.get(bkey) is not None and member_scc[bkey] != scc:
                    level = max(level, levels[member_scc[bkey]] + 1)
        deps = set()
        for rule in program.rules:
            if rule.head is not None and rule.head.pred_key in scc:
                for el in rule.body:
                    if isinstance(el, ClassicalLiteral) and el.pred_key not in scc:
                        deps.add(el.pred_key)
        for dep in deps:
            if dep in member_scc:
                level = max(level, levels[member_scc[dep]])
        levels[scc] = level
    if not levels:
        return Strata([[]])
    depth = max(levels.values()) + 1
    layers: list[list[str]] = [[] for _ in range(depth)]
    for scc, level in levels.items():
        layers[level].extend(render_pred(k) for k in scc)
    for layer in layers:
        layer.sort()
    return Strata(layers)


# --------------------------------------------------------------------------
# saturation and enumeration

def _check_depth(lit: ClassicalLiteral, cfg: EngineConfig) -> None:
    if term_depth(lit.atom) > cfg.max_term_depth:
        raise TermDepthExceeded(cfg.max_term_depth, lit)


def _saturate(
    store: FactStore,
    scc_rules: list[_CompiledRule],
    scc_keys: frozenset,
    externals: ExternalRegistry,
    cfg: EngineConfig,
    envelope: bool = False,
    instances: Optional[dict] = None,
) -> None:
    """Semi-naive fixpoint of one component's rules over ``store``."""

    def fire(cr, delta_idx=None, delta=None) -> FactStore:
        new = FactStore()
        for subst, pos_acc, naf_acc in _solutions(
            cr, store, externals, scc_keys, envelope, delta_idx, delta
        ):
            head = ClassicalLiteral(cr.head.negated, apply(subst, cr.head.atom))
            _check_depth(head, cfg)
            if instances is not None:
                instances.setdefault((head, pos_acc, naf_acc), None)
            if store.add(head):
                new.add(head)
        return new

    delta = FactStore()
    for cr in scc_rules:
        for lit in fire(cr).literals():
            delta.add(lit)
    while len(delta):
        fresh = FactStore()
        for cr in scc_rules:
            for i, lit in enumerate(cr.pos):
                if lit.pred_key in scc_keys:
                    for derived in fire(cr, delta_idx=i, delta=delta).literals():
                        fresh.add(derived)
        delta = fresh


def _least_model(instance_masks, active) -> int:
    model = 0
    changed = True
    while changed:
        changed = False
        for idx, (head_bit, pos_mask) in enumerate(instance_masks):
            if active[idx] and (pos_mask & model) == pos_mask and not (model & head_bit):
                model |= head_bit
                changed = True
    return model


def _enumerate_component(
    base: FactStore,
    scc_rules: list[_CompiledRule],
    scc_keys: frozenset,
    externals: ExternalRegistry,
    cfg: EngineConfig,
) -> list[FactStore]:
    """Stable extensions of ``base`` for a component recursive through naf.

    The component is grounded against its positive envelope; an
    alternating fixpoint decides as many atoms as possible; remaining
    choices are enumerated over undecided naf atoms and each candidate is
    checked to be the least model of its own reduct.
    """
    env = base.clone()
    instances: dict = {}
    _saturate(env, scc_rules, scc_keys, externals, cfg, envelope=True, instances=instances)

    atom_index: dict[ClassicalLiteral, int] = {}
    atoms: list[ClassicalLiteral] = []

    def bit_of(lit: ClassicalLiteral) -> int:
        idx = atom_index.get(lit)
        if idx is None:
            idx = atom_index[lit] = len(atoms)
            atoms.append(lit)
        return 1 << idx

    ground = []
    for head, pos_acc, naf_acc in instances:
        head_bit = bit_of(head)
        pos_mask = 0
        for lit in pos_acc:
            pos_mask |= bit_of(lit)
        naf_mask = 0
        for lit in naf_acc:
            naf_mask |= bit_of(lit)
        ground.append((head_bit, pos_mask, naf_mask))

    naf_universe = 0
    for _, _, naf_mask in ground:
        naf_universe |= naf_mask

    masks = [(h, p) for h, p, _ in ground]

    def lfp(assumed_true: int) -> int:
        active = [(naf & assumed_true) == 0 for _, _, naf in ground]
        return _least_model(masks, active)

    # Alternating well-founded fixpoint: true atoms grow, possible atoms
    # shrink, until both stabilize.
    true_mask = 0
    possible = (1 << len(atoms)) - 1
    while True:
        new_true = lfp(possible)
        new_possible = lfp(new_true)
        if new_true == true_mask and new_possible == possible:
            break
        true_mask, possible = new_true, new_possible

    residue = naf_universe & possible & ~true_mask
    residue_bits = [i for i in range(len(atoms)) if residue >> i & 1]
    if len(residue_bits) > cfg.naf_atom_budget:
        raise NafBudgetExceeded(len(residue_bits), cfg.naf_atom_budget)

    results: list[FactStore] = []
    for choice in range(1 << len(residue_bits)):
        guess = 0
        for j, bit in enumerate(residue_bits):
            if choice >> j & 1:
                guess |= 1 << bit
        assumed = true_mask | guess
        model = lfp(assumed)
        if (model & naf_universe) != (assumed & naf_universe):
            continue
        extension = base.clone()
        for i, lit in enumerate(atoms):
            if model >> i & 1:
                extension.add(lit)
        results.append(extension)
    return results


# --------------------------------------------------------------------------
# solving

def _constraint_fires(cr: _CompiledRule, store: FactStore, externals: ExternalRegistry) -> bool:
    for _ in _solutions(cr, store, externals, frozenset(), envelope=False):
        return True
    return False


def _consistent(store: FactStore) -> bool:
    for lit in store.literals():
        if lit.negated and store.has(ClassicalLiteral(False, lit.atom)):
            return False
    return True


def solve(
    program: ProgramAst,
    externals: Optional[ExternalRegistry] = None,
    config: Optional[EngineConfig] = None,
    base_facts: Optional[FactStore] = None,
) -> ModelResult:
    cfg = config or EngineConfig()
    registry = externals or ExternalRegistry()

    unsafe = check_program_safety(program)
    if unsafe is not None:
        rule, bad = unsafe
        raise UnsafeRule(rule, bad.name)
    for name in sorted(program.required_externals):
        if name not in registry:
            raise MissingExternal(name)

    compiled = [_CompiledRule(rule, i) for i, rule in enumerate(program.rules)]
    derivation = [cr for cr in compiled if cr.head is not None]
    constraints = [cr for cr in compiled if cr.head is None]

    order, _ = _scc_order([cr.ast for cr in derivation])

    stores = [base_facts.clone() if base_facts else FactStore()]
    for scc in order:
        scc_rules = [cr for cr in derivation if cr.head_key in scc]
        if not scc_rules:
            continue
        internal_neg = any(
            naf.pred_key in scc for cr in scc_rules for naf in cr.nafs
        )
        next_stores: list[FactStore] = []
        for store in stores:
            if internal_neg:
                next_stores.extend(
                    _enumerate_component(store, scc_rules, scc, registry, cfg)
                )
            else:
                _saturate(store, scc_rules, scc, registry, cfg)
                next_stores.append(store)
        stores = next_stores
        if not stores:
            break

    survivors: list[FactStore] = []
    violated: list[str] = []
    for store in stores:
        fired = [cr for cr in constraints if _constraint_fires(cr, store, registry)]
        if fired:
            for cr in fired:
                text = render_rule(cr.ast)
                if text not in violated:
                    violated.append(text)
            continue
        if not _consistent(store):
            continue
        survivors.append(store)

    models = sorted(
        {frozenset(store.literals()) for store in survivors},
        key=model_lines,
    )
    if not models:
        return ModelResult(UNSATISFIABLE, [], sorted(violated))
    return ModelResult(SATISFIABLE, models[: cfg.max_models])


# --------------------------------------------------------------------------
# grounding and the reference oracle

@dataclass
class GroundProgram:
    rules: list[RuleAst]

    @property
    def atoms(self) -> list[ClassicalLiteral]:
        seen: dict[ClassicalLiteral, None] = {}
        for rule in self.rules:
            if rule.head is not None:
                seen.setdefault(rule.head)
            for el in rule.body:
                if isinstance(el, ClassicalLiteral):
                    seen.setdefault(el)
                elif isinstance(el, Naf):
                    seen.setdefault(el.literal)
        return list(seen)


def ground_all(program: ProgramAst) -> GroundProgram:
    """Naive full grounding over the program's Herbrand constants.

    Test-scale utility: instantiates every rule over all constant
    combinations and evaluates comparisons away.  Rejects external calls.
    """
    universe: dict[Term, None] = {}

    def collect(t: Term) -> None:
        if isinstance(t, Compound):
            for a in t.args:
                collect(a)
        elif not isinstance(t, Variable):
            universe.setdefault(t)

    for rule in program.rules:
        if any(isinstance(el, Assignment) for el in rule.body):
            raise EngineError("cannot ground programs with external calls")
        if rule.head is not None:
            for a in rule.head.args:
                collect(a)
        for el in rule.body:
            if isinstance(el, ClassicalLiteral):
                for a in el.args:
                    collect(a)
            elif isinstance(el, Naf):
                for a in el.literal.args:
                    collect(a)

    constants = list(universe) or []
    ground_rules: list[RuleAst] = []
    seen_rules: set = set()
    for rule in program.rules:
        names = sorted(
            {
                name
                for el in ([rule.head] if rule.head else []) + list(rule.body)
                for name in _element_vars(el)
            }
        )
        combos = [{}]
        for name in names:
            combos = [dict(c, **{name: value}) for c in combos for value in constants]
        for subst in combos:
            try:
                grounded = _ground_rule(rule, subst)
            except _ComparisonFailed:
                continue
            key = render_rule(grounded)
            if key not in seen_rules:
                seen_rules.add(key)
                ground_rules.append(grounded)
    return GroundProgram(ground_rules)


class _ComparisonFailed(Exception):
    pass


def _element_vars(el) -> Iterator[str]:
    if el is None:
        return
    if isinstance(el, ClassicalLiteral):
        yield from variables_of(el.atom)
    elif isinstance(el, Naf):
        yield from variables_of(el.literal.atom)
    elif isinstance(el, Comparison):
        yield from variables_of(el.lhs)
        yield from variables_of(el.rhs)


def _ground_rule(rule: RuleAst, subst) -> RuleAst:
    body = []
    for el in rule.body:
        if isinstance(el, ClassicalLiteral):
            body.append(ClassicalLiteral(el.negated, apply(subst, el.atom)))
        elif isinstance(el, Naf):
            body.append(Naf(ClassicalLiteral(el.literal.negated, apply(subst, el.literal.atom))))
        elif isinstance(el, Comparison):
            if not _eval_comparison(el, subst):
                raise _ComparisonFailed()
    head = None
    if rule.head is not None:
        head = ClassicalLiteral(rule.head.negated, apply(subst, rule.head.atom))
    return RuleAst(head, tuple(body))


def brute_force_oracle(ground: GroundProgram, max_atoms: int = 20) -> ModelResult:
    """Reference semantics by exhaustive candidate enumeration.

    Deliberately independent of ``solve``: every subset of the ground
    atoms is tested for being the least model of its own reduct, then
    filtered by constraints and strong-negation consistency.
    """
    atoms = ground.atoms
    if len(atoms) > max_atoms:
        raise TooManyAtoms(f"{len(atoms)} atoms exceed oracle limit {max_atoms}")
    index = {lit: i for i, lit in enumerate(atoms)}

    rule_masks = []
    constraint_masks = []
    for rule in ground.rules:
        pos = 0
        naf = 0
        for el in rule.body:
            if isinstance(el, ClassicalLiteral):
                pos |= 1 << index[el]
            elif isinstance(el, Naf):
                naf |= 1 << index[el.literal]
        if rule.head is None:
            constraint_masks.append((pos, naf, rule))
        else:
            rule_masks.append((1 << index[rule.head], pos, naf))

    clash_masks = []
    for lit, i in index.items():
        if lit.negated:
            twin = index.get(ClassicalLiteral(False, lit.atom))
            if twin is not None:
                clash_masks.append((1 << i) | (1 << twin))

    models = []
    violated: list[str] = []
    for candidate in range(1 << len(atoms)):
        derived = 0
        changed = True
        while changed:
            changed = False
            for head, pos, naf in rule_masks:
                if (naf & candidate) == 0 and (pos & derived) == pos and not (derived & head):
                    derived |= head
                    changed = True
        if derived != candidate:
            continue
        broken = [
            rule
            for pos, naf, rule in constraint_masks
            if (pos & candidate) == pos and (naf & candidate) == 0
        ]
        if broken:
            for rule in broken:
                text = render_rule(rule)
                if text not in violated:
                    violated.append(text)
            continue
        if any((candidate & clash) == clash for clash in clash_masks):
            continue
        models.append(frozenset(lit for lit, i in index.items() if candidate >> i & 1))

    models.sort(key=model_lines)
    if not models:
        return ModelResult(UNSATISFIABLE, [], sorted(violated))
    return ModelResult(SATISFIABLE, models)
