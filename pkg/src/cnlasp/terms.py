"""First-order terms, one-way matching, and the builtin term order.

Every other layer of the workbench trades in these terms: tokens, lexicon
entries, chart edges, syntax trees, and reified literals are all ground
terms, and rules are terms with variables.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class UnboundVariable(Exception):
    """A variable survived into a context that requires ground terms."""

    def __init__(self, name: str):
        super().__init__(f"unbound variable {name}")
        self.name = name


@dataclass(frozen=True, slots=True)
class Constant:
    name: str


@dataclass(frozen=True, slots=True)
class Integer:
    value: int


@dataclass(frozen=True, slots=True)
class Text:
    value: str


@dataclass(frozen=True, slots=True)
class Variable:
    name: str


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: tuple["Term", ...]


Term = Union[Constant, Integer, Text, Variable, Compound]

# Substitutions bind variable names to ground terms.  Bottom-up evaluation
# only ever matches patterns against ground facts, so one-way matching is
# all we need; there is no occurs-check and no full unification.
Substitution = dict

_intern_lock = threading.Lock()
_constants: dict = {}
_compounds: dict = {}


def constant(name: str) -> Constant:
    """Interned constant. Interning is invisible: equality stays structural."""
    term = _constants.get(name)
    if term is None:
        with _intern_lock:
            term = _constants.setdefault(name, Constant(name))
    return term


def integer(value: int) -> Integer:
    return Integer(value)


def text(value: str) -> Text:
    return Text(value)


def variable(name: str) -> Variable:
    return Variable(name)


def compound(functor: str, *args: Term) -> Compound:
    key = (functor, args)
    term = _compounds.get(key)
    if term is None:
        with _intern_lock:
            term = _compounds.setdefault(key, Compound(functor, args))
    return term


def is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    if isinstance(t, Compound):
        return all(is_ground(a) for a in t.args)
    return True


def term_depth(t: Term) -> int:
    if isinstance(t, Compound):
        return 1 + max(term_depth(a) for a in t.args)
    return 1


def variables_of(t: Term) -> Iterator[str]:
    if isinstance(t, Variable):
        yield t.name
    elif isinstance(t, Compound):
        for a in t.args:
            yield from variables_of(a)


def match(pattern: Term, ground: Term, seed: Optional[Substitution] = None) -> Optional[Substitution]:
    """Minimal extension of ``seed`` mapping ``pattern`` onto ``ground``.

    Returns None when no such extension exists (a value, not an error).
    ``ground`` must be ground; bindings are therefore always ground.
    """
    bindings = dict(seed) if seed else {}
    if _match_into(pattern, ground, bindings):
        return bindings
    return None


def _match_into(pattern: Term, ground: Term, bindings: Substitution) -> bool:
    if isinstance(pattern, Variable):
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = ground
            return True
        return bound == ground
    if isinstance(pattern, Compound):
        if (
            not isinstance(ground, Compound)
            or pattern.functor != ground.functor
            or len(pattern.args) != len(ground.args)
        ):
            return False
        return all(_match_into(p, g, bindings) for p, g in zip(pattern.args, ground.args))
    return pattern == ground


def apply(subst: Substitution, t: Term) -> Term:
    """Ground instance of ``t`` under ``subst``; every variable must be bound."""
    if isinstance(t, Variable):
        bound = subst.get(t.name)
        if bound is None:
            raise UnboundVariable(t.name)
        return bound
    if isinstance(t, Compound):
        if any(isinstance(a, (Variable, Compound)) for a in t.args):
            return compound(t.functor, *(apply(subst, a) for a in t.args))
        return t
    return t


_KIND_INTEGER = 0
_KIND_TEXT = 1
_KIND_CONSTANT = 2
_KIND_COMPOUND = 3


def sort_key(t: Term):
    """Total-order key: Integer < Text < Constant < Compound; compounds by
    functor, then arity, then arguments."""
    if isinstance(t, Integer):
        return (_KIND_INTEGER, t.value)
    if isinstance(t, Text):
        return (_KIND_TEXT, t.value)
    if isinstance(t, Constant):
        return (_KIND_CONSTANT, t.name)
    if isinstance(t, Compound):
        return (_KIND_COMPOUND, t.functor, len(t.args), tuple(sort_key(a) for a in t.args))
    raise TypeError(f"not a ground term: {t!r}")


def compare(a: Term, b: Term) -> int:
    """-1, 0, or 1 under the builtin order used by the body-ordering rules."""
    ka, kb = sort_key(a), sort_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


_ANON = re.compile(r"_\d+$")

_TEXT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def render_term(t: Term) -> str:
    """Canonical text form, bit-exact under parse/print round-trips."""
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Integer):
        return str(t.value)
    if isinstance(t, Text):
        escaped = "".join(_TEXT_ESCAPES.get(c, c) for c in t.value)
        return f'"{escaped}"'
    if isinstance(t, Variable):
        return "_" if _ANON.match(t.name) else t.name
    if isinstance(t, Compound):
        return f"{t.functor}({', '.join(render_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")
