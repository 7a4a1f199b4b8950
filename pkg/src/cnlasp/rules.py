"""The textual rule/fact language: parser, renderer, and safety check.

Grammar, lookahead, translation, and meta programs all ship as ``.lp``
assets written in this language.  A program is a list of rules

    head :- b1, ..., bn.

where the head is a single classical literal or absent (integrity
constraint) and body elements are positive literals, ``not`` literals,
comparisons (``<``, ``<=``, ``!=``), or external-call assignments
(``V := @name()``).  Disjunctive heads are rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import (
    Compound,
    Constant,
    Term,
    Variable,
    compound,
    constant,
    integer,
    render_term,
    text,
    variable,
    variables_of,
)


class RuleSyntaxError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class DisjunctiveHeadUnsupported(RuleSyntaxError):
    """Epistemic disjunction in heads is out of scope for this engine."""

    def __init__(self, line: int, col: int, span: tuple[int, int]):
        super().__init__(line, col, "disjunctive heads are not supported")
        self.span = span


@dataclass(frozen=True, slots=True)
class ClassicalLiteral:
    negated: bool  # leading '-' (strong negation)
    atom: Term  # Constant or Compound

    @property
    def pred_key(self) -> tuple[bool, str, int]:
        if isinstance(self.atom, Compound):
            return (self.negated, self.atom.functor, len(self.atom.args))
        return (self.negated, self.atom.name, 0)

    @property
    def args(self) -> tuple[Term, ...]:
        return self.atom.args if isinstance(self.atom, Compound) else ()


@dataclass(frozen=True, slots=True)
class Naf:
    literal: ClassicalLiteral


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str  # "<", "<=", or "!="
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Assignment:
    var: Variable
    function: str  # external function name, called with no arguments


BodyElement = Union[ClassicalLiteral, Naf, Comparison, Assignment]


@dataclass(frozen=True)
class RuleAst:
    head: Optional[ClassicalLiteral]
    body: tuple[BodyElement, ...]
    source_span: tuple[int, int] = (0, 0)

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None


@dataclass
class ProgramAst:
    rules: list[RuleAst] = field(default_factory=list)

    @property
    def required_externals(self) -> set[str]:
        return {
            el.function
            for rule in self.rules
            for el in rule.body
            if isinstance(el, Assignment)
        }

    def extend(self, other: "ProgramAst") -> "ProgramAst":
        return ProgramAst(self.rules + other.rules)


@dataclass(frozen=True)
class UnsafeVariable:
    name: str


# --------------------------------------------------------------------------
# lexer

_PUNCT = [":-", ":=", "<=", "!=", "<", "(", ")", ",", ".", ";", "-", "@"]


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # name, var, int, str, punct, eof
    value: str
    line: int
    col: int
    pos: int


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and src[j] != '"':
                if src[j] == "\\" and j + 1 < n:
                    esc = src[j + 1]
                    out.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    j += 2
                else:
                    out.append(src[j])
                    j += 1
            if j >= n:
                raise RuleSyntaxError(line, col, "unterminated string")
            toks.append(_Tok("str", "".join(out), line, col, i))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("int", src[i:j], line, col, i))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = "var" if (c == "_" or c.isupper()) else "name"
            toks.append(_Tok(kind, word, line, col, i))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if src.startswith(p, i):
                toks.append(_Tok("punct", p, line, col, i))
                i += len(p)
                col += len(p)
                break
        else:
            raise RuleSyntaxError(line, col, f"unexpected character {c!r}")
    toks.append(_Tok("eof", "", line, col, n))
    return toks


# --------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.i = 0
        self.anon = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value or kind
            raise RuleSyntaxError(tok.line, tok.col, f"expected {want}, found {tok.value or tok.kind!r}")
        return self.next()

    def fail(self, msg: str):
        tok = self.peek()
        raise RuleSyntaxError(tok.line, tok.col, msg)

    def program(self) -> ProgramAst:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.rule())
        return ProgramAst(rules)

    def rule(self) -> RuleAst:
        start = self.peek().pos
        head: Optional[ClassicalLiteral] = None
        body: tuple[BodyElement, ...] = ()
        if not self._at_punct(":-"):
            head = self.literal()
            if self._at_punct(";"):
                tok = self.peek()
                raise DisjunctiveHeadUnsupported(tok.line, tok.col, (start, tok.pos))
        if self._at_punct(":-"):
            self.next()
            body = tuple(self.body_elements())
        end_tok = self.expect("punct", ".")
        if head is None and not body:
            raise RuleSyntaxError(end_tok.line, end_tok.col, "rule with neither head nor body")
        return RuleAst(head, body, (start, end_tok.pos + 1))

    def body_elements(self) -> list[BodyElement]:
        elements = [self.body_element()]
        while self._at_punct(","):
            self.next()
            elements.append(self.body_element())
        return elements

    def body_element(self) -> BodyElement:
        tok = self.peek()
        if tok.kind == "name" and tok.value == "not":
            self.next()
            return Naf(self.literal())
        if tok.kind == "punct" and tok.value == "-":
            return self.literal()
        term = self.term()
        nxt = self.peek()
        if nxt.kind == "punct" and nxt.value in ("<", "<=", "!="):
            self.next()
            return Comparison(nxt.value, term, self.term())
        if nxt.kind == "punct" and nxt.value == ":=":
            if not isinstance(term, Variable):
                self.fail("left side of := must be a variable")
            self.next()
            self.expect("punct", "@")
            name = self.expect("name").value
            self.expect("punct", "(")
            self.expect("punct", ")")
            return Assignment(term, name)
        if isinstance(term, (Constant, Compound)):
            return ClassicalLiteral(False, term)
        self.fail("expected a literal, comparison, or assignment")

    def literal(self) -> ClassicalLiteral:
        negated = False
        if self._at_punct("-"):
            self.next()
            negated = True
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a predicate name")
        atom = self.term()
        if not isinstance(atom, (Constant, Compound)):
            self.fail("literal must be a constant or compound atom")
        return ClassicalLiteral(negated, atom)

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return integer(int(tok.value))
        if tok.kind == "punct" and tok.value == "-":
            num = self.expect("int")
            return integer(-int(num.value))
        if tok.kind == "str":
            return text(tok.value)
        if tok.kind == "var":
            if tok.value == "_":
                self.anon += 1
                return variable(f"_{self.anon}")
            return variable(tok.value)
        if tok.kind == "name":
            if self._at_punct("("):
                self.next()
                args = [self.term()]
                while self._at_punct(","):
                    self.next()
                    args.append(self.term())
                self.expect("punct", ")")
                return compound(tok.value, *args)
            return constant(tok.value)
        raise RuleSyntaxError(tok.line, tok.col, f"expected a term, found {tok.value or tok.kind!r}")

    def _at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == value


def parse_program(source: str) -> ProgramAst:
    return _Parser(source).program()


def parse_term(source: str) -> Term:
    parser = _Parser(source)
    term = parser.term()
    if parser.peek().kind != "eof":
        parser.fail("trailing input after term")
    return term


def parse_literal(source: str) -> ClassicalLiteral:
    parser = _Parser(source)
    lit = parser.literal()
    if parser.peek().kind != "eof":
        parser.fail("trailing input after literal")
    return lit


# --------------------------------------------------------------------------
# rendering

def render_literal(lit: ClassicalLiteral) -> str:
    body = render_term(lit.atom)
    return f"-{body}" if lit.negated else body


def render_element(el: BodyElement) -> str:
    if isinstance(el, ClassicalLiteral):
        return render_literal(el)
    if isinstance(el, Naf):
        return f"not {render_literal(el.literal)}"
    if isinstance(el, Comparison):
        return f"{render_term(el.lhs)} {el.op} {render_term(el.rhs)}"
    if isinstance(el, Assignment):
        return f"{render_term(el.var)} := @{el.function}()"
    raise TypeError(f"not a body element: {el!r}")


def render_rule(rule: RuleAst) -> str:
    body = ", ".join(render_element(el) for el in rule.body)
    if rule.head is None:
        return f":- {body}."
    if not rule.body:
        return f"{render_literal(rule.head)}."
    return f"{render_literal(rule.head)} :- {body}."


def render_program(program: ProgramAst) -> str:
    return "\n".join(render_rule(r) for r in program.rules) + ("\n" if program.rules else "")


# --------------------------------------------------------------------------
# safety

def check_safety(rule: RuleAst) -> Optional[UnsafeVariable]:
    """First unsafe variable in source order, or None.

    Binding positions are positive body literals and assignment targets;
    variables in the head, under ``not``, or in comparisons must be bound
    (comparisons and naf only by assignments occurring earlier).
    """
    pos_vars: set[str] = set()
    for el in rule.body:
        if isinstance(el, ClassicalLiteral):
            pos_vars.update(variables_of(el.atom))

    assigned: set[str] = set()
    for el in rule.body:
        if isinstance(el, Assignment):
            assigned.add(el.var.name)
            continue
        names: list[str] = []
        if isinstance(el, Naf):
            names = list(variables_of(el.literal.atom))
        elif isinstance(el, Comparison):
            names = list(variables_of(el.lhs)) + list(variables_of(el.rhs))
        for name in names:
            if name not in pos_vars and name not in assigned:
                return UnsafeVariable(name)

    all_assigned = {el.var.name for el in rule.body if isinstance(el, Assignment)}
    if rule.head is not None:
        for name in variables_of(rule.head.atom):
            if name not in pos_vars and name not in all_assigned:
                return UnsafeVariable(name)
    return None


def check_program_safety(program: ProgramAst) -> Optional[tuple[RuleAst, UnsafeVariable]]:
    for rule in program.rules:
        bad = check_safety(rule)
        if bad is not None:
            return rule, bad
    return None
