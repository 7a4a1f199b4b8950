"""The lexicon/5 store: categories, surfaces, base forms, agreement, semantics.

Function words (determiners, conjunctions, ...) carry no base form;
content words (nouns, proper names, verbs, adjectives) map their surface
to the base constant used in reified literals.  Loading a lexicon also
supplies one ``$lah$`` pseudo-entry per category and agreement value so
the lookahead machinery can close tree fragments over dummy tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .rules import ClassicalLiteral, ProgramAst, RuleAst, parse_program, render_rule
from .terms import Compound, Constant, Text, compound, constant, text

CATEGORIES = ("det", "noun", "pname", "iv", "adj", "cop", "rp", "cnj", "neg", "adv", "pm")
CONTENT_CATEGORIES = frozenset({"noun", "pname", "iv", "adj"})
AGREEMENTS = ("sg", "pl", "n")
LOOKAHEAD_SURFACE = "$lah$"


class LexiconError(Exception):
    pass


class BadCategory(LexiconError):
    def __init__(self, category: str):
        super().__init__(f"unknown lexical category {category!r}")
        self.category = category


class DuplicateEntry(LexiconError):
    def __init__(self, category: str, surface: str):
        super().__init__(f"duplicate lexicon entry ({category}, {surface!r})")
        self.category = category
        self.surface = surface


@dataclass(frozen=True)
class LexEntry:
    category: str
    surface: str
    base: Optional[str]  # None for function words
    agreement: str  # sg | pl | n
    semantics: str  # forall | n

    def to_fact(self) -> RuleAst:
        atom = compound(
            "lexicon",
            constant(self.category),
            text(self.surface),
            constant(self.base) if self.base else constant("n"),
            constant(self.agreement),
            constant(self.semantics),
        )
        return RuleAst(ClassicalLiteral(False, atom), ())


@dataclass
class Lexicon:
    entries: list[LexEntry] = field(default_factory=list)

    @property
    def multiword_surfaces(self) -> list[str]:
        # longest first, so tokenization can match greedily
        surfaces = {e.surface for e in self.entries if " " in e.surface}
        return sorted(surfaces, key=lambda s: (-len(s.split()), s))

    @property
    def known_surfaces(self) -> set[str]:
        return {e.surface for e in self.entries}

    def lookup(self, category: str, surface: str) -> list[LexEntry]:
        return [e for e in self.entries if e.category == category and e.surface == surface]

    def surfaces(self, category: str, agreement: Optional[str] = None) -> list[str]:
        out = []
        for e in self.entries:
            if e.category != category or e.surface == LOOKAHEAD_SURFACE:
                continue
            if agreement is not None and e.agreement != agreement:
                continue
            if e.surface not in out:
                out.append(e.surface)
        return sorted(out)

    def to_facts(self) -> ProgramAst:
        return ProgramAst([e.to_fact() for e in self.entries])

    def render(self) -> str:
        return "\n".join(render_rule(e.to_fact()) for e in self.entries) + "\n"


def _entry_from_fact(rule: RuleAst) -> LexEntry:
    if rule.head is None or rule.body or rule.head.negated:
        raise LexiconError(f"not a lexicon fact: {render_rule(rule)}")
    atom = rule.head.atom
    if not isinstance(atom, Compound) or atom.functor != "lexicon" or len(atom.args) != 5:
        raise LexiconError(f"not a lexicon/5 fact: {render_rule(rule)}")
    cat_t, surface_t, base_t, agree_t, sem_t = atom.args
    if not isinstance(cat_t, Constant) or cat_t.name not in CATEGORIES:
        raise BadCategory(getattr(cat_t, "name", str(cat_t)))
    if not isinstance(surface_t, Text):
        raise LexiconError("lexicon surface must be a string")
    if not isinstance(base_t, Constant) or not isinstance(agree_t, Constant) or not isinstance(sem_t, Constant):
        raise LexiconError("lexicon base, agreement, and semantics must be symbols")
    if agree_t.name not in AGREEMENTS:
        raise LexiconError(f"unknown agreement value {agree_t.name!r}")
    if sem_t.name not in ("forall", "n"):
        raise LexiconError(f"unknown semantics value {sem_t.name!r}")
    category = cat_t.name
    base = None if base_t.name == "n" else base_t.name
    if surface_t.value != LOOKAHEAD_SURFACE:
        if category in CONTENT_CATEGORIES and base is None:
            raise LexiconError(f"content word {surface_t.value!r} needs a base form")
        if category not in CONTENT_CATEGORIES and base is not None:
            raise LexiconError(f"function word {surface_t.value!r} must not carry a base form")
    if sem_t.name == "forall" and category != "det":
        raise LexiconError("the forall marker belongs on determiners only")
    return LexEntry(category, surface_t.value, base, agree_t.name, sem_t.name)


def load(source: str) -> Lexicon:
    """Parse lexicon/5 facts and add any missing $lah$ pseudo-entries."""
    program = parse_program(source)
    entries: list[LexEntry] = []
    seen: set[tuple[str, str]] = set()
    for rule in program.rules:
        entry = _entry_from_fact(rule)
        key = (entry.category, entry.surface)
        if key in seen and entry.surface != LOOKAHEAD_SURFACE:
            raise DuplicateEntry(entry.category, entry.surface)
        seen.add(key)
        entries.append(entry)

    for category in CATEGORIES:
        agreements = {e.agreement for e in entries if e.category == category} or {"n"}
        for agreement in sorted(agreements):
            exists = any(
                e.category == category and e.surface == LOOKAHEAD_SURFACE and e.agreement == agreement
                for e in entries
            )
            if not exists:
                entries.append(LexEntry(category, LOOKAHEAD_SURFACE, None, agreement, "n"))
    return Lexicon(entries)
