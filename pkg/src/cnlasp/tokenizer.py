"""Sentence splitting and tokenization into token/4 facts.

Positions index token boundaries: the k-th token of a sentence spans
(k, k+1), restarting at 1 for every sentence.  Sentences end at ``.`` or
``?``, which become tokens of their own.  Multiword lexicon surfaces
("Mary Ann", "Exclude that") are merged greedily, longest match first.
The vocabulary is closed: a surface without any lexicon entry is an
authoring error, not a guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import Lexicon
from .rules import ClassicalLiteral, ProgramAst, RuleAst
from .terms import compound, integer, text

TERMINATORS = (".", "?")


class UnknownToken(Exception):
    def __init__(self, surface: str, sentence_no: int, position: int):
        super().__init__(f"unknown token {surface!r} (sentence {sentence_no}, position {position})")
        self.surface = surface
        self.sentence_no = sentence_no
        self.position = position


@dataclass(frozen=True)
class TokenFact:
    surface: str
    sentence_no: int
    start: int
    end: int

    def to_fact(self) -> RuleAst:
        atom = compound(
            "token",
            text(self.surface),
            integer(self.sentence_no),
            integer(self.start),
            integer(self.end),
        )
        return RuleAst(ClassicalLiteral(False, atom), ())


def _split_words(chunk: str) -> list[str]:
    words = []
    for raw in chunk.split():
        while raw and raw[-1] in TERMINATORS:
            # terminal punctuation becomes its own token
            core, tail = raw[:-1], raw[-1]
            if core:
                words.append(core)
            words.append(tail)
            raw = ""
        if raw:
            words.append(raw)
    return words


def _split_sentences(words: list[str]) -> list[list[str]]:
    sentences: list[list[str]] = []
    current: list[str] = []
    for word in words:
        current.append(word)
        if word in TERMINATORS:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def tokenize(source: str, lex: Lexicon) -> list[TokenFact]:
    words = _split_words(source)
    if not words:
        return []
    multiwords = [(s.split(), s) for s in lex.multiword_surfaces]
    known = lex.known_surfaces

    tokens: list[TokenFact] = []
    for sentence_no, sentence in enumerate(_split_sentences(words), start=1):
        position = 1
        i = 0
        while i < len(sentence):
            surface = sentence[i]
            step = 1
            for parts, joined in multiwords:
                if sentence[i : i + len(parts)] == parts:
                    surface, step = joined, len(parts)
                    break
            if surface not in known:
                raise UnknownToken(surface, sentence_no, position)
            tokens.append(TokenFact(surface, sentence_no, position, position + 1))
            position += 1
            i += step
    return tokens


def to_facts(tokens: list[TokenFact]) -> ProgramAst:
    return ProgramAst([t.to_fact() for t in tokens])


def split_sentences(tokens: list[TokenFact]) -> list[list[TokenFact]]:
    """Group a token stream by sentence number, in document order."""
    groups: dict[int, list[TokenFact]] = {}
    for token in tokens:
        groups.setdefault(token.sentence_no, []).append(token)
    return [groups[n] for n in sorted(groups)]
