"""Shared pipeline wiring: tokenize -> parse -> reify -> evaluate.

The CLI and the HTTP service both drive sentences through one Workbench,
which owns the loaded assets and per-session reifier state handling.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .engine import EngineConfig
from .grammar import grammar_program, parse_sentence
from .lexicon import Lexicon, load as load_lexicon
from .lookahead import LookaheadEngine, LookaheadResult
from .meta import MetaResult, evaluate, meta_program
from .reifier import AmbiguousParse, ReifiedRule, Reifier, ReifierState
from .rules import ProgramAst, parse_program
from .tokenizer import TokenFact, split_sentences, tokenize

DEFAULT_LOOKAHEAD_DEPTH = 7


class NoParse(Exception):
    def __init__(self, sentence_no: int, sentence: str):
        super().__init__(f"sentence {sentence_no} has no parse: {sentence!r}")
        self.sentence_no = sentence_no
        self.sentence = sentence


def _read_asset(name: str) -> str:
    return resources.files("cnlasp").joinpath("assets").joinpath(name).read_text(encoding="utf-8")


def demo_text() -> str:
    return _read_asset("demo_text.txt")


@dataclass
class CommitResult:
    rules: list[ReifiedRule]
    model: MetaResult
    state: ReifierState


class Workbench:
    def __init__(
        self,
        lexicon_path: Optional[str] = None,
        grammar_path: Optional[str] = None,
        config: Optional[EngineConfig] = None,
        lookahead_depth: int = DEFAULT_LOOKAHEAD_DEPTH,
    ):
        self.config = config or EngineConfig()
        self.lookahead_depth = lookahead_depth
        self._lexicon_path = Path(lexicon_path) if lexicon_path else None
        self._lexicon_mtime: Optional[int] = None
        self.grammar: ProgramAst = (
            parse_program(Path(grammar_path).read_text(encoding="utf-8"))
            if grammar_path
            else grammar_program()
        )
        self.meta: ProgramAst = meta_program()
        self._load_language()

    def _load_language(self) -> None:
        if self._lexicon_path is not None:
            lex_source = self._lexicon_path.read_text(encoding="utf-8")
            self._lexicon_mtime = self._lexicon_path.stat().st_mtime_ns
        else:
            lex_source = _read_asset("lexicon.lp")
        self.lexicon: Lexicon = load_lexicon(lex_source)
        self.reifier = Reifier(self.lexicon, grammar=self.grammar, config=self.config)
        self.lookahead = LookaheadEngine(self.lexicon, grammar=self.grammar, config=self.config)

    def maybe_reload_lexicon(self) -> bool:
        """Re-read a file-based lexicon when it changed on disk."""
        if self._lexicon_path is None:
            return False
        if self._lexicon_path.stat().st_mtime_ns == self._lexicon_mtime:
            return False
        self._load_language()
        return True

    # -- stages -------------------------------------------------------------

    def tokenize(self, text: str) -> list[TokenFact]:
        return tokenize(text, self.lexicon)

    def parse(self, tokens: list[TokenFact]):
        return parse_sentence(tokens, self.lexicon, self.grammar, self.config)

    def suggest(self, prefix_text: str, max_depth: Optional[int] = None) -> LookaheadResult:
        tokens = self.tokenize(prefix_text)
        sentences = split_sentences(tokens)
        prefix = []
        if sentences:
            last = sentences[-1]
            if last[-1].surface not in (".", "?"):
                prefix = [TokenFact(t.surface, 1, t.start, t.end) for t in last]
        return self.lookahead.suggest(prefix, max_depth or self.lookahead_depth)

    def commit_sentence(
        self, text: str, state: ReifierState, sentence_no: Optional[int] = None
    ) -> CommitResult:
        """Parse, reify, and re-evaluate one sentence against prior state."""
        tokens = self.tokenize(text)
        groups = split_sentences(tokens)
        if len(groups) != 1:
            raise ValueError(f"expected exactly one sentence, got {len(groups)}")
        number = sentence_no if sentence_no is not None else len(state.committed) + 1
        sentence = [TokenFact(t.surface, number, t.start, t.end) for t in groups[0]]
        trees = self.parse(sentence)
        if not trees:
            raise NoParse(number, text)
        if len(trees) > 1:
            raise AmbiguousParse(number, len(trees))
        rules, new_state = self.reifier.reify(trees[0], number, state)
        model = evaluate(list(new_state.committed), config=self.config, meta=self.meta)
        return CommitResult(rules, model, new_state)

    def run_text(self, text: str):
        """Whole-document pipeline; returns (rules, model)."""
        state = ReifierState()
        tokens = self.tokenize(text)
        for number, sentence in enumerate(split_sentences(tokens), start=1):
            trees = self.parse(sentence)
            if not trees:
                raise NoParse(number, " ".join(t.surface for t in sentence))
            if len(trees) > 1:
                raise AmbiguousParse(number, len(trees))
            _, state = self.reifier.reify(trees[0], number, state)
        model = evaluate(list(state.committed), config=self.config, meta=self.meta)
        return list(state.committed), model
