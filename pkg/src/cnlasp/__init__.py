"""Controlled-natural-language workbench on a miniature answer-set engine."""

from .engine import (
    EngineConfig,
    ExternalRegistry,
    ModelResult,
    brute_force_oracle,
    solve,
    stratify,
)
from .grammar import grammar_program, parse_sentence, render_tree
from .lexicon import Lexicon, load as load_lexicon
from .lookahead import LookaheadEngine, LookaheadResult, suggest
from .meta import MetaResult, evaluate, meta_program, query
from .reifier import ReifiedRule, Reifier, ReifierState, emit_facts, render_kb
from .rules import ProgramAst, RuleAst, parse_program, render_program
from .tokenizer import TokenFact, to_facts, tokenize
from .workbench import Workbench

__all__ = [
    "EngineConfig",
    "ExternalRegistry",
    "Lexicon",
    "LookaheadEngine",
    "LookaheadResult",
    "MetaResult",
    "ModelResult",
    "ProgramAst",
    "ReifiedRule",
    "Reifier",
    "ReifierState",
    "RuleAst",
    "TokenFact",
    "Workbench",
    "brute_force_oracle",
    "emit_facts",
    "evaluate",
    "grammar_program",
    "load_lexicon",
    "meta_program",
    "parse_program",
    "parse_sentence",
    "query",
    "render_kb",
    "render_program",
    "render_tree",
    "solve",
    "stratify",
    "suggest",
    "to_facts",
    "tokenize",
]
