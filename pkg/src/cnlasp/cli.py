"""Command-line access to every pipeline stage.

Exit codes: 0 success/satisfiable, 1 unsatisfiable or no parse or dead-end
prefix, 2 usage and syntax errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import EngineConfig, model_lines, solve
from .grammar import render_tree
from .lookahead import NoContinuation
from .meta import render_meta_model
from .reifier import ReifierError, render_kb
from .rules import RuleSyntaxError, parse_program
from .tokenizer import UnknownToken
from .workbench import NoParse, Workbench

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_ERROR = 2


def _add_asset_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with grammar/lexicon paths")
    parser.add_argument("--grammar", help="grammar program override (.lp)")
    parser.add_argument("--lexicon", help="lexicon override (.lp)")


def _workbench(args) -> Workbench:
    grammar = args.grammar
    lexicon = args.lexicon
    if args.config:
        settings = json.loads(Path(args.config).read_text(encoding="utf-8"))
        grammar = grammar or settings.get("grammar")
        lexicon = lexicon or settings.get("lexicon")
    return Workbench(lexicon_path=lexicon, grammar_path=grammar)


def _cmd_solve(args) -> int:
    try:
        source = Path(args.program).read_text(encoding="utf-8")
        program = parse_program(source)
    except (OSError, RuleSyntaxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    config = EngineConfig(max_models=args.models)
    result = solve(program, config=config)
    if not result.is_satisfiable:
        print("UNSAT")
        for line in result.diagnostics:
            print(f"violated: {line}")
        return EXIT_UNSAT
    for i, model in enumerate(result.models):
        if len(result.models) > 1:
            print(f"% model {i + 1}")
        for line in model_lines(model):
            print(line)
    return EXIT_OK


def _cmd_parse(args) -> int:
    bench = _workbench(args)
    try:
        tokens = bench.tokenize(args.text)
        trees = bench.parse(tokens)
    except (UnknownToken, RuleSyntaxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    if not trees:
        print("no parse", file=sys.stderr)
        return EXIT_UNSAT
    for tree in trees:
        print(render_tree(tree))
    return EXIT_OK


def _cmd_run(args) -> int:
    bench = _workbench(args)
    try:
        text = Path(args.textfile).read_text(encoding="utf-8")
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    try:
        rules, model = bench.run_text(text)
    except (UnknownToken, NoParse, ReifierError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    if args.trace:
        for rule in rules:
            marker = "constraint" if rule.is_constraint else "rule"
            print(f"% {marker} {rule.id}: +{len(rule.pbl)} -{len(rule.nbl)}", file=sys.stderr)
    print(render_kb(rules), end="")
    if not model.is_satisfiable:
        print("UNSAT")
        for rid in model.violated:
            print(f"violated constraint: {rid}")
        return EXIT_UNSAT
    print(render_meta_model(model))
    return EXIT_OK


def _cmd_lookahead(args) -> int:
    bench = _workbench(args)
    try:
        result = bench.suggest(args.prefix, max_depth=args.max_depth)
    except UnknownToken as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except NoContinuation:
        print("no continuation", file=sys.stderr)
        return EXIT_UNSAT
    print(f"% depth {result.depth_used}, {len(result.fragments)} fragment(s)")
    for suggestion in result.suggestions:
        words = ", ".join(suggestion.surfaces)
        print(f"{suggestion.category:8} {suggestion.agreement:3} {words}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cnlasp", description="CNL workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="evaluate a rule program")
    p_solve.add_argument("program")
    p_solve.add_argument("--models", type=int, default=8)
    p_solve.set_defaults(func=_cmd_solve)

    p_parse = sub.add_parser("parse", help="parse one sentence to a tree")
    p_parse.add_argument("--text", required=True)
    _add_asset_options(p_parse)
    p_parse.set_defaults(func=_cmd_parse)

    p_run = sub.add_parser("run", help="tokenize, reify, and evaluate a text file")
    p_run.add_argument("textfile")
    p_run.add_argument("--trace", action="store_true")
    _add_asset_options(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_lah = sub.add_parser("lookahead", help="admissible next words for a prefix")
    p_lah.add_argument("--prefix", required=True)
    p_lah.add_argument("--max-depth", type=int, default=7)
    _add_asset_options(p_lah)
    p_lah.set_defaults(func=_cmd_lookahead)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
