import pytest

from cnlasp.grammar import grammar_program
from cnlasp.lexicon import load
from cnlasp.lookahead import LookaheadEngine
from cnlasp.reifier import Reifier
from cnlasp.workbench import Workbench, demo_text, _read_asset

CORPUS_SENTENCES = [
    "Every student who works and who is not provably absent is successful.",
    "If a student does not provably work then the student does not work.",
    "John is a student who works.",
    "Sue is a student and works.",
    "Mary Ann who is a student is absent.",
    "Exclude that a student who cheats is successful.",
]

RAY_SENTENCES = ["Ray is a student.", "Ray works.", "Ray cheats."]


@pytest.fixture(scope="session")
def lexicon():
    return load(_read_asset("lexicon.lp"))


@pytest.fixture(scope="session")
def grammar():
    return grammar_program()


@pytest.fixture(scope="session")
def workbench():
    return Workbench()


@pytest.fixture(scope="session")
def lookahead_engine(lexicon):
    return LookaheadEngine(lexicon)


@pytest.fixture(scope="session")
def reifier(lexicon):
    return Reifier(lexicon)


@pytest.fixture(scope="session")
def corpus_text():
    return demo_text()
