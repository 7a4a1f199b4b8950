from importlib import resources
from pathlib import Path

from cnlasp.cli import main

from conftest import CORPUS_SENTENCES
from test_grammar import SENTENCE_1_TREE

DEMO_MODEL_LINES = [
    "-work(mary_ann)",
    "absent(mary_ann)",
    "student(john)",
    "student(mary_ann)",
    "student(sue)",
    "successful(john)",
    "successful(sue)",
    "work(john)",
    "work(sue)",
]


def asset_path(name):
    return str(resources.files("cnlasp").joinpath("assets").joinpath(name))


def test_solve_demo(capsys):
    code = main(["solve", asset_path("engine_demo.lp")])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines() == DEMO_MODEL_LINES


def test_solve_demo_with_extra_facts_unsat(tmp_path, capsys):
    source = Path(asset_path("engine_demo.lp")).read_text()
    extended = tmp_path / "extended.lp"
    extended.write_text(source + "student(ray). work(ray). cheat(ray).\n")
    code = main(["solve", str(extended)])
    out = capsys.readouterr().out
    assert code == 1
    assert out.startswith("UNSAT")
    assert "cheat" in out


def test_solve_empty_program(tmp_path, capsys):
    empty = tmp_path / "empty.lp"
    empty.write_text("")
    code = main(["solve", str(empty)])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_solve_syntax_error(tmp_path, capsys):
    bad = tmp_path / "bad.lp"
    bad.write_text("p(X :- q.")
    assert main(["solve", str(bad)]) == 2


def test_parse_sentence_1(capsys):
    code = main(["parse", "--text", CORPUS_SENTENCES[0]])
    out = capsys.readouterr().out
    assert code == 0
    assert out == SENTENCE_1_TREE + "\n"


def test_parse_dead_end(capsys):
    assert main(["parse", "--text", "student Every ."]) == 1


def test_run_corpus(capsys, corpus_text, tmp_path):
    textfile = tmp_path / "demo.txt"
    textfile.write_text(corpus_text)
    code = main(["run", str(textfile)])
    out = capsys.readouterr().out
    assert code == 0
    assert "rule(1)." in out
    assert "head(1, lit(func(successful), arg(sk(1))))." in out
    model_lines = [line for line in out.splitlines() if line.startswith("in_AS(")]
    assert len(model_lines) == 9
    assert "in_AS(lit(func(neg(work)), arg(mary_ann)))" in model_lines


def test_run_empty_file(tmp_path, capsys):
    textfile = tmp_path / "empty.txt"
    textfile.write_text("")
    code = main(["run", str(textfile)])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == ""


def test_run_corpus_with_ray_unsat(tmp_path, capsys, corpus_text):
    textfile = tmp_path / "extended.txt"
    textfile.write_text(corpus_text + "Ray is a student. Ray works. Ray cheats.\n")
    code = main(["run", str(textfile)])
    out = capsys.readouterr().out
    assert code == 1
    assert "UNSAT" in out
    assert "violated constraint: 9" in out


def test_lookahead_table(capsys):
    code = main(["lookahead", "--prefix", "Every student"])
    out = capsys.readouterr().out
    assert code == 0
    assert "% depth 2, 2 fragment(s)" in out
    assert "who" in out
    assert "works" in out


def test_lookahead_initial(capsys):
    code = main(["lookahead", "--prefix", ""])
    out = capsys.readouterr().out
    assert code == 0
    assert "Every" in out


def test_lookahead_dead_end(capsys):
    assert main(["lookahead", "--prefix", "student Every"]) == 1
