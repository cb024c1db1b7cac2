import json

import pytest

from uastl.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, main, parse_grammar
from uastl.dataio import save_dataset
from uastl.grammar import GrammarError


@pytest.fixture
def overlap_file(tmp_path, overlap):
    path = tmp_path / "overlap.json"
    save_dataset(overlap, path)
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parse_grammar():
    assert len(parse_grammar("default", 2).families) == 8
    assert len(parse_grammar("axis", 2).families) == 4
    g = parse_grammar("x1>, x2<", 2, bounds=(0.0, 5.0))
    assert [f.sense for f in g.families] == [">", "<"] and g.bounds == (0.0, 5.0)
    with pytest.raises((GrammarError, ValueError)):
        parse_grammar("x3>", 2)


def test_infer_ua_overlap(overlap_file, capsys):
    assert main(["infer-ua", overlap_file, "--max-size", "1", "--grammar", "x1>", "--json"]) == EXIT_OK
    out = _json(capsys)
    assert out["formula"] == "x1 > 5" and out["F"] == -1.0 and out["stop"] == "size cap"


def test_infer_text_output(overlap_file, capsys):
    assert main(["infer-ua", overlap_file, "--max-size", "1"]) == EXIT_OK
    assert "F = " in capsys.readouterr().out


@pytest.mark.parametrize("cmd", ["infer-ua-dt", "infer-rs", "infer-rs-dt"])
def test_other_algorithms(overlap_file, capsys, cmd):
    assert main([cmd, overlap_file, "--max-size", "1", "--samples", "5", "--json"]) == EXIT_OK
    out = _json(capsys)
    assert "formula" in out and ("F" in out or "s" in out)


def test_emit_smt(overlap_file, tmp_path, capsys):
    smt = tmp_path / "p.smt2"
    assert main(["infer-ua", overlap_file, "--max-size", "1", "--emit-smt", str(smt)]) == EXIT_OK
    assert "(maximize Y)" in smt.read_text()


def test_eval_and_oracle(overlap_file, capsys):
    assert main(["eval", overlap_file, "x1 > 5", "--json"]) == EXIT_OK
    out = _json(capsys)
    assert out["F"] == -1.0 and out["entries"][0]["worst"] == -1.0
    assert main(["oracle", overlap_file, "F[0,1)(x1 > 5)", "--json"]) == EXIT_OK
    assert _json(capsys)["all_match"]


def test_gen(tmp_path, capsys):
    out = tmp_path / "g.csv"
    assert main(["gen", "--kind", "non-separable", "--dims", "1", "--length", "3", "-o", str(out)]) == EXIT_OK
    assert out.exists()


@pytest.mark.parametrize("argv", [
    ["eval", "{data}", ""],
    ["eval", "{data}", "x1 > & 2"],
    ["eval", "missing.json", "x1 > 2"],
    ["oracle", "{data}", "x1 > 2", "--entry", "7"],
    ["infer-ua", "{data}", "--grammar", "x1>=,"],
    ["infer-ua", "{data}", "--min-classification", "2"],
    ["gen", "--dims", "3", "-o", "{data}"],
])
def test_input_errors_exit_2(overlap_file, capsys, argv):
    argv = [a.replace("{data}", overlap_file) for a in argv]
    assert main(argv) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_syntax_error_shows_caret(overlap_file, capsys):
    main(["eval", overlap_file, "x1 > & 2"])
    assert "^" in capsys.readouterr().err


def test_solver_failure_exit_3(overlap_file, capsys):
    argv = ["infer-ua", overlap_file, "--max-size", "1", "--solver", "external", "--solver-cmd", "no-such-solver-exe"]
    assert main(argv) == EXIT_SOLVER


def test_bench_cli(tmp_path, overlap_file, capsys):
    out = tmp_path / "bench"
    argv = ["bench", overlap_file, "--max-size", "1", "--samples", "3", "--algorithms", "TLI-UA", "TLI-RS", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert (out / "results.json").exists() and "TLI-UA" in capsys.readouterr().out
