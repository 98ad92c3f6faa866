import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superinertia import cli
from superinertia.documents import (corpus, document_of, dump_document, generate_instance,
                                    parse_document)
from superinertia.errors import InputParseError
from superinertia.pipeline import Analysis
from superinertia.report import emit_dot, emit_json, emit_text, run_corpus, run_report
from superinertia.valued import find_ultrametric_violation

from conftest import EXAMPLE_A, EXAMPLE_B, laurent_doc

params = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 4),
                   st.sampled_from(["0", "1", "3/2", "1/3"]), st.integers(0, 10_000))


@given(params)
@settings(max_examples=25, deadline=None)
def test_document_round_trip(args):
    doc = generate_instance(*args)
    assert document_of(parse_document(doc)) == doc
    assert document_of(parse_document(dump_document(doc))) == doc


def test_hand_written_laurent_round_trip():
    doc = laurent_doc(2, EXAMPLE_A)
    back = document_of(parse_document(doc))
    assert back["branch"][2] == {"alpha": "t^1", "beta": "t^1 + t^2", "m": 1}
    assert parse_document(back).matrix == parse_document(doc).matrix
    assert document_of(parse_document(back)) == back


@given(params)
@settings(max_examples=25, deadline=None)
def test_generator_is_deterministic_and_valid(args):
    doc = generate_instance(*args)
    assert doc == generate_instance(*args)
    config = parse_document(doc)
    assert find_ultrametric_violation(config.matrix) is None
    Analysis(config)  # passes both validation gates
    assert config.h == args[1]
    assert config.mode == ("laurent" if Fraction(args[2]) == 0 else "matrix")


def test_corpus_spans_grid():
    keys = [key for key, _ in corpus(45)]
    assert {(p, h, vp) for p, h, vp, _ in keys} == {
        (p, h, Fraction(v)) for p in (2, 3, 5) for h in range(1, 6) for v in ("0", "1", "3/2")}


@pytest.mark.parametrize("doc, fragment", [
    ("{", "invalid JSON"),
    ("[]", "JSON object"),
    ({"p": 2}, "missing field"),
    ({"p": "2", "branch": []}, "integer"),
    ({"p": 2, "branch": [{"alpha": "1", "beta": "0", "m": 1}, {"alpha": "0", "beta": "t", "m": 1}]}, "inf"),
    ({"p": 2, "mode": "other", "branch": [{"alpha": "1", "beta": "inf", "m": 1},
                                          {"alpha": "0", "beta": "t", "m": 1}]}, "mode"),
    ({"p": 2, "vp": "1", "branch": [{"alpha": "1", "beta": "inf", "m": 1},
                                    {"alpha": "0", "beta": "t", "m": 1}]}, "vp = 0"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(InputParseError) as info:
        parse_document(doc)
    assert fragment in str(info.value)
    assert info.value.exit_code == 2


def test_report_example_a():
    report = run_report(laurent_doc(2, EXAMPLE_A), oracle=True)
    assert report["gram"]["formula"] == report["gram"]["transvections"] == report["gram"]["oracle"]
    assert report["gram"]["formula"] == [["6", "2"], ["2", "4"]]
    assert all(report["verdicts"].values())
    assert report["index_tree"] == [[0, 1], [0, 2]]
    assert emit_json(report) == emit_json(run_report(laurent_doc(2, EXAMPLE_A), oracle=True))
    text = emit_text(report)
    assert "gram (oracle):" in text and "FAIL" not in text


def test_report_reduction_display():
    report = run_report(laurent_doc(2, EXAMPLE_A), ell=5, power=1)
    assert report["monodromy"]["reduced"]["modulus"] == 5
    assert report["monodromy"]["reduced"]["matrix"][0][2] == 1


def test_dot_index_edges():
    assert "i0 -> i1;" in emit_dot(run_report(laurent_doc(2, EXAMPLE_A)))
    dot_b = emit_dot(run_report(laurent_doc(2, EXAMPLE_B)))
    assert "i0 -> i2;" in dot_b and "i2 -> i1;" in dot_b and "i0 -> i1;" not in dot_b
    dot_h1 = emit_dot(run_report(laurent_doc(2, ["1", "0", "t"])))
    assert dot_h1.count("->") - dot_h1.split("digraph index_tree")[0].count("->") == 1
    assert dot_b.count("digraph") == 2


def _write(tmp_path, doc):
    path = tmp_path / "input.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_cli_analyze_ok(tmp_path, capsys):
    assert cli.main(["analyze", "--input", _write(tmp_path, laurent_doc(2, EXAMPLE_A)), "--oracle"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["gram"]["oracle"] == [["6", "2"], ["2", "4"]]


def test_cli_parse_error(tmp_path):
    assert cli.main(["analyze", "--input", _write(tmp_path, "{not json")]) == 2
    assert cli.main(["analyze", "--input", str(tmp_path / "missing.json")]) == 2


def test_cli_ultrametric_violation(tmp_path, capsys):
    doc = {"p": 2, "vp": "0", "mode": "matrix",
           "branch": [{"alpha": "a", "beta": "inf", "m": 1}, {"alpha": "b", "beta": "c", "m": 1}],
           "matrix": [["inf", "1", "2"], ["1", "inf", "3"], ["2", "3", "inf"]]}
    assert cli.main(["analyze", "--input", _write(tmp_path, doc)]) == 3
    assert "UltrametricViolation" in capsys.readouterr().err


def test_cli_split_degeneracy_violation(tmp_path):
    doc = {"p": 2, "vp": "1", "mode": "matrix",
           "branch": [{"alpha": "a", "beta": "inf", "m": 1}, {"alpha": "b", "beta": "c", "m": 1}],
           "matrix": [["inf", "0", "0"], ["0", "inf", "3"], ["0", "3", "inf"]]}
    assert cli.main(["analyze", "--input", _write(tmp_path, doc)]) == 4


def test_cli_verdict_failure(tmp_path, monkeypatch):
    from superinertia import pipeline
    monkeypatch.setattr(pipeline, "is_positive_definite", lambda gram: False)
    assert cli.main(["analyze", "--input", _write(tmp_path, laurent_doc(2, EXAMPLE_A))]) == 5


def test_cli_gen_and_check(capsys):
    assert cli.main(["gen", "--p", "3", "--h", "2", "--vp", "1", "--seed", "7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == generate_instance(3, 2, 1, 7)
    assert cli.main(["gen", "--p", "4", "--h", "2"]) == 2
    assert cli.main(["check", "--seeds", "15"]) == 0
    assert json.loads(capsys.readouterr().out)["failures"] == []


def test_cli_emit_modes(tmp_path, capsys):
    path = _write(tmp_path, laurent_doc(2, EXAMPLE_B))
    assert cli.main(["analyze", "--input", path, "--emit", "dot"]) == 0
    assert "digraph index_tree" in capsys.readouterr().out
    assert cli.main(["analyze", "--input", path, "--emit", "text"]) == 0
    assert "index tree: 0->2, 2->1" in capsys.readouterr().out


def test_run_corpus_summary():
    summary = run_corpus(6)
    assert summary["instances"] == 6 and summary["failures"] == []
