import json
from pathlib import Path

import pytest

from psverify.cli import main
from psverify.fixtures import FixtureError, load_fixture, parse_fixture_text
from psverify.suites import enumeration_cost

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def _run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


BAD_FIXTURES = [
    ("field: {p: 4}\ntuples: [{name: x, characters: [{}, {}]}]\n", "field.p"),
    ("field: {p: 3}\ntuples: []\n", "tuples"),
    ("field: {p: 3}\ntuples: [{name: x, characters: [{}]}]\n", "characters"),
    ("field: {p: 3}\ntuples: [{name: x, characters: [{}, {colour: 1}]}]\n", "colour"),
    ("field: {p: 3}\ntuples: [{name: x, expect: maybe, characters: [{}, {}]}]\n", "expect"),
    ("field: {p: 3}\ntuples:\n  - name: x\n    characters:\n      - {conductor: 1, unit_char: [0]}\n      - {}\n",
     "conductor"),
    ("field: {p: 3}\ntuples: [{name: x, characters: [{uniformizer_value: 'zeta('}, {}]}]\n", "uniformizer_value"),
    ("field: {p: 3}\ntuples: [{name: x, characters: [{algebraic_exponents: [1, 2]}, {}]}]\n", "algebraic_exponents"),
    ("field: {p: 3, p: 5}\ntuples: [{name: x, characters: [{}, {}]}]\n", "p"),
    ("field: [3]\ntuples: [{name: x, characters: [{}, {}]}]\n", "field"),
    ("tuples: [{name: x, characters: [{}, {}]}]\n", "field"),
]


@pytest.mark.parametrize("text, needle", BAD_FIXTURES)
def test_fixture_errors_name_the_field(text, needle):
    with pytest.raises(FixtureError) as info:
        parse_fixture_text(text, "inline")
    assert needle in str(info.value)
    assert "line" in str(info.value)


def test_conductor_error_reports_the_line():
    text = "field: {p: 3}\ntuples:\n  - name: x\n    characters:\n      - {conductor: 1, unit_char: [0]}\n      - {}\n"
    with pytest.raises(FixtureError, match="line 5"):
        parse_fixture_text(text, "inline")


def test_example_fixtures_parse():
    fx = load_fixture(FIXTURES / "gl3_examples.yaml")
    assert (fx.p, fx.f) == (3, 1)
    assert len(fx.tuples) == 12
    assert {len(t.characters) for t in fx.tuples} == {2, 3, 4}


def test_decide_on_example_fixture(capsys, tmp_path):
    out_path = tmp_path / "decide.json"
    code, out, _ = _run(["decide", FIXTURES / "gl3_examples.yaml", "--out", out_path], capsys)
    assert code == 0
    assert "12/12" in out
    report = json.loads(out_path.read_text())
    assert report["schema"] == "psverify-report/1"
    assert report["summary"] == {"checks": 12, "passed": 12, "failed": 0, "status": "pass"}
    verdicts = {r["check"]: r["measured"]["verdict"]["decision"] for r in report["records"]}
    assert verdicts["decide[generic_unramified]"] == "irreducible"
    assert verdicts["decide[gl4_linked_pair]"] == "inconclusive"


def test_decide_reports_a_wrong_expectation(capsys, tmp_path):
    path = tmp_path / "wrong.yaml"
    path.write_text("field: {p: 3}\ntuples: [{name: x, expect: irreducible, characters: [{}, {}, {}]}]\n")
    code, out, _ = _run(["decide", path], capsys)
    assert code == 1
    assert json.loads(out)["summary"]["failed"] == 1


def test_bad_fixture_exits_two(capsys, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("field: {p: 3}\ntuples: [{name: x, characters: [{}, {nonsense: 1}]}]\n")
    code, out, err = _run(["decide", path], capsys)
    assert code == 2 and out == ""
    assert err.startswith("psverify: error:") and "nonsense" in err


def test_verify_explicit_is_deterministic(capsys):
    argv = ["verify", "explicit", "--p", 2, "--level", 1, "--seed", 5]
    code1, out1, _ = _run(argv, capsys)
    code2, out2, _ = _run(argv + ["--jobs", 2], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["config"]["seed"] == 5
    assert all(r["status"] == "pass" for r in report["records"])
    assert all(set(r) >= {"check", "anchor", "status", "passed", "failed", "fixture"} for r in report["records"])


def test_verify_with_fixture_file(capsys):
    code, out, _ = _run(["verify", "explicit", "--p", 3, "--fixture", FIXTURES / "q3_suite_triples.yaml"], capsys)
    assert code == 0
    fixtures = {r["fixture"] for r in json.loads(out)["records"]}
    assert fixtures == {"unramified_generic", "quadratic_middle"}


def test_verify_fixture_field_mismatch(capsys):
    code, _, err = _run(["verify", "explicit", "--p", 2, "--fixture", FIXTURES / "q3_suite_triples.yaml"], capsys)
    assert code == 2 and "differs" in err


def test_budget_refusal(capsys):
    assert enumeration_cost(3, 4) == 3 ** 36
    code, out, err = _run(["verify", "density", "--p", 3, "--level", 4], capsys)
    assert code == 2 and out == ""
    assert "budget" in err
    code, _, err = _run(["verify", "explicit", "--p", 2, "--level", 2, "--budget", 1000], capsys)
    assert code == 2 and "budget" in err


def test_density_level_too_small_names_minimal_level(capsys):
    code, _, err = _run(["verify", "density", "--p", 3, "--level", 1], capsys)
    assert code == 2
    assert err.startswith("psverify: precision overflow:") or err.startswith("psverify: error:")
    assert "M = 2" in err


def test_non_prime_p(capsys):
    code, _, err = _run(["verify", "lemmas", "--p", 6], capsys)
    assert code == 2 and "not prime" in err


def test_failing_suite_exits_one(capsys, tmp_path):
    out_path = tmp_path / "eig.json"
    code, out, _ = _run(["verify", "eigenspace", "--p", 2, "--level", 1, "--out", out_path], capsys)
    assert code == 1
    report = json.loads(out_path.read_text())
    failing = {r["check"] for r in report["records"] if r["status"] == "fail"}
    assert failing == {"degenerate_dimension_exceeds_levi"}
