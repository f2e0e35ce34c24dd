import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggrec.algebra import BiPoly
from aggrec.cli import main
from aggrec.cli.modelio import load_model, loads_strict, model_from_json
from aggrec.cli.parser import ParseError, format_equation, parse_algebraic_expression
from aggrec.risk import ModelError

MODELS = Path(__file__).resolve().parent.parent / "models"
Z, Y = BiPoly.z(), BiPoly.y()


# -- parser --------------------------------------------------------------------

def test_parse_simple_equation():
    p = parse_algebraic_expression("(1-(1-1/3)*z)*y^2 = 1/3")
    assert p == (1 - Z * F(2, 3)) * Y**2 - F(1, 3)
    assert p.format() == "-2/3*z*y^2 + y^2 - 1/3"


def test_parse_clears_denominators():
    p = parse_algebraic_expression("y = z / (1 - z)")
    assert p == Y * (1 - Z) - Z


def test_parse_negative_exponent_and_unary_minus():
    assert parse_algebraic_expression("y = -z^(-1) + 1/z") == Y * Z
    assert parse_algebraic_expression("-y^2 = -(z)") == -(Y**2) + Z


@pytest.mark.parametrize("text,pos", [
    ("y = 0.5*z", 5),
    ("y = x + 1", 4),
    ("y = z^(1/2)", 8),
    ("y = z^2^3", 7),
    ("y = 1/(z - z)", 5),
    ("y = z = 1", 6),
    ("y + z = z + y", 0),
    ("y = (z + 1", 10),
    ("y = 1e3", 5),
    ("y = z $ 2", 6),
    ("y 2", 2),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_algebraic_expression(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


CORPUS = [
    "y = z", "y = 1 - z", "y^2 = 1 - z", "(1 - z)*y = 1", "y = z^2 + z + 1",
    "y^3 = (1 - z/2)^2", "2*y = z", "y = 1/2*z + 1/2", "y = 1/3*z^2 + 2/3", "(1 - 2/3*z)*y^2 = 1/3",
    "y*(1 - z/2) = z/2", "(1 - z)^2*y = z^2", "y^2 - y + z = 0", "z*y^2 - y + 1 = 0", "y = (z + 1)^4",
    "y^5 = z + 1", "y*y*y = z*z", "3*y^2*z - 7*y*z^2 + 11 = 0", "y = -z", "-y = z - 1",
    "y^(2) = z^(+3) + 1", "(y - 1)*(y + 1) = z", "y = z*(1 - z)^3", "y/2 = z/3", "y^2/5 = 1 - z/7",
    "(2*y - z)^2 = 4*z", "y = 1 + z + z^2 + z^3 + z^4", "((y)) = ((z))", "y - z*y^2 = 1", "y^4 = 16*(1 - z)",
    "y = 1 - 1/4*z", "(1 - 1/2*z)*y = 1/2*z", "y^2*(1 - 3/4*z) = 1/4", "y^3 = 1/8 - 1/8*z", "y = 2/(2 - z)",
    "y*(3 - z) = 2", "y = z^2/(1 - z)", "y^2 = 1/(1 - z)", "y*z^2 - z + y = 1", "y = 7",
    "y^2 + z^2 = 1", "y^6 = (1 - z)^5", "10*y = 9*z + 1", "y - 1 = z*y^2", "4*y^2 - 4*y + 1 = z",
    "y^2 = z*(z - 1)*(z - 2)", "(y + z)^3 = 1", "y = (1 - z)^(-2)", "y^(-1) = 1 - z", "z*(y - 1) = y^2 - y*z",
]


def test_corpus_has_fifty_expressions():
    assert len(CORPUS) == 50 and len(set(CORPUS)) == 50


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip_corpus(text):
    p = parse_algebraic_expression(text)
    assert parse_algebraic_expression(format_equation(p)) == p


def _leaf():
    return st.one_of(
        st.integers(0, 9).map(lambda k: (str(k), BiPoly.from_terms({(0, 0): k}))),
        st.just(("z", Z)),
        st.just(("y", Y)),
    )


def _extend(children):
    def combine(op, a, b):
        (sa, pa), (sb, pb) = a, b
        if op == "+":
            return (f"({sa} + {sb})", pa + pb)
        if op == "-":
            return (f"({sa} - {sb})", pa - pb)
        return (f"{sa}*{sb}", pa * pb)

    power = st.tuples(children, st.integers(0, 3)).map(lambda t: (f"({t[0][0]})^{t[1]}", t[0][1] ** t[1]))
    scaled = st.tuples(children, st.integers(1, 9)).map(lambda t: (f"{t[0][0]}/{t[1]}", t[0][1] * F(1, t[1])))
    binary = st.builds(combine, st.sampled_from("+-*"), children, children)
    return st.one_of(binary, power, scaled)


expressions = st.recursive(_leaf(), _extend, max_leaves=8)


@given(expressions, expressions)
def test_parser_matches_direct_construction(lhs, rhs):
    (sl, pl), (sr, pr) = lhs, rhs
    expected = pl - pr
    text = f"{sl} = {sr}"
    if expected.is_zero():
        with pytest.raises(ParseError):
            parse_algebraic_expression(text)
        return
    p = parse_algebraic_expression(text)
    assert p == expected
    assert parse_algebraic_expression(format_equation(p)) == p


# -- model files ---------------------------------------------------------------

def test_model_rejects_decimal_literal():
    with pytest.raises(ModelError, match="decimal"):
        loads_strict('{"claim_number": {"kind": "poisson", "lambda": 0.5}}')


def test_model_rejects_decimal_string():
    doc = {"format_version": 1, "claim_number": {"kind": "poisson", "lambda": "0.5"},
           "claim_size": {"kind": "geometric_shifted", "q": "1/2"}}
    with pytest.raises(ModelError):
        model_from_json(doc)


def test_model_schema_errors():
    doc = {"format_version": 2, "claim_number": {"kind": "poisson", "lambda": "1"},
           "claim_size": {"kind": "geometric_shifted", "q": "1/2"}}
    with pytest.raises(ModelError, match="schema"):
        model_from_json(doc)


@pytest.mark.parametrize("path", sorted(MODELS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_models_load(path):
    mf = load_model(str(path))
    assert mf.model.fingerprint()


# -- commands and exit codes ---------------------------------------------------

def write_model(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_exit_codes_for_bad_input(tmp_path, capsys):
    assert main(["frobnicate"]) == 2
    assert main(["derive", "--model", str(tmp_path / "missing.json")]) == 2
    bad = write_model(tmp_path, {"format_version": 1, "claim_number": {"kind": "poisson", "lambda": "1"},
                                 "claim_size": {"kind": "pmf", "pmf": ["1/2", "1/3"]}})
    assert main(["derive", "--model", bad]) == 2
    model = str(MODELS / "poisson_unit_claims.json")
    assert main(["bench", "--model", model, "--sizes", ""]) == 2
    assert main(["eval", "--model", model, "--digits", "5"]) == 2
    capsys.readouterr()


def test_derive_and_eval_are_byte_deterministic(tmp_path):
    model = str(MODELS / "example2_gig_geometric.json")
    outs = []
    for k in range(2):
        d, e = tmp_path / f"d{k}.json", tmp_path / f"e{k}.csv"
        assert main(["derive", "--model", model, "--out", str(d)]) == 0
        assert main(["eval", "--model", model, "--n", "300", "--out", str(e), "--recurrence", str(d)]) == 0
        outs.append((d.read_bytes(), e.read_bytes()))
    assert outs[0] == outs[1]
    doc = json.loads(outs[0][0])
    assert doc["format_version"] == 1
    lines = outs[0][1].decode().splitlines()
    assert lines[0] == "n,a_n" and len(lines) == 302


def test_eval_exact_mode(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["eval", "--model", str(MODELS / "poisson_two_point.json"), "--mode", "exact", "--n", "4",
                 "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    # a_k / a_0 for Poisson(3/2) with claims 1 or 2 (prob 1/2 each)
    assert [F(v) for _, v in rows][:3] == [F(1), F(3, 4), F(3, 4) ** 2 / 2 + F(3, 4)]


def test_verify_passes_and_negative_control_fails(tmp_path):
    model = str(MODELS / "example1_negbin_negbin.json")
    good = tmp_path / "good.json"
    assert main(["verify", "--model", model, "--n", "80", "--out", str(good)]) == 0
    assert json.loads(good.read_text())["pass"] is True

    d = tmp_path / "d.json"
    assert main(["derive", "--model", model, "--out", str(d)]) == 0
    doc = json.loads(d.read_text())
    c = doc["recurrence"]["coeffs"][0]
    c[0] = str(F(c[0]) + 1)  # perturb one coefficient
    d.write_text(json.dumps(doc))
    bad = tmp_path / "bad.json"
    assert main(["verify", "--model", model, "--n", "80", "--recurrence", str(d), "--out", str(bad)]) == 1
    report = json.loads(bad.read_text())
    assert report["pass"] is False
    assert any(not c["pass"] for c in report["checks"])


def test_analyze_reports_verdict(tmp_path):
    out = tmp_path / "a.json"
    assert main(["analyze", "--model", str(MODELS / "example3_poisson_negbin.json"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "stable" and rep["format_version"] == 1


def test_bench_table(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--model", str(MODELS / "example1_negbin_negbin.json"), "--sizes", "1000,1e4",
                 "--conv-n", "500", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "task,n,seconds"
    assert [line.split(",")[:2] for line in lines[1:]] == [["recurrence", "1000"], ["recurrence", "10000"],
                                                           ["convolution", "500"]]
