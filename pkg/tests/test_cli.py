import json
from fractions import Fraction

import pytest

from cobarkit.cli import UsageError, main, parse_class
from cobarkit.gradedlin import QQ, Field, Mod
from cobarkit.workspace import fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--fixture", "example1")
    assert code == 0 and out.strip().endswith("valid")
    code, out, _ = run(capsys, "validate", "--fixture", "bad_degree")
    assert code == 1
    assert "FAIL coalgebras.X: degree: d(w) hits y of degree 4, expected 1" in out


def test_validate_file(capsys, tmp_path):
    p = tmp_path / "ws.json"
    p.write_text(fixture_text("example2"), encoding="utf-8")
    assert run(capsys, "validate", str(p))[0] == 0
    p.write_text("{ broken", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 3 and "line 1" in err


def test_json_twin(capsys):
    code, out, _ = run(capsys, "validate", "--fixture", "bad_span", "--json")
    data = json.loads(out)
    assert code == 1 and data["ok"] is False
    assert data["violations"][0]["object"] == "coalgebras.U"


def test_cobar(capsys):
    code, out, _ = run(capsys, "cobar", "--fixture", "example1", "X", "beta", "--max-weight", "4")
    assert code == 0 and "d²=0: yes" in out
    code, out, _ = run(capsys, "cobar", "--fixture", "example2", "C1", "kappa_ass",
                       "--max-weight", "4", "--json")
    data = json.loads(out)
    assert data["d_squared_zero"] and data["homology"][0]["flag"] == "EXACT"
    assert data["homology"][0]["by_weight"] == {f"1,{w}": 1 for w in range(1, 5)}


def test_cobar_arity_one(capsys):
    code, out, _ = run(capsys, "cobar", "--fixture", "comodules", "M_4", "alpha_cochain",
                       "--bar", "kappa_cochain", "--max-weight", "8", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["levels"][0]["betti"] == {"0": 1, "1": 1, "2": 0}


def test_weq_exit_codes(capsys):
    assert run(capsys, "weq", "--fixture", "example2", "C1->C2", "beta",
               "--schedule", "3,4,5")[0] == 0
    assert run(capsys, "weq", "--fixture", "example2", "C1->C2", "kappa_ass",
               "--schedule", "3,4,5")[0] == 1
    # one level decides an EXACT verdict but not a per-truncation one
    assert run(capsys, "weq", "--fixture", "example2", "C1->C2", "beta", "--schedule", "3")[0] == 0
    assert run(capsys, "weq", "--fixture", "example2", "C1->C2", "kappa_ass",
               "--schedule", "3")[0] == 2
    code, out, _ = run(capsys, "weq", "--fixture", "comodules", "M_8->M_4", "kappa_cochain", "--json")
    assert code == 1 and json.loads(out)["summary"] == "stable-no"


def test_survives(capsys):
    code, out, _ = run(capsys, "survives", "--fixture", "example1", "X", "beta", "--class", "x")
    assert code == 0 and "not-in-span" in out
    code, out, _ = run(capsys, "survives", "--fixture", "example1", "X", "beta",
                       "--class", "x + 2*x^2", "--schedule", "3,4,5")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "weq", "--fixture", "example1", "X", "beta")[0] == 3
    assert run(capsys, "cobar", "--fixture", "example1", "X")[0] == 3
    assert run(capsys, "survives", "--fixture", "example1", "X", "beta")[0] == 3
    assert run(capsys, "cobar", "--fixture", "absent", "X", "beta")[0] == 3
    assert run(capsys, "nonsense")[0] == 3
    assert run(capsys, "cobar", "--fixture", "example1", "X", "beta", "--window", "5")[0] == 3
    assert run(capsys, "weq", "--fixture", "example1", "X->0", "beta", "--stability", "0")[0] == 3


def test_field_flag(capsys):
    code, out, _ = run(capsys, "cobar", "--fixture", "example1", "X", "beta",
                       "--field", "F5", "--max-weight", "3", "--json")
    assert code == 0 and json.loads(out)["d_squared_zero"]


@pytest.mark.parametrize("expr,want", [
    ("x", {"x": 1}),
    ("2*x^2 - x", {"x^2": 2, "x": -1}),
    ("-x + 1/2*w", {"x": -1, "w": Fraction(1, 2)}),
    ("x.w - x.w", {}),
    ("x⊗y + y⊗x", {"x⊗y": 1, "y⊗x": 1}),
])
def test_class_grammar(expr, want):
    assert parse_class(expr, QQ) == want


def test_class_grammar_modular():
    assert parse_class("3*x", Field(5)) == {"x": Mod(3, 5)}
    with pytest.raises(UsageError):
        parse_class("", QQ)
    with pytest.raises(UsageError):
        parse_class("2**x", QQ)
