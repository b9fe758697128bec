import json
from fractions import Fraction

import pytest

from cobarkit.coalg import validate_coalgebra
from cobarkit.gradedlin import Field, Mod, QQ
from cobarkit.workspace import (
    SCHEMA, ValidationFailure, WorkspaceError, build, dump, fixture_names, fixture_text, load,
    parse_text, scalar,
)


def test_fixture_names():
    assert {"example1", "example2", "comodules", "bad_degree", "bad_span"} <= set(fixture_names())


@pytest.mark.parametrize("name", ["example1", "example2", "comodules"])
def test_round_trip(tmp_path, name):
    ws = load(fixture=name)
    out = tmp_path / f"{name}.json"
    dump(ws, out)
    again = load(out)
    assert again.raw == ws.raw == json.loads(fixture_text(name))
    for g in ws.coalgebras:
        a, b = ws.coalgebras[g], again.coalgebras[g]
        assert a.generators == b.generators
        assert a.differential == b.differential
        assert a.decomposition == b.decomposition


def test_scalars():
    assert scalar(QQ, "1/2") == Fraction(1, 2)
    assert scalar(QQ, 3) == 3
    assert scalar(QQ, "-4") == -4
    F5 = Field(5)
    assert scalar(F5, "3 mod 5") == Mod(3, 5)
    assert scalar(F5, "1/2") == Mod(3, 5)
    for bad in (True, 0.5, "abc", "1/0"):
        with pytest.raises(WorkspaceError):
            scalar(QQ, bad)
    with pytest.raises(Exception):
        scalar(F5, "1 mod 7")


def test_parse_error_location():
    with pytest.raises(WorkspaceError, match=r"line 3, column \d+"):
        parse_text('{\n  "schema": "x",\n  oops\n}', "ws.json")


def test_schema_checks():
    with pytest.raises(WorkspaceError, match="unsupported schema"):
        build({"schema": "other"})
    with pytest.raises(WorkspaceError, match="unknown top-level keys"):
        build({"schema": SCHEMA, "extras": {}})
    with pytest.raises(WorkspaceError, match="must be an object"):
        parse_text("[1, 2]")


def test_unresolved_reference():
    data = json.loads(fixture_text("example1"))
    data["morphisms"]["X->0"]["target"] = "nowhere"
    with pytest.raises(WorkspaceError, match="nowhere"):
        build(data)


def test_missing_file(tmp_path):
    with pytest.raises(WorkspaceError, match="cannot read"):
        load(tmp_path / "absent.json")
    with pytest.raises(WorkspaceError, match="no bundled fixture"):
        load(fixture="absent")


def test_collect_mode():
    ws = load(fixture="bad_degree", collect=True)
    assert ws.violations == [("coalgebras.X", "degree: d(w) hits y of degree 4, expected 1")]
    with pytest.raises(ValidationFailure):
        load(fixture="bad_degree")


def test_explicit_coalgebra_matches_fixture():
    X = load(fixture="example1").coalgebras["X"]
    terms = [[X.cooperad.label(c), list(w), str(v)] for (c, w), v in X.decomposition["w"].items()]
    data = {
        "schema": SCHEMA,
        "cooperads": {"Ass^c": {"dual_of": "Ass"}},
        "coalgebras": {"Y": {"explicit": {
            "cooperad": "Ass^c",
            "generators": [["x", 1, 1], ["w", 2, 2]],
            "differential": {"w": {"x": "1"}},
            "decomposition": {"w": terms},
        }}},
    }
    Y = build(data).coalgebras["Y"]
    assert validate_coalgebra(Y).ok
    assert Y.decomposition == X.decomposition


def test_field_change_rebuilds():
    data = json.loads(fixture_text("example2"))
    data["field"] = "F5"
    ws = build(data)
    assert ws.field == Field(5)
    assert ws.coalgebras["C2"].field == Field(5)


def test_get_error_lists_known_names():
    ws = load(fixture="example2")
    with pytest.raises(WorkspaceError, match="known: T, C1, C2"):
        ws.get("coalgebras", "C3")
