import pytest

from cobarkit.cobar import (
    alpha_weq, class_survives, cobar_complex, cobar_map, functoriality_check, homology_table,
)
from cobarkit.gradedlin import AlgebraError, homology
from cobarkit.sigmaop import preset_operad_map
from cobarkit.twisting import preset_twisting
from tests.oracles import ClassicalCobar

ORACLES = {
    "X": ClassicalCobar({"x": 1, "w": 2}, {"w": {"x": 1}}, {"w": {("x", "x"): 1}}),
    "C1": ClassicalCobar({"x": 1}, {}, {}),
    "C2": ClassicalCobar({"x": 1, "y": 4, "z": 5}, {"z": {"y": 1}},
                         {"z": {("x", "y"): 1, ("y", "x"): 1}}),
}


@pytest.fixture(scope="module")
def coalgebras(X, C1, C2):
    return {"X": X, "C1": C1, "C2": C2}


@pytest.mark.parametrize("name", ["kappa_ass", "beta", "epsilon"])
@pytest.mark.parametrize("coalg", ["X", "C1", "C2"])
def test_dsquared(tw, coalgebras, name, coalg):
    c = cobar_complex(tw[name], coalgebras[coalg], 5, check=False)
    assert c.dsquared_violations() == []
    assert c.weight_violations() == []


def test_example1_beta_slices(tw, X):
    W = 8
    c = cobar_complex(tw["beta"], X, W, (0, W))
    dims = c.dims()
    assert not any(d == 0 for d, _ in dims)
    for w in range(1, W + 1):
        assert dims[(1, w)] == 1 and dims[(2, w)] == 1
    for k in c.keys:
        if c.model.degree(k) != 2 or c.model.weight(k) > W - 1:
            continue
        img = c.image(k)
        n = c.model.weight(k) - 1
        assert len(img) == 2
        got = {c.model.label(q): abs(x) for q, x in img.items()}
        assert sorted(got.values()) == [1, 2]
        hit = {c.model.weight(q) for q in img}
        assert hit == {n + 1, n + 2}


def test_example1_beta_label_form(tw, X):
    c = cobar_complex(tw["beta"], X, 4)
    assert {c.model.label(q): x for q, x in c.image(c.key_of("w")).items()} == {"x": 1, "x^2": 2}


@pytest.mark.parametrize("coalg", ["X", "C1", "C2"])
@pytest.mark.parametrize("N", [3, 4, 5])
def test_kappa_homology_matches_classical_cobar(tw, coalgebras, coalg, N):
    c = cobar_complex(tw["kappa_ass"], coalgebras[coalg], N)
    rep = homology(c.slice())
    assert rep.betti == ORACLES[coalg].betti(N, rep.window)


def test_example2_kappa_slices(tw, C2):
    W = 6
    c = cobar_complex(tw["kappa_ass"], C2, W, (3, 5))
    dims = c.dims()
    assert not any(d == 3 for d, _ in dims)
    deg4 = {c.model.label(k) for k in c.keys if c.model.degree(k) == 4}
    deg5 = {c.model.label(k) for k in c.keys if c.model.degree(k) == 5}
    want4 = {".".join(["x"] * m + ["y"] + ["x"] * n) for m in range(W) for n in range(W - m)}
    want5 = {".".join(["x"] * m + ["z"] + ["x"] * n) for m in range(W) for n in range(W - m)}
    assert deg4 == want4
    assert deg5 == want5


def test_example2_c1_homology_in_degree_one(tw, C1):
    for W in (3, 6):
        h, exact = homology_table(cobar_complex(tw["kappa_ass"], C1, W, (0, 8)))
        assert exact
        assert {d for d, b in h.betti.items() if b} == {1}
        assert all(b == 1 for (d, _), b in h.betti_by_weight.items() if d == 1)


def test_survival(tw, X, C2):
    cx = cobar_complex(tw["beta"], X, 3)
    cert = class_survives(cx, {"x": 1}, range(3, 11))
    assert cert.survives and cert.stabilized
    assert cert.verdict == "stable not-in-span (semi-decided)"
    cy = cobar_complex(tw["kappa_ass"], C2, 1, (4, 5))
    assert class_survives(cy, {"y": 1}, range(3, 11)).survives


def test_survival_agrees_with_oracle(tw, C2):
    c = cobar_complex(tw["kappa_ass"], C2, 1, (4, 5))
    for N in range(3, 7):
        ours = class_survives(c, {"y": 1}, [N], 1).levels[0][1]
        theirs = ORACLES["C2"].boundary_contains({("y",): 1}, N)
        assert (ours == "in-span") == theirs


def test_class_survives_input_checks(tw, X):
    c = cobar_complex(tw["beta"], X, 3)
    with pytest.raises(AlgebraError, match="not a cycle"):
        class_survives(c, {"w": 1}, [3])
    with pytest.raises(AlgebraError, match="zero class"):
        class_survives(c, {"x": 0}, [3])
    with pytest.raises(AlgebraError, match="not a basis element"):
        class_survives(c, {"q": 1}, [3])


def test_boundary_is_in_span(tw, X):
    c = cobar_complex(tw["beta"], X, 3)
    cert = class_survives(c, {"x": 1, "x^2": 2}, range(3, 7))
    assert not cert.survives and cert.levels[-1][1] == "in-span"


def test_verdicts(ex1, ex2):
    fX, fC = ex1.morphisms["X->0"], ex2.morphisms["C1->C2"]
    tw = ex1.twisting
    r = alpha_weq(tw["epsilon"], fX, (0, 6), [3, 4, 5, 6])
    assert (r.summary, r.flag) == ("stable-yes", "EXACT")
    r = alpha_weq(tw["beta"], fX, (0, 6), [3, 4, 5, 6])
    assert r.summary == "stable-no" and r.flag == "PER-TRUNCATION"
    r = alpha_weq(tw["beta"], fC, (0, 6), [3, 4, 5])
    assert (r.summary, r.flag) == ("stable-yes", "EXACT")
    r = alpha_weq(tw["kappa_ass"], fC, (0, 6), [3, 4, 5])
    assert r.summary == "stable-no" and r.witnesses


def test_single_level_is_unstable(ex1):
    r = alpha_weq(ex1.twisting["beta"], ex1.morphisms["X->0"], (0, 6), [3])
    assert r.summary == "unstable"


@pytest.mark.parametrize("N", [3, 4, 5])
def test_nesting(ex1, ex2, N):
    tw = ex1.twisting
    for f in (ex1.morphisms["X->0"], ex2.morphisms["C1->C2"]):
        v = {a: alpha_weq(tw[a], f, (0, 6), [N], 1).levels[0][1]
             for a in ("kappa_ass", "beta", "epsilon")}
        if v["kappa_ass"] == "yes":
            assert v["beta"] == "yes"
        if v["beta"] == "yes":
            assert v["epsilon"] == "yes"


def test_weight_preservation(tw, X, C1, C2):
    assert cobar_complex(tw["beta"], C1, 4).preserves_weight()
    assert cobar_complex(tw["beta"], C2, 4).preserves_weight()
    assert not cobar_complex(tw["kappa_ass"], C2, 4).preserves_weight()
    assert not cobar_complex(tw["beta"], X, 4).preserves_weight()


def test_epsilon_is_forgetful(tw, X, C1, C2):
    for Y in (X, C1, C2):
        c = cobar_complex(tw["epsilon"], Y, 8)
        u = Y.chain_complex()
        assert [(l, d) for l, d, _ in c.basis] == [(l, d) for l, d, _ in u.basis]
        assert c.differential.entries == u.differential.entries


def test_functoriality(tw, X, C2):
    k, b = tw["kappa_ass"], tw["beta"]
    f = preset_operad_map("abelianization", k.target, b.target)
    assert functoriality_check(k, f, X, 4) == []
    assert functoriality_check(k, f, C2, 4) == []


def test_cobar_map_is_chain_map(ex2):
    f = ex2.morphisms["C1->C2"]
    m = cobar_map(ex2.twisting["kappa_ass"], f, 4)
    for k in m.source.keys:
        (img,) = m.apply_key(k)
        assert m.target.model.label(img) == m.source.model.label(k)


def test_cooperad_mismatch(X):
    lie = preset_twisting("kappa_lie")
    with pytest.raises(AlgebraError, match="starts at"):
        cobar_complex(lie, X, 3)
