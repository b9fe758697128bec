import pytest

from cobarkit.coalg import (
    CoalgebraMorphism, CoalgebraPresentation, cocommutator, cofree_conilpotent,
    has_zero_decomposition, make_morphism, sub_coalgebra, validate_coalgebra,
)
from cobarkit.gradedlin import AlgebraError, GradedBasis
from cobarkit.sigmaop import linear_dual_cooperad, preset_operad
from cobarkit.workspace import ValidationFailure, load
from tests.oracles import cofree_ass_count, cofree_com_count


def cooperad(name, arity=5):
    return linear_dual_cooperad(preset_operad(name, arity))


GENS = [{"x": 2}, {"x": 1}, {"x": 1, "y": 2}, {"x": 1, "y": 4}]


@pytest.mark.parametrize("degs", GENS)
@pytest.mark.parametrize("W", [1, 2, 3, 4])
def test_cofree_counts(degs, W):
    G = GradedBasis.of([(g, d, 1) for g, d in degs.items()])
    A = cofree_conilpotent(cooperad("Ass", W), G, W)
    C = cofree_conilpotent(cooperad("Com", W), G, W)
    assert len(A.generators) == cofree_ass_count(len(degs), W)
    assert len(C.generators) == cofree_com_count(degs, W)


@pytest.mark.parametrize("name", ["Ass", "Com"])
def test_cofree_is_valid(name):
    G = GradedBasis.of([("x", 1, 1), ("y", 2, 1)])
    X = cofree_conilpotent(cooperad(name, 3), G, 3)
    assert validate_coalgebra(X).ok


def test_cofree_rejects_unbounded_generators():
    with pytest.raises(AlgebraError, match="boundedness"):
        cofree_conilpotent(cooperad("Ass", 3), GradedBasis.of([("x", 0, 1)]), 2)


def test_fixtures_validate(X, C1, C2):
    for Y in (X, C1, C2):
        assert validate_coalgebra(Y).ok
    assert [(l, d) for l, d, _ in X.generators] == [("x", 1), ("w", 2)]
    assert X.differential["w"] == {"x": 1}


def _ab(W=2):
    G = GradedBasis.of([("a", 1, 1), ("b", 2, 1)])
    return cofree_conilpotent(cooperad("Ass", W), G, W)


def test_leibniz_violation_is_reported():
    T = _ab()
    gens = GradedBasis.of([("a", 1, 1), ("b", 2, 1), ("v", 3, 2)])
    Y = CoalgebraPresentation(T.cooperad, gens, {"b": {"a": 1}, "v": {"b": 1}},
                              {"v": T.decomposition["a⊗b"]})
    assert any(m.startswith("Leibniz") for m in validate_coalgebra(Y).violations)


def test_coassociativity_perturbation_is_reported():
    T = cofree_conilpotent(cooperad("Ass", 3), GradedBasis.of([("x", 2, 1)]), 3)
    dec = {g: dict(t) for g, t in T.decomposition.items()}
    key = next(k for k in dec["x⊗x⊗x"] if len(k[1]) == 2)
    dec["x⊗x⊗x"][key] *= 2
    Y = CoalgebraPresentation(T.cooperad, T.generators, T.differential, dec)
    bad = validate_coalgebra(Y).violations
    assert bad and all("coassociativity" in m or "invariant" in m for m in bad)


def test_dd_violation():
    T = _ab()
    gens = GradedBasis.of([("a", 1, 1), ("b", 2, 1), ("c", 3, 1)])
    Y = CoalgebraPresentation(T.cooperad, gens, {"b": {"a": 1}, "c": {"b": 1}}, {})
    assert "d∘d != 0 on c" in validate_coalgebra(Y).violations


def test_bad_fixtures():
    with pytest.raises(ValidationFailure) as e:
        load(fixture="bad_degree")
    assert ("coalgebras.X", "degree: d(w) hits y of degree 4, expected 1") in e.value.violations
    with pytest.raises(ValidationFailure) as e:
        load(fixture="bad_span")
    assert any("escapes the span" in m and "y is not in the span" in m
               for _, m in e.value.violations)


def test_subcoalgebra_dependent_span():
    T = _ab()
    with pytest.raises(AlgebraError, match="dependent"):
        sub_coalgebra(T, [("p", {"a": 1}), ("q", {"a": 2})])


def test_morphisms(ex1, ex2, X, C1, C2):
    assert ex1.morphisms["X->0"].check() == []
    assert ex2.morphisms["C1->C2"].check() == []
    # X carries dw = x while the cofree ambient has d = 0
    assert "does not commute with d on w" in (
        CoalgebraMorphism(X, X.ambient, X.inclusion).check())
    f = CoalgebraMorphism(C1, C2, {"x": {"y": 1}})
    assert any(m.startswith("degree") for m in f.check())
    with pytest.raises(AlgebraError):
        make_morphism(C2, C2, {"z": {"z": 1}, "y": {"y": 1}})


def test_morphism_composition(ex2, C1, C2):
    f = ex2.morphisms["C1->C2"]
    ident = make_morphism(C2, C2, {g: {g: 1} for g in C2.labels})
    assert f.then(ident).images == f.images
    assert f.then(ident).check() == []


def test_cocommutators_vanish(X, C1, C2):
    for Y in (C1, C2):
        Z = cocommutator(Y)
        assert has_zero_decomposition(Z)
        assert Z.differential == Y.differential


def test_cocommutator_of_cofree_is_nonzero():
    G = GradedBasis.of([("a", 2, 1), ("b", 2, 1)])
    T = cofree_conilpotent(cooperad("Ass", 2), G, 2)
    Z = cocommutator(T)
    assert validate_coalgebra(Z).ok
    assert not has_zero_decomposition(Z)
    assert Z.chain_complex().basis == T.chain_complex().basis
