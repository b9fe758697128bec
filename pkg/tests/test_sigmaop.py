import math
from itertools import product

import pytest

from cobarkit.gradedlin import AlgebraError, Field, GradedBasis
from cobarkit.sigmaop import (
    AssOperad, Cooperad, LIE_MAX_ARITY, check_axioms, free_algebra_basis,
    linear_dual_cooperad, operadic_desuspension, preset_operad,
)
from tests.oracles import lie_dimension, lie_dimension_by_brackets


@pytest.mark.parametrize("name,dims", [
    ("Com", (1, 1, 1, 1, 1, 1)),
    ("Ass", tuple(math.factorial(n) for n in range(1, 7))),
    ("Lie", tuple(lie_dimension(n) for n in range(1, 7))),
])
def test_preset_dimensions(name, dims):
    assert preset_operad(name, 6).dims(6) == dims


def test_lie_matches_bracket_span():
    P = preset_operad("Lie", 5)
    assert P.dims(5) == tuple(lie_dimension_by_brackets(n) for n in range(1, 6))


def test_lie_cap():
    with pytest.raises(AlgebraError, match="capped"):
        preset_operad("Lie", LIE_MAX_ARITY + 1).basis(LIE_MAX_ARITY + 1)


@pytest.mark.parametrize("name", ["Com", "Ass", "Lie", "Unit"])
def test_presets_satisfy_axioms(name):
    P = preset_operad(name, 5)
    assert check_axioms(P) == []
    assert check_axioms(linear_dual_cooperad(P)) == []
    S = operadic_desuspension(P)
    assert check_axioms(S) == []


def test_sign_flip_in_ass_is_caught():
    class Broken(AssOperad):
        def compose(self, a, i, b):
            out = super().compose(a, i, b)
            if a == (0, 1) and i == 0 and b == (1, 0):
                return {k: -v for k, v in out.items()}
            return out

    bad = Broken(4)
    assert any("fails" in v for v in check_axioms(bad))


def test_weight_zero_operation_rejected():
    P = preset_operad("Ass", 3)
    C = Cooperad(P, weights={(1, 0): 0})
    assert any(v.startswith("connected weight") for v in check_axioms(C))


@pytest.mark.parametrize("name", ["Com", "Ass", "Lie"])
def test_desuspension_degree_law(name):
    S = operadic_desuspension(preset_operad(name, 5))
    for n in range(1, 6):
        for k in S.basis(n):
            assert S.degree(k) == -(n - 1)


def test_desuspended_com_three():
    S = operadic_desuspension(preset_operad("Com", 4))
    (k,) = S.basis(3)
    assert S.degree(k) == -2


def test_com_over_f5_not_split():
    P = preset_operad("Com", 4, Field(5))
    assert P.metadata["sigma_split"] is False
    assert preset_operad("Com", 4).metadata["sigma_split"] is True
    assert preset_operad("Ass", 4, Field(2)).metadata["sigma_split"] is True


def _brute_words(gens, W):
    return sum(1 for n in range(1, W + 1) for _ in product(gens, repeat=n))


def _brute_monomials(gens, W):
    # odd generators square to zero in the free graded commutative algebra
    seen = set()
    for n in range(1, W + 1):
        for w in product(gens, repeat=n):
            s = tuple(sorted(w))
            odd = [g for g in s if gens[g] % 2]
            if len(odd) != len(set(odd)):
                continue
            seen.add(s)
    return len(seen)


@pytest.mark.parametrize("gens", [{"a": 0}, {"a": 1}, {"a": 0, "b": 1}, {"a": 2, "b": 1, "c": 1}])
def test_free_algebra_counts(gens):
    G = GradedBasis.of([(g, d, 1) for g, d in gens.items()])
    for W in range(1, 5):
        ass = free_algebra_basis(preset_operad("Ass", W), G, W)
        com = free_algebra_basis(preset_operad("Com", W), G, W)
        assert len(ass.elements) == _brute_words(gens, W)
        assert len(com.elements) == _brute_monomials(gens, W)


def test_free_lie_on_two_letters():
    G = GradedBasis.of([("a", 0, 1), ("b", 0, 1)])
    B = free_algebra_basis(preset_operad("Lie", 4), G, 4)
    # necklace counts 2, 1, 2, 3
    assert len(B.elements) == 8


def test_unit_operad_has_only_generators():
    G = GradedBasis.of([("a", 0, 1), ("b", 3, 1)])
    B = free_algebra_basis(preset_operad("Unit", 3), G, 3)
    assert {e[0] for e in B.elements} == {"a", "b"}
