import pytest

from cobarkit import perms
from cobarkit.comodule import TwistingCochain, preset_cochain
from cobarkit.gradedlin import AlgebraError, Field
from cobarkit.sigmaop import (identity_cooperad_map, linear_dual_cooperad, operadic_desuspension,
                              preset_operad, preset_operad_map)
from cobarkit.twisting import (
    ARITY_ONE, TwistingMorphism, compose_with_operad_map, make_twisting,
    precompose_with_cooperad_map, preset_twisting, same_images,
)


@pytest.mark.parametrize("name", ["kappa_ass", "beta", "epsilon", "kappa_lie"])
@pytest.mark.parametrize("field", [Field(0), Field(3)])
def test_presets_are_twisting(name, field):
    a = preset_twisting(name, 5, field)
    assert a.check() == []
    assert a.mc_residual() == []


@pytest.mark.parametrize("name", ARITY_ONE)
def test_cochain_presets(name):
    t = preset_twisting(name)
    assert isinstance(t, TwistingCochain)
    assert t.check() == []


def test_koszul_flags():
    assert preset_twisting("kappa_ass").koszul_flag
    assert preset_twisting("kappa_lie").koszul_flag
    assert not preset_twisting("beta").koszul_flag
    assert not preset_twisting("epsilon").koszul_flag


def _kappa_parts(n=4):
    C = linear_dual_cooperad(preset_operad("Ass", n))
    P = operadic_desuspension(preset_operad("Ass", n))
    return C, P


def test_unsigned_kappa_is_rejected():
    C, P = _kappa_parts()
    wrong = TwistingMorphism(C, P, {c: {c: 1} for c in C.coideal(2)})
    assert wrong.check()
    with pytest.raises(AlgebraError, match="not a twisting morphism"):
        make_twisting(C, P, {c: {c: 1} for c in C.coideal(2)})


def test_sign_on_one_operation_only():
    C, P = _kappa_parts()
    imgs = {c: {c: perms.sign(c)} for c in C.coideal(2)}
    first = C.coideal(2)[0]
    imgs[first] = {first: -imgs[first][first]}
    assert TwistingMorphism(C, P, imgs).check()


def test_degree_and_counit_rejected():
    C, P = _kappa_parts()
    (two,) = [c for c in C.coideal(2)][:1]
    three = C.coideal(3)[0]
    bad = TwistingMorphism(C, P, {two: {three: 1}}).check()
    assert bad and bad[0].startswith("arity")
    bad = TwistingMorphism(C, P, {C.coaugmentation: {P.unit: 1}}).check()
    assert any("counit" in m for m in bad)


def test_abelianization_carries_kappa_to_beta():
    k, b = preset_twisting("kappa_ass"), preset_twisting("beta")
    f = preset_operad_map("abelianization", k.target, b.target)
    assert same_images(compose_with_operad_map(k, f), b)
    assert not same_images(k, preset_twisting("epsilon"))


def test_identity_precomposition():
    k = preset_twisting("kappa_ass")
    k2 = precompose_with_cooperad_map(identity_cooperad_map(k.source), k)
    assert same_images(k, k2)
    assert k2.koszul_flag


def test_composition_type_errors():
    k, b = preset_twisting("kappa_ass"), preset_twisting("beta")
    f = preset_operad_map("abelianization", k.target, b.target)
    with pytest.raises(AlgebraError):
        compose_with_operad_map(b, f)


def test_unknown_preset():
    with pytest.raises(AlgebraError, match="unknown twisting"):
        preset_twisting("gamma")


def test_cochain_checks():
    t = preset_cochain("kappa_cochain")
    A = t.target
    assert TwistingCochain(t.source, A, {"1": {A.var("x"): 1}}).check()
    bad = TwistingCochain(t.source, A, {"eta": {A.var("x"): 1}}).check()
    assert bad and bad[0].startswith("degree")
