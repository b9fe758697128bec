"""Twisting morphisms C → P, stored by their values on the coideal C̄.

The Maurer–Cartan residual of α is ∂α + α⋆α with

    (α⋆α)(c) = Σ coeff · (α(a) ∘_i α(b))·σ

summed over the infinitesimal decomposition terms (a, i, b, σ, coeff) of c.
Internal differentials of the presets vanish, so ∂α = 0 throughout.
"""

from __future__ import annotations

from . import perms
from .gradedlin import QQ, AlgebraError, Field, vec_add
from .sigmaop import (Cooperad, CooperadMap, Operad, OperadMap, linear_dual_cooperad,
                      operadic_desuspension, preset_operad)


def _same(x, y) -> bool:
    return x is y or (x.name == y.name and type(x) is type(y))


class TwistingMorphism:
    def __init__(self, source: Cooperad, target: Operad, images: dict, name: str = "alpha",
                 koszul_flag: bool = False):
        self.source, self.target, self.name = source, target, name
        self.koszul_flag = koszul_flag
        self.images = {c: {k: x for k, x in v.items() if x} for c, v in images.items()}
        self.images = {c: v for c, v in self.images.items() if v}

    @property
    def max_arity(self) -> int:
        return min(self.source.max_arity, self.target.max_arity)

    def image(self, c) -> dict:
        return self.images.get(c, {})

    def image_vec(self, v: dict) -> dict:
        out: dict = {}
        for c, x in v.items():
            vec_add(out, self.image(c), x)
        return out

    def star(self, c) -> dict:
        """(α⋆α)(c)."""
        C, P = self.source, self.target
        out: dict = {}
        for a, i, b, sh, coef in C.infinitesimal(c):
            fa, fb = self.image(a), self.image(b)
            if not fa or not fb:
                continue
            sg = -1 if C.degree(a) % 2 else 1
            vec_add(out, P.act_vec(P.compose_vec(fa, i, fb), sh), sg * coef)
        return out

    def mc_residual(self, upto: int | None = None) -> list[tuple]:
        """Nonzero (c, (α⋆α)(c)) pairs through arity ``upto``."""
        N = upto or self.max_arity
        bad = []
        for n in range(3, N + 1):
            for c in self.source.coideal(n):
                r = self.star(c)
                if r:
                    bad.append((c, r))
        return bad

    def check(self, upto: int | None = None) -> list[str]:
        C, P = self.source, self.target
        N = upto or self.max_arity
        bad = []
        for c, v in self.images.items():
            if c == C.coaugmentation:
                bad.append(f"{C.label(c)} is the counit; twisting morphisms vanish there")
            for p in v:
                if P.arity(p) != C.arity(c):
                    bad.append(f"arity: {C.label(c)} ↦ {P.label(p)}")
                elif P.degree(p) != C.degree(c) - 1:
                    bad.append(f"degree: {C.label(c)} ↦ {P.label(p)} has degree {P.degree(p)},"
                               f" expected {C.degree(c) - 1}")
        if bad:
            return bad
        for n in range(2, N + 1):
            for c in C.coideal(n):
                for j in range(n - 1):
                    s = perms.adjacent(n, j)
                    lhs = self.image_vec(C.act(c, s))
                    rhs = P.act_vec(self.image(c), s)
                    vec_add(lhs, rhs, -1)
                    if lhs:
                        bad.append(f"equivariance fails on {C.label(c)} for the swap {j + 1}↔{j + 2}")
        if bad:
            return bad
        for c, r in self.mc_residual(N):
            bad.append(f"Maurer–Cartan residual nonzero on {C.label(c)}: {P.vec_label(r)}")
        return bad

    def __repr__(self):
        return f"<Twisting {self.name}: {self.source.name} → {self.target.name}>"


def make_twisting(C: Cooperad, P: Operad, images: dict, name: str = "alpha",
                  koszul_flag: bool = False) -> TwistingMorphism:
    a = TwistingMorphism(C, P, images, name, koszul_flag)
    bad = a.check()
    if bad:
        raise AlgebraError(f"{name} is not a twisting morphism: " + "; ".join(bad))
    return a


ARITY_ONE = ("kappa_cochain", "alpha_cochain", "epsilon_cochain")
PRESETS = ("kappa_ass", "beta", "epsilon", "kappa_lie") + ARITY_ONE


def _sign_images(C: Cooperad, value):
    return {c: {value(c): perms.sign(c)} for c in C.coideal(2)}


def preset_twisting(name: str, max_arity: int = 5, field: Field = QQ):
    """Named twisting morphisms; the ``*_cochain`` ones live in arity one."""
    if name in ARITY_ONE:
        from .comodule import preset_cochain
        return preset_cochain(name, field)
    if name not in PRESETS:
        raise AlgebraError(f"unknown twisting morphism {name!r}; choose from {', '.join(PRESETS)}")
    ass_c = linear_dual_cooperad(preset_operad("Ass", max_arity, field))
    if name == "kappa_ass":
        P = operadic_desuspension(preset_operad("Ass", max_arity, field))
        return make_twisting(ass_c, P, _sign_images(ass_c, lambda c: c), name, True)
    if name == "beta":
        P = operadic_desuspension(preset_operad("Com", max_arity, field))
        return make_twisting(ass_c, P, _sign_images(ass_c, lambda c: 2), name, False)
    if name == "epsilon":
        return make_twisting(ass_c, preset_operad("Unit", max_arity, field), {}, name, False)
    lie = preset_operad("Lie", min(max_arity, 6), field)
    lie_c = linear_dual_cooperad(lie)
    P = operadic_desuspension(preset_operad("Com", lie.max_arity, field))
    return make_twisting(lie_c, P, {c: {2: 1} for c in lie_c.coideal(2)}, name, True)


def compose_with_operad_map(alpha: TwistingMorphism, f: OperadMap) -> TwistingMorphism:
    if not _same(f.source, alpha.target):
        raise AlgebraError(f"operad map starts at {f.source.name}, not at {alpha.target.name}")
    images = {c: f.image_vec(v) for c, v in alpha.images.items()}
    return make_twisting(alpha.source, f.target, images, f"{f.name}∘{alpha.name}",
                         alpha.koszul_flag and f.name == "id")


def precompose_with_cooperad_map(f: CooperadMap, alpha: TwistingMorphism) -> TwistingMorphism:
    if not _same(f.target, alpha.source):
        raise AlgebraError(f"cooperad map ends at {f.target.name}, not at {alpha.source.name}")
    images = {}
    for n in range(2, min(f.source.max_arity, alpha.max_arity) + 1):
        for c in f.source.coideal(n):
            v: dict = {}
            for c2, x in f.image(c).items():
                vec_add(v, alpha.image(c2), x)
            if v:
                images[c] = v
    return make_twisting(f.source, alpha.target, images, f"{alpha.name}∘{f.name}",
                         alpha.koszul_flag and f.name == "id")


def same_images(a: TwistingMorphism, b: TwistingMorphism) -> bool:
    """Equal values on every coideal basis element (compared by labels)."""
    if a.source.max_arity != b.source.max_arity:
        return False
    for n in range(2, a.source.max_arity + 1):
        for c in a.source.coideal(n):
            va = {a.target.label(k): x for k, x in a.image(c).items()}
            vb = {b.target.label(k): x for k, x in b.image(c).items()}
            if va != vb:
                return False
    return True
