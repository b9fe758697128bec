"""Arity one: comodules over a dg coalgebra, modules over a polynomial algebra,
twisting cochains, and the one-sided bar and cobar constructions.

Signs: for a twisting cochain τ and the coproduct Δc = Σ c' ⊗ c'',

    bar    d(c ⊗ m)     = d_C c ⊗ m + Σ (-1)^{|c'|} c' ⊗ τ(c'')·m
    cobar  d(p ⊗ c ⊗ m) = p ⊗ d_B(c ⊗ m) + Σ p·τ(c') ⊗ c'' ⊗ m

Everything carries a total weight (monomial degree + coalgebra weight +
module weight) that both differentials preserve, so homology can be read
off exactly in every weight the truncation of the polynomial factor covers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .gradedlin import (QQ, AlgebraError, ChainComplexSlice, ChainMap, Field, GradedBasis,
                        LinearMap, homology, is_quasi_iso, vec_add)
from .cobar import STABILITY


# ---------------------------------------------------------------------------
# coalgebra, algebra, modules

@dataclass
class DgCoalgebra:
    """Counital conilpotent coalgebra; ``reduced`` holds Δ̄ as {c: {(a, b): coeff}}."""

    elements: list[tuple[str, int, int]]
    counit: str
    reduced: dict
    differential: dict = dc_field(default_factory=dict)
    name: str = "C"

    def __post_init__(self):
        self.deg = {l: d for l, d, _ in self.elements}
        self.wt = {l: w for l, _, w in self.elements}
        self.labels = [l for l, _, _ in self.elements]

    def coproduct(self, c) -> dict:
        """Full Δc as {(a, b): coeff}."""
        out = {(self.counit, c): 1}
        if c != self.counit:
            out[(c, self.counit)] = out.get((c, self.counit), 0) + 1
        for k, x in self.reduced.get(c, {}).items():
            out[k] = out.get(k, 0) + x
        return out

    def check(self) -> list[str]:
        bad = []
        for c, terms in self.reduced.items():
            for (a, b) in terms:
                if self.deg[a] + self.deg[b] != self.deg[c]:
                    bad.append(f"coproduct of {c} is not homogeneous")
                if self.wt[a] + self.wt[b] != self.wt[c]:
                    bad.append(f"coproduct of {c} does not preserve weight")
        # coassociativity of the reduced coproduct
        for c in self.labels:
            lhs: dict = {}
            rhs: dict = {}
            for (a, b), x in self.reduced.get(c, {}).items():
                for (a1, a2), y in self.reduced.get(a, {}).items():
                    lhs[(a1, a2, b)] = lhs.get((a1, a2, b), 0) + x * y
                for (b1, b2), y in self.reduced.get(b, {}).items():
                    rhs[(a, b1, b2)] = rhs.get((a, b1, b2), 0) + x * y
            vec_add(lhs, rhs, -1)
            if {k: v for k, v in lhs.items() if v}:
                bad.append(f"coproduct is not coassociative on {c}")
        return bad


def exterior_coalgebra() -> DgCoalgebra:
    """Span of 1, μ, ν, η = μ⊗ν − ν⊗μ inside the cofree counital coalgebra."""
    return DgCoalgebra(
        [("1", 0, 0), ("mu", 1, 1), ("nu", 1, 1), ("eta", 2, 2)], "1",
        {"eta": {("mu", "nu"): 1, ("nu", "mu"): -1}}, name="C")


@dataclass
class PolyAlgebra:
    """k[variables] with all variables in degree 0 and weight 1."""

    variables: tuple[str, ...]
    field: Field = QQ

    def monomials(self, max_weight: int):
        n = len(self.variables)
        out = []
        for total in range(max_weight + 1):
            for e in product(range(total + 1), repeat=n):
                if sum(e) == total:
                    out.append(e)
        return out

    def var(self, name: str) -> tuple:
        if name not in self.variables:
            raise AlgebraError(f"{name!r} is not a variable of k[{','.join(self.variables)}]")
        return tuple(1 if v == name else 0 for v in self.variables)

    def mul(self, p: tuple, q: tuple) -> tuple:
        return tuple(a + b for a, b in zip(p, q))

    def label(self, p: tuple) -> str:
        parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, p) if e]
        return "".join(parts) or "1"

    def __str__(self):
        return f"k[{','.join(self.variables)}]" if self.variables else "k"


@dataclass
class AlgebraModule:
    """Module over a polynomial algebra via commuting action matrices.

    ``action[v][m]`` is the vector v·m as {label: coeff}.
    """

    algebra: PolyAlgebra
    basis: GradedBasis
    action: dict
    name: str = "M"

    def act(self, p: tuple, m: str) -> dict:
        v = {m: 1}
        for var, e in zip(self.algebra.variables, p):
            for _ in range(e):
                nxt: dict = {}
                for k, x in v.items():
                    vec_add(nxt, self.action.get(var, {}).get(k, {}), x)
                v = nxt
        return v

    def act_vec(self, p: tuple, v: dict) -> dict:
        out: dict = {}
        for m, x in v.items():
            vec_add(out, self.act(p, m), x)
        return out

    def check(self) -> list[str]:
        bad = []
        b = self.basis
        for var, mat in self.action.items():
            for m, img in mat.items():
                for k in img:
                    if b.degree(b.index(k)) != b.degree(b.index(m)):
                        bad.append(f"{var} does not preserve degree on {m}")
        vs = list(self.action)
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                for m in b.labels:
                    uv: dict = {}
                    for k, x in self.action[v].get(m, {}).items():
                        vec_add(uv, self.action[u].get(k, {}), x)
                    vu: dict = {}
                    for k, x in self.action[u].get(m, {}).items():
                        vec_add(vu, self.action[v].get(k, {}), x)
                    vec_add(uv, vu, -1)
                    if uv:
                        bad.append(f"actions of {u} and {v} do not commute on {m}")
        return bad

    def weight(self, m: str) -> int:
        return self.basis.weight(self.basis.index(m))

    def degree(self, m: str) -> int:
        return self.basis.degree(self.basis.index(m))


def trivial_module(algebra: PolyAlgebra) -> AlgebraModule:
    return AlgebraModule(algebra, GradedBasis.of([("1", 0, 0)]), {v: {} for v in algebra.variables}, "k")


def truncated_y_module(N: int, algebra: PolyAlgebra | None = None) -> AlgebraModule:
    """y·k[y]/(y^{N+1}) with x acting as 0; y^i has weight i."""
    A = algebra or PolyAlgebra(("x", "y"))
    labels = [f"y^{i}" if i > 1 else "y" for i in range(1, N + 1)]
    basis = GradedBasis.of((lab, 0, i + 1) for i, lab in enumerate(labels))
    act = {"y": {labels[i]: {labels[i + 1]: 1} for i in range(N - 1)}}
    for v in A.variables:
        act.setdefault(v, {})
    return AlgebraModule(A, basis, act, f"M_{N}")


@dataclass
class ModuleMap:
    source: AlgebraModule
    target: AlgebraModule
    images: dict
    name: str = "phi"

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for m, x in v.items():
            vec_add(out, self.images.get(m, {}), x)
        return out

    def check(self) -> list[str]:
        bad = []
        for var in self.source.algebra.variables:
            for m in self.source.basis.labels:
                lhs = self.apply(self.source.act(self.source.algebra.var(var), m))
                rhs = self.target.act_vec(self.target.algebra.var(var), self.images.get(m, {}))
                vec_add(lhs, rhs, -1)
                if lhs:
                    bad.append(f"{self.name} does not commute with {var} on {m}")
        return bad


def projection(source: AlgebraModule, target: AlgebraModule) -> ModuleMap:
    """Identity on shared labels, zero elsewhere (e.g. M_8 → M_4)."""
    f = ModuleMap(source, target, {m: {m: 1} for m in source.basis.labels if m in target.basis},
                  f"{source.name}→{target.name}")
    bad = f.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    return f


# ---------------------------------------------------------------------------
# twisting cochains

@dataclass
class TwistingCochain:
    source: DgCoalgebra
    target: PolyAlgebra
    images: dict
    name: str = "tau"
    koszul_flag: bool = False

    def image(self, c) -> dict:
        return self.images.get(c, {})

    def check(self) -> list[str]:
        bad = []
        C = self.source
        if self.image(C.counit):
            bad.append("a twisting cochain vanishes on the counit")
        for c, v in self.images.items():
            if v and C.deg[c] - 1 != 0:
                bad.append(f"degree: {c} has degree {C.deg[c]} but the algebra lives in degree 0")
        for c in C.labels:
            r: dict = {}
            for (a, b), x in C.reduced.get(c, {}).items():
                s = -1 if C.deg[a] % 2 else 1
                for p, y in self.image(a).items():
                    for q, z in self.image(b).items():
                        k = self.target.mul(p, q)
                        r[k] = r.get(k, 0) + s * x * y * z
            if {k: v for k, v in r.items() if v}:
                bad.append(f"Maurer–Cartan residual nonzero on {c}")
        return bad

    def __repr__(self):
        return f"<TwistingCochain {self.name}: {self.source.name} → {self.target}>"


def preset_cochain(name: str, field: Field = QQ) -> TwistingCochain:
    C = exterior_coalgebra()
    if name == "kappa_cochain":
        A = PolyAlgebra(("x", "y"), field)
        t = TwistingCochain(C, A, {"mu": {A.var("x"): 1}, "nu": {A.var("y"): 1}}, name, True)
    elif name == "alpha_cochain":
        A = PolyAlgebra(("x",), field)
        t = TwistingCochain(C, A, {"mu": {A.var("x"): 1}}, name, False)
    elif name == "epsilon_cochain":
        t = TwistingCochain(C, PolyAlgebra((), field), {}, name, False)
    else:
        raise AlgebraError(f"unknown twisting cochain {name!r}")
    bad = t.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    return t


def _restricted_act(M: AlgebraModule, A: PolyAlgebra, p: tuple, m: str) -> dict:
    """Action of a monomial of A on M, matching variables by name."""
    for v in A.variables:
        if v not in M.algebra.variables:
            raise AlgebraError(f"{M.name} is not a module over {A}")
    q = tuple(p[A.variables.index(v)] if v in A.variables else 0 for v in M.algebra.variables)
    return M.act(q, m)


# ---------------------------------------------------------------------------
# bar and cobar

class BarComodule:
    """B_τ M = C ⊗ M with the twisted differential; a C-comodule via Δ on C."""

    def __init__(self, tau: TwistingCochain, M: AlgebraModule):
        if not isinstance(tau, TwistingCochain):
            raise AlgebraError("the bar construction is implemented in arity one only")
        self.tau, self.M, self.C = tau, M, tau.source
        self.keys = [(c, m) for c in self.C.labels for m in M.basis.labels]

    def degree(self, k) -> int:
        return self.C.deg[k[0]] + self.M.degree(k[1])

    def weight(self, k) -> int:
        return self.C.wt[k[0]] + self.M.weight(k[1])

    def label(self, k) -> str:
        return f"{k[0]}|{k[1]}"

    def image(self, k) -> dict:
        c, m = k
        C, tau = self.C, self.tau
        out: dict = {}
        for c2, x in C.differential.get(c, {}).items():
            out[(c2, m)] = out.get((c2, m), 0) + x
        for (a, b), x in C.coproduct(c).items():
            s = -1 if C.deg[a] % 2 else 1
            for p, y in tau.image(b).items():
                for m2, z in _restricted_act(self.M, tau.target, p, m).items():
                    out[(a, m2)] = out.get((a, m2), 0) + s * x * y * z
        return {q: v for q, v in out.items() if v}

    def coaction(self, k) -> dict:
        c, m = k
        return {(a, (b, m)): x for (a, b), x in self.C.coproduct(c).items()}

    def basis(self) -> GradedBasis:
        return GradedBasis.of((self.label(k), self.degree(k), self.weight(k)) for k in self.keys)

    def slice(self) -> ChainComplexSlice:
        idx = {k: i for i, k in enumerate(self.keys)}
        ent = {(idx[k2], idx[k]): x for k in self.keys for k2, x in self.image(k).items()}
        return ChainComplexSlice.from_basis(self.basis(), ent)


def bar_comodule(tau: TwistingCochain, M: AlgebraModule) -> BarComodule:
    return BarComodule(tau, M)


class CobarModule:
    """Ω_σ N = A ⊗ N for a bar comodule N, polynomial factor of weight ≤ T.

    ``weight_cap`` lowers the certified weight further.  For M_N it is the
    way to read off the free module y·k[y]: both complexes coincide in total
    weight ≤ N.
    """

    def __init__(self, sigma: TwistingCochain, N: BarComodule, max_monomial_weight: int,
                 weight_cap: int | None = None):
        if not isinstance(sigma, TwistingCochain):
            raise AlgebraError("the cobar construction on comodules is implemented in arity one only")
        if sigma.source is not N.C and sigma.source.labels != N.C.labels:
            raise AlgebraError("twisting cochain and comodule use different coalgebras")
        self.sigma, self.N, self.T = sigma, N, max_monomial_weight
        self.A = sigma.target
        self.keys = [(p,) + k for p in self.A.monomials(self.T) for k in N.keys]
        self.index = {k: i for i, k in enumerate(self.keys)}
        mins = [N.M.weight(m) for m in N.M.basis.labels]
        self.certified_weight = self.T + (min(mins) if mins else 0)
        if weight_cap is not None:
            self.certified_weight = min(self.certified_weight, weight_cap)

    def degree(self, k) -> int:
        return self.N.degree(k[1:])

    def weight(self, k) -> int:
        return sum(k[0]) + self.N.weight(k[1:])

    def label(self, k) -> str:
        return f"{self.A.label(k[0])}|{k[1]}|{k[2]}"

    def image(self, k) -> dict:
        p, c, m = k
        out: dict = {}
        for (c2, m2), x in self.N.image((c, m)).items():
            out[(p, c2, m2)] = out.get((p, c2, m2), 0) + x
        for (a, b), x in self.N.C.coproduct(c).items():
            for q, y in self.sigma.image(a).items():
                key = (self.A.mul(p, q), b, m)
                out[key] = out.get(key, 0) + x * y
        return {q: v for q, v in out.items() if v}

    def certified_keys(self) -> list:
        return [k for k in self.keys if self.weight(k) <= self.certified_weight]

    def slice(self, certified_only: bool = True) -> ChainComplexSlice:
        keys = self.certified_keys() if certified_only else self.keys
        idx = {k: i for i, k in enumerate(keys)}
        basis = GradedBasis.of((self.label(k), self.degree(k), self.weight(k)) for k in keys)
        ent = {}
        for k in keys:
            for k2, x in self.image(k).items():
                r = idx.get(k2)
                if r is None:
                    if certified_only and self.weight(k2) <= self.certified_weight:
                        raise AlgebraError(f"certified part not closed at {self.label(k2)}")
                    continue
                ent[(r, idx[k])] = x
        degs = basis.degrees() or [0]
        return ChainComplexSlice(basis, LinearMap(basis, basis, -1, ent),
                                 (min(min(degs), 0) - 1, max(max(degs), 0) + 1))

    def dsquared_violations(self) -> list[str]:
        bad = []
        for k in self.keys:
            dd: dict = {}
            for k2, x in self.image(k).items():
                vec_add(dd, self.image(k2), x)
            if dd:
                bad.append(f"d∘d != 0 on {self.label(k)}")
        return bad


def cobar_comodule(sigma: TwistingCochain, N: BarComodule, max_monomial_weight: int,
                   weight_cap: int | None = None) -> CobarModule:
    return CobarModule(sigma, N, max_monomial_weight, weight_cap)


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class ComoduleVerdict:
    levels: list[tuple[int, str]]
    stability: int = STABILITY
    details: dict = dc_field(default_factory=dict)

    @property
    def stable(self) -> bool:
        tail = [v for _, v in self.levels[-self.stability:]]
        return len(tail) >= self.stability and len(set(tail)) == 1

    @property
    def summary(self) -> str:
        return f"stable-{self.levels[-1][1]}" if self.stable else "unstable"


def _module_slice(M: AlgebraModule, max_weight: int) -> tuple[list, ChainComplexSlice]:
    labs = [m for m in M.basis.labels if M.weight(m) <= max_weight]
    basis = GradedBasis.of((m, M.degree(m), M.weight(m)) for m in labs)
    return labs, ChainComplexSlice(basis, LinearMap(basis, basis, -1, {}), (-1, 1))


def counit_map(W: CobarModule) -> tuple[ChainMap, tuple[int, int]]:
    """p ⊗ 1 ⊗ m ↦ (-1)^{weight p} p·m on the certified part of Ω_τ B_τ M.

    Both twist terms enter with a plus sign (bar up to the Koszul sign of
    c'), so the counit has to absorb the automorphism v ↦ -v of the
    polynomial algebra to commute with d.
    """
    N = W.N
    M, C = N.M, N.C
    keys = W.certified_keys()
    src = W.slice()
    labs, tgt = _module_slice(M, W.certified_weight)
    # widen windows to a common range
    lo = min(src.window[0], tgt.window[0])
    hi = max(src.window[1], tgt.window[1])
    src = ChainComplexSlice(src.basis, src.differential, (lo, hi))
    tgt = ChainComplexSlice(tgt.basis, tgt.differential, (lo, hi))
    ent = {}
    for j, (p, c, m) in enumerate(keys):
        if c != C.counit:
            continue
        s = -1 if sum(p) % 2 else 1
        for m2, x in _restricted_act(M, W.A, p, m).items():
            if m2 in tgt.basis:
                ent[(tgt.basis.index(m2), j)] = s * x
    f = ChainMap(src, tgt, LinearMap(src.basis, tgt.basis, 0, ent))
    return f, (lo + 1, hi - 1)


def counit_check(tau: TwistingCochain, M: AlgebraModule, schedule,
                 stability: int = STABILITY, weight_cap: int | None = None) -> ComoduleVerdict:
    """Is Ω_τ B_τ M → M a quasi-isomorphism?  Exact in the certified weights."""
    levels = []
    details = {}
    for T in schedule:
        W = cobar_comodule(tau, bar_comodule(tau, M), T, weight_cap)
        f, win = counit_map(W)
        levels.append((T, is_quasi_iso(f, win)))
        details[T] = {"certified_weight": W.certified_weight,
                      "betti": homology(f.source, win).betti}
    return ComoduleVerdict(levels, stability, details)


def induced_cobar_map(sigma: TwistingCochain, tau: TwistingCochain, phi: ModuleMap, T: int,
                      weight_cap: int | None = None):
    """Ω_σ B_τ(φ) on the weights certified on both sides."""
    S = cobar_comodule(sigma, bar_comodule(tau, phi.source), T, weight_cap)
    R = cobar_comodule(sigma, bar_comodule(tau, phi.target), T, weight_cap)
    cw = min(S.certified_weight, R.certified_weight)
    sk = [k for k in S.keys if S.weight(k) <= cw]
    rk = [k for k in R.keys if R.weight(k) <= cw]

    def sub(W, keys):
        idx = {k: i for i, k in enumerate(keys)}
        basis = GradedBasis.of((W.label(k), W.degree(k), W.weight(k)) for k in keys)
        ent = {}
        for k in keys:
            for k2, x in W.image(k).items():
                if k2 in idx:
                    ent[(idx[k2], idx[k])] = x
        return idx, basis, ent

    si, sb, se = sub(S, sk)
    ri, rb, re_ = sub(R, rk)
    degs = sb.degrees() + rb.degrees() + [0]
    win = (min(degs) - 1, max(degs) + 1)
    src = ChainComplexSlice(sb, LinearMap(sb, sb, -1, se), win)
    tgt = ChainComplexSlice(rb, LinearMap(rb, rb, -1, re_), win)
    ent = {}
    for (p, c, m), j in si.items():
        for m2, x in phi.images.get(m, {}).items():
            r = ri.get((p, c, m2))
            if r is not None:
                ent[(r, j)] = x
    return ChainMap(src, tgt, LinearMap(sb, rb, 0, ent)), (win[0] + 1, win[1] - 1)


def comodule_weq(sigma: TwistingCochain, tau: TwistingCochain, phi: ModuleMap, schedule,
                 stability: int = STABILITY, weight_cap: int | None = None) -> ComoduleVerdict:
    """Is B_τ(φ) a σ-weak equivalence, i.e. Ω_σ B_τ(φ) a quasi-isomorphism?"""
    bad = phi.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    levels = []
    details = {}
    for T in schedule:
        f, win = induced_cobar_map(sigma, tau, phi, T, weight_cap)
        levels.append((T, is_quasi_iso(f, win)))
        details[T] = {"source_betti": homology(f.source, win).betti,
                      "target_betti": homology(f.target, win).betti}
    return ComoduleVerdict(levels, stability, details)


def cobar_homology(sigma: TwistingCochain, tau: TwistingCochain, M: AlgebraModule, T: int,
                   weight_cap: int | None = None) -> dict:
    """Betti numbers of Ω_σ B_τ M in its certified weights."""
    W = cobar_comodule(sigma, bar_comodule(tau, M), T, weight_cap)
    s = W.slice()
    return {d: b for d, b in homology(s).betti.items() if s.window[0] < d < s.window[1]}
