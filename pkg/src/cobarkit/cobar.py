"""The cobar construction Ω_α X as a weight-truncated chain complex.

The underlying space is the free P-algebra on the generators of X with
word length as weight.  On a class e ⊗ (a_1,...,a_n) the differential is
the derivation extension of D(g) = d_X(g) + (α ⊗ id)Δ(g):

    d(e ⊗ a) = Σ_i ± NF(e ∘_i q, a_<i · h · a_>i)   for q ⊗ h ∈ D(a_i)

with the Koszul sign (-1)^{|e| + Σ_{j<i}|a_j| + |q|·Σ_{j<i}|a_j|}.
Images are computed untruncated; truncated complexes drop the part of
weight above the bound, which is a quotient complex since d never lowers
word length.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .coalg import CoalgebraMorphism, CoalgebraPresentation
from .freealg import FreeAlgebraModel, free_algebra_model
from .gradedlin import (AlgebraError, ChainComplexSlice, ChainMap, Echelon, GradedBasis,
                        LinearMap, homology, is_quasi_iso, vec_add)
from .sigmaop import OperadMap, _desusp_depth
from .twisting import TwistingMorphism, _same, compose_with_operad_map

STABILITY = 3


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


class CobarComplex:
    def __init__(self, twisting: TwistingMorphism, coalgebra: CoalgebraPresentation,
                 max_weight: int, degree_window: tuple[int, int] | None = None):
        if not _same(twisting.source, coalgebra.cooperad):
            raise AlgebraError(f"{twisting.name} starts at {twisting.source.name},"
                               f" but {coalgebra.name} is over {coalgebra.cooperad.name}")
        self.twisting = twisting
        self.input = coalgebra
        self.max_weight = max_weight
        self.P = twisting.target
        self.model: FreeAlgebraModel = free_algebra_model(
            self.P, coalgebra.generators, coalgebra.field.characteristic)
        self.keys = self.model.basis_keys(max_weight, degree_window)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.basis = GradedBasis.of((self.model.label(k), self.model.degree(k),
                                     self.model.weight(k)) for k in self.keys)
        self._D = {g: self._generator_terms(g) for g in coalgebra.labels}
        self._cache: dict = {}
        degs = self.basis.degrees()
        if degree_window is not None:
            self.window = tuple(degree_window)
        elif degs:
            self.window = (min(degs) - 1, max(degs) + 1)
        else:
            self.window = (-1, 1)
        self.d1, self.d2 = self._assemble()

    # ------------------------------------------------------------------
    def _generator_terms(self, g):
        """D(g) split as (d1 terms, d2 terms); each term (coeff, op, word)."""
        X, P, a = self.input, self.P, self.twisting
        d1 = [(x, P.unit, (h,)) for h, x in X.differential[g].items()]
        d2 = []
        for (c, word), x in X.decomposition[g].items():
            for p, y in a.image(c).items():
                d2.append((x * y, p, word))
        return d1, d2

    def _extend(self, key, part: int) -> dict:
        model, P, X = self.model, self.P, self.input
        e, word = model.canonical(key)
        out: dict = {}
        pre = 0
        for i, g in enumerate(word):
            for coef, q, h in self._D[g][part]:
                s = _sgn(P.degree(e) + pre + P.degree(q) * pre)
                for op, y in P.compose(e, i, q).items():
                    nf = model.normal_form(op, word[:i] + h + word[i + 1:])
                    vec_add(out, nf, s * coef * y)
            pre += X.degree(g)
        return out

    def image(self, key, part: int | None = None) -> dict:
        """Untruncated d (or its d1/d2 part) of a basis key, as {key: coeff}."""
        if part is None:
            out = dict(self.image(key, 0))
            vec_add(out, self.image(key, 1))
            return out
        ck = (key, part)
        if ck not in self._cache:
            self._cache[ck] = self._extend(key, part)
        return self._cache[ck]

    def image_vec(self, v: dict) -> dict:
        out: dict = {}
        for k, x in v.items():
            vec_add(out, self.image(k), x)
        return out

    def _assemble(self):
        mats = []
        for part in (0, 1):
            ent = {}
            for c, k in enumerate(self.keys):
                for k2, x in self.image(k, part).items():
                    r = self.index.get(k2)
                    if r is not None:
                        ent[(r, c)] = x
            mats.append(LinearMap(self.basis, self.basis, -1, ent))
        return mats

    @property
    def differential(self) -> LinearMap:
        ent = dict(self.d1.entries)
        for k, x in self.d2.entries.items():
            s = ent.get(k, 0) + x
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return LinearMap(self.basis, self.basis, -1, ent)

    def slice(self) -> ChainComplexSlice:
        """The truncated (quotient) complex; raises if d∘d fails on the window."""
        return ChainComplexSlice(self.basis, self.differential, self.window)

    def dsquared_violations(self) -> list[str]:
        bad = []
        for k in self.keys:
            dd = self.image_vec(self.image(k))
            if dd:
                bad.append(f"d∘d != 0 on {self.model.label(k)}")
        return bad

    def preserves_weight(self) -> bool:
        """True iff d maps each word length to itself (checked on untruncated images)."""
        m = self.model
        for k in self.keys:
            w = m.weight(k)
            if any(m.weight(k2) != w for k2 in self.image(k)):
                return False
        return True

    def weight_violations(self) -> list[str]:
        """d1 keeps word length; d2 raises it by arity - 1 of the term used."""
        m = self.model
        bad = []
        for k in self.keys:
            w = m.weight(k)
            for k2 in self.image(k, 0):
                if m.weight(k2) != w:
                    bad.append(f"d1 changes word length on {m.label(k)}")
            allowed = {w + len(h) - 1 for g in m.word_of(k) for _, _, h in self._D[g][1]}
            for k2 in self.image(k, 1):
                if m.weight(k2) not in allowed:
                    bad.append(f"d2 hits an unexpected word length on {m.label(k)}")
        return bad

    def key_of(self, label: str):
        for k in self.keys:
            if self.model.label(k) == label:
                return k
        raise AlgebraError(f"{label!r} is not a basis element of the cobar complex")

    def dims(self) -> dict[tuple[int, int], int]:
        out: dict = {}
        for _, d, w in self.basis:
            out[(d, w)] = out.get((d, w), 0) + 1
        return out

    def __repr__(self):
        return (f"<Ω_{self.twisting.name} {self.input.name}: {len(self.keys)} basis elements,"
                f" weight ≤ {self.max_weight}>")


def cobar_complex(alpha: TwistingMorphism, X: CoalgebraPresentation, max_weight: int,
                  degree_window: tuple[int, int] | None = None, check: bool = True) -> CobarComplex:
    c = CobarComplex(alpha, X, max_weight, degree_window)
    if check:
        bad = c.dsquared_violations()
        if bad:
            raise AlgebraError(f"cobar differential does not square to zero: {bad[0]}")
    return c


# ---------------------------------------------------------------------------
# maps

def _map_key(f: CoalgebraMorphism, model: FreeAlgebraModel, target_model: FreeAlgebraModel, key):
    op, word = model.canonical(key)
    out: dict = {}
    for combo in product(*[f.images[g].items() for g in word]):
        coef = 1
        for _, z in combo:
            coef = coef * z
        vec_add(out, target_model.normal_form(op, tuple(h for h, _ in combo)), coef)
    return out


@dataclass
class CobarMap:
    source: CobarComplex
    target: CobarComplex
    morphism: CoalgebraMorphism
    chain_map: ChainMap = dc_field(repr=False)

    def apply_key(self, key) -> dict:
        return _map_key(self.morphism, self.source.model, self.target.model, key)


def cobar_map(alpha: TwistingMorphism, f: CoalgebraMorphism, max_weight: int,
              degree_window=None) -> CobarMap:
    bad = f.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    S = cobar_complex(alpha, f.source, max_weight, degree_window)
    T = cobar_complex(alpha, f.target, max_weight, degree_window)
    ent = {}
    for c, k in enumerate(S.keys):
        for k2, x in _map_key(f, S.model, T.model, k).items():
            r = T.index.get(k2)
            if r is not None:
                ent[(r, c)] = x
    # commutation on untruncated images
    for k in S.keys:
        lhs = _map_vec(f, S.model, T.model, S.image(k))
        rhs = T.image_vec(_map_key(f, S.model, T.model, k))
        vec_add(lhs, rhs, -1)
        if lhs:
            raise AlgebraError(f"Ω({f.name}) does not commute with the differentials on {S.model.label(k)}")
    lin = LinearMap(S.basis, T.basis, 0, ent)
    return CobarMap(S, T, f, ChainMap(S.slice(), T.slice(), lin))


def _map_vec(f, sm, tm, v):
    out: dict = {}
    for k, x in v.items():
        vec_add(out, _map_key(f, sm, tm, k), x)
    return out


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class WeqReport:
    levels: list[tuple[int, str]]
    exact: bool
    window: tuple[int, int]
    stability: int = STABILITY
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def stable(self) -> bool:
        tail = [v for _, v in self.levels[-self.stability:]]
        if self.exact:
            return len(set(v for _, v in self.levels)) == 1
        return len(tail) >= self.stability and len(set(tail)) == 1

    @property
    def summary(self) -> str:
        if not self.stable:
            return "unstable"
        return f"stable-{self.levels[-1][1]}"

    @property
    def flag(self) -> str:
        return "EXACT" if self.exact else "PER-TRUNCATION"


def _span_acyclic(cone_keys, image, degree, order, window):
    """Every cycle among ``cone_keys`` in the window bounds within ``cone_keys``.

    Returns None or a witness cycle.
    """
    from .gradedlin import kernel_basis
    lo, hi = window
    for deg in range(lo, hi + 1):
        src = [k for k in cone_keys if degree(k) == deg]
        up = [k for k in cone_keys if degree(k) == deg + 1]
        cols = [image(k) for k in src]
        e = Echelon(order)
        for k in up:
            e.add(image(k))
        for z in kernel_basis(cols):
            v = {src[j]: x for j, x in z.items()}
            if not e.contains(v):
                return deg, v
    return None


def alpha_weq(alpha: TwistingMorphism, f: CoalgebraMorphism, window: tuple[int, int],
              schedule, stability: int = STABILITY) -> WeqReport:
    """Is Ω_α(f) a quasi-isomorphism on homology degrees ``window``?

    If both differentials preserve word length the truncated homology is
    exact per weight (EXACT).  Otherwise each level N asks whether every
    cycle of the mapping cone of weight ≤ N bounds a chain of weight ≤ N,
    with images kept untruncated.
    """
    a, b = window
    levels = []
    exact = None
    witnesses = {}
    for N in schedule:
        m = cobar_map(alpha, f, N)
        S, T = m.source, m.target
        if exact is None:
            exact = S.preserves_weight() and T.preserves_weight()
        if exact:
            lo = min(S.window[0], T.window[0], a - 1)
            hi = max(S.window[1], T.window[1], b + 1)
            src = ChainComplexSlice(S.basis, S.differential, (lo, hi))
            tgt = ChainComplexSlice(T.basis, T.differential, (lo, hi))
            cm = ChainMap(src, tgt, m.chain_map.map)
            levels.append((N, is_quasi_iso(cm, (a, b))))
            continue
        keys = [("s", k) for k in S.keys] + [("t", k) for k in T.keys]

        def degree(k, S=S, T=T):
            return S.model.degree(k[1]) + 1 if k[0] == "s" else T.model.degree(k[1])

        def image(k, S=S, T=T, m=m):
            if k[0] == "s":
                out = {("s", k2): -x for k2, x in S.image(k[1]).items()}
                for k2, x in m.apply_key(k[1]).items():
                    out[("t", k2)] = out.get(("t", k2), 0) + x
                return {q: x for q, x in out.items() if x}
            return {("t", k2): x for k2, x in T.image(k[1]).items()}

        def order(k, S=S, T=T):
            mod = S.model if k[0] == "s" else T.model
            return (mod.sort_key(k[1]), k[0])

        wit = _span_acyclic(keys, image, degree, order, (a, b))
        if wit:
            deg, v = wit
            witnesses[N] = (deg, {("s:" if k[0] == "s" else "") + (S if k[0] == "s" else T).model.label(k[1]): x
                                  for k, x in v.items()})
        levels.append((N, "no" if wit else "yes"))
    return WeqReport(levels, bool(exact), (a, b), stability, witnesses)


@dataclass
class MembershipCertificate:
    target: str
    levels: list[tuple[int, str]]
    stability: int = STABILITY

    @property
    def stabilized(self) -> bool:
        tail = [v for _, v in self.levels[-self.stability:]]
        return len(tail) >= self.stability and len(set(tail)) == 1

    @property
    def verdict(self) -> str:
        if not self.stabilized:
            return "unstable"
        return f"stable {self.levels[-1][1]} (semi-decided)"

    @property
    def survives(self) -> bool:
        return self.stabilized and self.levels[-1][1] == "not-in-span"


def class_survives(c: CobarComplex, cycle: dict, schedule, stability: int = STABILITY,
                   description: str | None = None) -> MembershipCertificate:
    """Membership of a cycle in d(weight ≤ N part) for each N of the schedule.

    ``cycle`` maps basis labels (or keys) of ``c`` to coefficients.
    """
    F = c.input.field
    vec = {}
    for k, x in cycle.items():
        key = c.key_of(k) if isinstance(k, str) else k
        vec[key] = vec.get(key, 0) + F(x)
    vec = {k: x for k, x in vec.items() if x}
    if not vec:
        raise AlgebraError("the zero class is not a meaningful survival question")
    degs = {c.model.degree(k) for k in vec}
    if len(degs) != 1:
        raise AlgebraError("class is not homogeneous")
    if c.image_vec(vec):
        raise AlgebraError("class is not a cycle")
    deg = degs.pop()
    desc = description or " + ".join(f"{F.format(x)}*{c.model.label(k)}" for k, x in vec.items())
    levels = []
    model = free_algebra_model(c.P, c.input.generators, c.input.field.characteristic)
    for N in schedule:
        keys = model.basis_keys(N, (deg + 1, deg + 1))
        e = Echelon(model.sort_key)
        for k in keys:
            e.add(c.image(k))
        levels.append((N, "in-span" if e.contains(vec) else "not-in-span"))
    return MembershipCertificate(desc, levels, stability)


def homology_table(c: CobarComplex, window=None):
    """Betti numbers of the truncated complex; per weight when d keeps word length."""
    exact = c.preserves_weight()
    s = c.slice()
    h = homology(s, window, by_weight=exact)
    return h, exact


# ---------------------------------------------------------------------------
# functoriality

def apply_operad_map(f: OperadMap, c: CobarComplex, target_model: FreeAlgebraModel, key) -> dict:
    op, word = c.model.canonical(key)
    out: dict = {}
    for op2, x in f.image(op).items():
        vec_add(out, target_model.normal_form(op2, word), x)
    return out


def functoriality_check(alpha: TwistingMorphism, f: OperadMap, X: CoalgebraPresentation,
                        max_weight: int) -> list[str]:
    """Compare f applied arity-wise to Ω_α X with Ω_{f∘α} X."""
    bad = []
    A = cobar_complex(alpha, X, max_weight)
    beta = compose_with_operad_map(alpha, f)
    B = cobar_complex(beta, X, max_weight)
    if _desusp_depth(A.P)[1] != _desusp_depth(B.P)[1] and B.P.name != "Unit":
        bad.append("operads are desuspended differently")
    hit = set()
    for k in A.keys:
        fk = apply_operad_map(f, A, B.model, k)
        hit.update(fk)
        lhs: dict = {}
        for k2, x in A.image(k).items():
            vec_add(lhs, apply_operad_map(f, A, B.model, k2), x)
        rhs = B.image_vec(fk)
        vec_add(lhs, rhs, -1)
        if lhs:
            bad.append(f"differentials differ on the image of {A.model.label(k)}")
    missing = [B.model.label(k) for k in B.keys if k not in hit]
    if missing:
        bad.append(f"not surjective onto the target basis: {missing[0]}")
    return bad
