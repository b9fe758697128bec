"""Finitely presented conilpotent coalgebras over a cooperad.

A presentation lists generators, their differential and their reduced
decomposition.  The decomposition of a generator is stored as the full
Σ-invariant element of ⊕ C(k) ⊗ X^⊗k, i.e. a sum of terms ``c ⊗ (g1,...,gk)``
keyed by ``(c, word)``.  Invariance means the sum is unchanged under
``c ⊗ w ↦ (c·σ) ⊗ (σ^{-1}·w)`` with the Koszul sign on the word.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial
from itertools import combinations, combinations_with_replacement, product

from . import perms
from .gradedlin import (QQ, AlgebraError, ChainComplexSlice, Echelon, Field, GradedBasis,
                        LinearMap, span_rank, vec_add)
from .sigmaop import (AssOperad, ComOperad, Cooperad, CooperadMap, UnitOperad, _desusp_depth,
                      dual_cooperad_map, preset_operad, preset_operad_map)

TENSOR = "⊗"
SYM = "·"


def _clean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


@dataclass
class ValidationReport:
    violations: list[str] = dc_field(default_factory=list)
    checked_arity: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


class CoalgebraPresentation:
    """Generators with differential ``d`` and reduced decomposition ``delta``.

    ``differential`` maps a generator label to {label: coeff};
    ``decomposition`` maps a generator label to {(cooperad key, word): coeff}.
    """

    def __init__(self, cooperad: Cooperad, generators: GradedBasis, differential=None,
                 decomposition=None, field: Field = QQ, name: str = "X"):
        self.cooperad = cooperad
        self.generators = generators
        self.field = field
        self.name = name
        self.differential = {g: _clean({h: field(c) for h, c in (differential or {}).get(g, {}).items()})
                             for g in generators.labels}
        self.decomposition = {}
        for g in generators.labels:
            terms = {}
            for (c, word), x in (decomposition or {}).get(g, {}).items():
                key = (c, tuple(word))
                terms[key] = terms.get(key, 0) + field(x)
            self.decomposition[g] = _clean(terms)
        for g, dv in self.differential.items():
            for h in dv:
                if h not in generators:
                    raise AlgebraError(f"differential of {g} refers to unknown generator {h!r}")
        for g, terms in self.decomposition.items():
            for (c, word) in terms:
                for h in word:
                    if h not in generators:
                        raise AlgebraError(f"decomposition of {g} refers to unknown generator {h!r}")
        # set by sub_coalgebra
        self.ambient: CoalgebraPresentation | None = None
        self.inclusion: dict | None = None

    # ------------------------------------------------------------------
    @property
    def labels(self) -> list[str]:
        return self.generators.labels

    def degree(self, g: str) -> int:
        return self.generators.degree(self.generators.index(g))

    def weight(self, g: str) -> int:
        return self.generators.weight(self.generators.index(g))

    @property
    def min_degree(self) -> int | None:
        degs = self.generators.degrees()
        return min(degs) if degs else None

    def word_degree(self, word) -> int:
        return sum(self.degree(h) for h in word)

    def chain_complex(self, window=None) -> ChainComplexSlice:
        b = self.generators
        entries = {}
        for g, dv in self.differential.items():
            for h, x in dv.items():
                entries[(b.index(h), b.index(g))] = x
        return ChainComplexSlice.from_basis(b, entries, window)

    def differential_map(self) -> LinearMap:
        return self.chain_complex().differential

    def d_word(self, c, word) -> dict:
        """Extension of d to c ⊗ word, with Koszul signs (cooperad has d = 0)."""
        out: dict = {}
        pre = self.cooperad.degree(c)
        for i, h in enumerate(word):
            s = -1 if pre % 2 else 1
            for h2, x in self.differential[h].items():
                key = (c, word[:i] + (h2,) + word[i + 1:])
                out[key] = out.get(key, 0) + s * x
            pre += self.degree(h)
        return _clean(out)

    def delta_vec(self, v: dict) -> dict:
        out: dict = {}
        for g, x in v.items():
            vec_add(out, self.decomposition[g], x)
        return out

    def validate(self) -> ValidationReport:
        return validate_coalgebra(self)

    def __repr__(self):
        return f"<Coalgebra {self.name} over {self.cooperad.name}, {len(self.generators)} generators>"


# ---------------------------------------------------------------------------
# validation

def _invariance_defect(X: CoalgebraPresentation, terms: dict):
    C = X.cooperad
    by_arity: dict = {}
    for (c, word), x in terms.items():
        by_arity.setdefault(len(word), {})[(c, word)] = x
    for k, part in by_arity.items():
        for j in range(k - 1):
            t = perms.adjacent(k, j)
            moved: dict = {}
            for (c, word), x in part.items():
                sg, w2 = perms.act(t, word, [X.degree(h) for h in word])
                for c2, y in C.act(c, t).items():
                    key = (c2, w2)
                    moved[key] = moved.get(key, 0) + sg * y * x
            diff = _clean(moved)
            vec_add(diff, part, -1)
            if diff:
                return k, j
    return None


def _lhs_coassoc(X: CoalgebraPresentation, g: str) -> dict:
    C = X.cooperad
    out: dict = {}
    for (c, word), x in X.decomposition[g].items():
        pre = 0
        for i, h in enumerate(word):
            for (c2, w2), y in X.decomposition[h].items():
                s = -1 if (C.degree(c2) * pre) % 2 else 1
                key = (c, i, c2, word[:i] + w2 + word[i + 1:])
                out[key] = out.get(key, 0) + s * x * y
            pre += X.degree(h)
    return _clean(out)


def _rhs_coassoc(X: CoalgebraPresentation, g: str, max_arity: int) -> dict:
    C = X.cooperad
    out: dict = {}
    for (c, word), x in X.decomposition[g].items():
        if len(word) > max_arity:
            continue
        for a, i, b, sh, y in C.infinitesimal(c):
            sg, arranged = perms.act(sh, word, [X.degree(h) for h in word])
            key = (a, i, b, arranged)
            out[key] = out.get(key, 0) + sg * x * y
    return _clean(out)


def _tree_symmetrize(X: CoalgebraPresentation, v: dict) -> dict:
    """Sum over the automorphisms Σk × Σl of the two-level tree a ∘_i b."""
    C = X.cooperad
    out: dict = {}
    for (a, i, b, w), x in v.items():
        k, l = C.arity(a), C.arity(b)
        block = w[i:i + l]
        outer = w[:i] + (block,) + w[i + l:]
        odeg = [X.word_degree(h) + C.degree(b) if j == i else X.degree(h)
                for j, h in enumerate(outer)]
        for t in perms.all_perms(l):
            tinv = perms.inverse(t)
            st, blk = perms.act(tinv, block, [X.degree(h) for h in block])
            bt = C.act(b, t)
            for s in perms.all_perms(k):
                sinv = perms.inverse(s)
                so, items = perms.act(sinv, outer, odeg)
                j = sinv[i]
                flat = tuple(h for m, it in enumerate(items)
                             for h in (blk if m == j else (it,)))
                for a2, y in C.act(a, s).items():
                    for b2, z in bt.items():
                        key = (a2, j, b2, flat)
                        out[key] = out.get(key, 0) + st * so * x * y * z
    return _clean(out)


def _depth(X: CoalgebraPresentation, g: str, memo: dict, stack: set):
    if g in memo:
        return memo[g]
    if g in stack:
        return None
    stack.add(g)
    best = 0
    for (c, word) in X.decomposition[g]:
        for h in word:
            d = _depth(X, h, memo, stack)
            if d is None:
                stack.discard(g)
                return None
            best = max(best, d + 1)
    stack.discard(g)
    memo[g] = best
    return best


def validate_coalgebra(X: CoalgebraPresentation) -> ValidationReport:
    C = X.cooperad
    N = C.max_arity
    rep = ValidationReport(checked_arity=N)
    bad = rep.violations
    m = X.min_degree
    if m is not None and C.ell + m < 0:
        bad.append(f"boundedness: slope {C.ell} + min degree {m} < 0")
    for g in X.labels:
        for h in X.differential[g]:
            if X.degree(h) != X.degree(g) - 1:
                bad.append(f"degree: d({g}) hits {h} of degree {X.degree(h)}, expected {X.degree(g) - 1}")
        for (c, word) in X.decomposition[g]:
            if len(word) < 2 or C.arity(c) != len(word):
                bad.append(f"decomposition of {g}: term {C.label(c)} has arity {C.arity(c)}"
                           f" on a word of length {len(word)}")
                continue
            if C.degree(c) + X.word_degree(word) != X.degree(g):
                bad.append(f"degree: decomposition of {g} has term {C.label(c)}⊗({', '.join(word)})"
                           f" of the wrong degree")
    if bad:
        return rep
    # d∘d
    for g in X.labels:
        dd: dict = {}
        for h, x in X.differential[g].items():
            vec_add(dd, X.differential[h], x)
        if dd:
            bad.append(f"d∘d != 0 on {g}")
    # invariance
    for g in X.labels:
        defect = _invariance_defect(X, X.decomposition[g])
        if defect:
            bad.append(f"decomposition of {g} is not Σ{defect[0]}-invariant")
    # coderivation: Δ d = d Δ
    for g in X.labels:
        lhs = X.delta_vec(X.differential[g])
        rhs: dict = {}
        for (c, word), x in X.decomposition[g].items():
            vec_add(rhs, X.d_word(c, word), x)
        vec_add(lhs, rhs, -1)
        if lhs:
            bad.append(f"Leibniz: decomposition does not commute with d on {g}")
    # conilpotence
    memo: dict = {}
    for g in X.labels:
        d = _depth(X, g, memo, set())
        if d is None:
            bad.append(f"conilpotence: iterated decomposition of {g} does not terminate")
    if any("conilpotence" in b for b in bad):
        return rep
    # coassociativity through total arity N
    for g in X.labels:
        # the shuffle-indexed side only matches after summing over tree
        # automorphisms, which produces a factor n! on the other side
        lhs = {k: factorial(len(k[3])) * x for k, x in _lhs_coassoc(X, g).items()
               if len(k[3]) <= N}
        rhs = _tree_symmetrize(X, _rhs_coassoc(X, g, N))
        vec_add(lhs, rhs, -1)
        if lhs:
            (a, i, b, w), _ = next(iter(lhs.items()))
            bad.append(f"coassociativity fails on {g} at {C.label(a)}∘_{i}{C.label(b)}⊗({', '.join(w)})")
    return rep


def _raise_if_bad(X: CoalgebraPresentation) -> CoalgebraPresentation:
    rep = validate_coalgebra(X)
    if not rep.ok:
        raise AlgebraError("; ".join(rep.violations))
    return X


# ---------------------------------------------------------------------------
# cofree coalgebras

def _ordered_set_partitions(items: tuple, k: int):
    """Ordered partitions of ``items`` (positions) into k nonempty blocks."""
    if k == 1:
        if items:
            yield (items,)
        return
    n = len(items)
    for r in range(1, n - k + 2):
        for first in combinations(items, r):
            rest = tuple(j for j in items if j not in first)
            for tail in _ordered_set_partitions(rest, k - 1):
                yield (first,) + tail


def _monomial_label(word) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
        i = j
    return SYM.join(parts)


def cofree_conilpotent(C: Cooperad, generators: GradedBasis, max_weight: int,
                       field: Field = QQ, name: str = "C~") -> CoalgebraPresentation:
    """Cofree conilpotent C-coalgebra on ``generators``, truncated at ``max_weight``.

    Supported for the Ass^c, Com^c and Unit^c families.  Tensor words are
    labelled ``x⊗y``, symmetric monomials ``x^2·w``.
    """
    degs = {lab: d for lab, d, _ in generators}
    m = min(degs.values(), default=0)
    if generators.elements and C.ell + m < 0:
        raise AlgebraError(f"boundedness violated: slope {C.ell} + min degree {m} < 0")
    base, depth = _desusp_depth(C.operad)
    if depth:
        raise AlgebraError("cofree coalgebras over desuspended cooperads are not supported")
    labs = generators.labels
    if isinstance(base, UnitOperad):
        return CoalgebraPresentation(C, generators, {}, {}, field, name)
    if isinstance(base, AssOperad):
        return _cofree_ass(C, labs, degs, max_weight, field, name)
    if isinstance(base, ComOperad):
        return _cofree_com(C, labs, degs, max_weight, field, name)
    raise AlgebraError(f"cofree coalgebras over {C.name} are not supported")


def _cofree_ass(C, labs, degs, W, field, name):
    words = [w for n in range(1, W + 1) for w in product(labs, repeat=n)]
    lab = {w: TENSOR.join(w) for w in words}
    gens = GradedBasis.of((lab[w], sum(degs[h] for h in w), len(w)) for w in words)
    dec = {}
    for w in words:
        n = len(w)
        terms: dict = {}
        for k in range(2, min(n, C.max_arity) + 1):
            for cuts in combinations(range(1, n), k - 1):
                bounds = (0,) + cuts + (n,)
                blocks = tuple(w[bounds[j]:bounds[j + 1]] for j in range(k))
                bdeg = [sum(degs[h] for h in b) for b in blocks]
                bl = tuple(lab[b] for b in blocks)
                for pi in perms.all_perms(k):
                    pinv = perms.inverse(pi)
                    sg, word = perms.act(pinv, bl, bdeg)
                    for c, x in C.act(perms.identity(k), pi).items():
                        key = (c, word)
                        terms[key] = terms.get(key, 0) + sg * x
        dec[lab[w]] = terms
    return CoalgebraPresentation(C, gens, {}, dec, field, name)


def _cofree_com(C, labs, degs, W, field, name):
    def alive(w):
        if field.characteristic == 2:
            return True
        return not any(w[j] == w[j + 1] and degs[w[j]] % 2 for j in range(len(w) - 1))

    monos = [w for n in range(1, W + 1) for w in combinations_with_replacement(labs, n) if alive(w)]
    lab = {w: _monomial_label(w) for w in monos}
    gens = GradedBasis.of((lab[w], sum(degs[h] for h in w), len(w)) for w in monos)
    dec = {}
    for w in monos:
        n = len(w)
        terms: dict = {}
        for k in range(2, min(n, C.max_arity) + 1):
            for parts in _ordered_set_partitions(tuple(range(n)), k):
                flat = [j for p in parts for j in p]
                # sign of bringing the letters into block order
                s = perms.inverse(tuple(flat))
                sg = perms.koszul_sign(s, [degs[h] for h in w])
                blocks = []
                for p in parts:
                    sub = tuple(w[j] for j in p)
                    if not alive(sub):
                        break
                    blocks.append(lab[sub])
                else:
                    key = (k, tuple(blocks))
                    terms[key] = terms.get(key, 0) + sg
        dec[lab[w]] = terms
    return CoalgebraPresentation(C, gens, {}, dec, field, name)


# ---------------------------------------------------------------------------
# subcoalgebras

class _Coordinates:
    """Coordinates of vectors in the span of an independent family."""

    def __init__(self, vectors: list[dict], order):
        self.e = Echelon(order)
        for i, v in enumerate(vectors):
            tagged = dict(v)
            tagged[("#", i)] = 1
            self.e.add(tagged)
        self.n = len(vectors)

    def express(self, v: dict):
        r = self.e.reduce(v)
        coords = {}
        rest = {}
        for k, x in r.items():
            if isinstance(k, tuple) and len(k) == 2 and k[0] == "#":
                coords[k[1]] = -x
            else:
                rest[k] = x
        return coords, rest


def sub_coalgebra(ambient: CoalgebraPresentation, spanning, differential=None,
                  name: str = "X") -> CoalgebraPresentation:
    """Subcoalgebra on ``spanning`` = [(label, {ambient label: coeff}), ...].

    The differential is induced from the ambient one unless overridden by
    ``differential`` = {label: {label: coeff}} in the new labels.
    """
    F = ambient.field
    spanning = [(lab, {h: F(x) for h, x in v.items() if x}) for lab, v in spanning]
    amb = ambient.generators
    for lab, v in spanning:
        if not v:
            raise AlgebraError(f"spanning vector {lab} is zero")
        for h in v:
            if h not in amb:
                raise AlgebraError(f"{h!r} is not a generator of {ambient.name}")
        if len({ambient.degree(h) for h in v}) != 1:
            raise AlgebraError(f"spanning vector {lab} is not homogeneous")
    rank_order = {h: i for i, h in enumerate(amb.labels)}

    def order(k):
        if isinstance(k, tuple) and k and k[0] == "#":
            return (1, k[1])
        return (0, rank_order[k])

    vecs = [v for _, v in spanning]
    if span_rank(vecs, order) != len(vecs):
        raise AlgebraError("spanning vectors are linearly dependent")
    coords = _Coordinates(vecs, order)
    labels = [lab for lab, _ in spanning]
    in_span = {h for h in amb.labels if not coords.express({h: 1})[1]}

    def express(v):
        c, rest = coords.express(v)
        return {labels[i]: x for i, x in c.items()}, rest

    gens = GradedBasis.of((lab, ambient.degree(next(iter(v))),
                           max(ambient.weight(h) for h in v)) for lab, v in spanning)
    # differential
    d = {}
    for lab, v in spanning:
        if differential is not None and lab in differential:
            d[lab] = dict(differential[lab])
            continue
        img: dict = {}
        for h, x in v.items():
            vec_add(img, ambient.differential[h], x)
        co, rest = express(img)
        if rest:
            raise AlgebraError(f"differential of {lab} leaves the span (hits {sorted(rest)[0]})")
        d[lab] = co
    # decomposition, tensor coordinate extraction slot by slot
    dec = {}
    for lab, v in spanning:
        full = ambient.delta_vec(v)
        terms: dict = {}
        for (c, word), x in full.items():
            partial = {((), word): x}
            for pos in range(len(word)):
                nxt: dict = {}
                for (done, w), y in partial.items():
                    co, rest = express({w[pos]: 1})
                    if rest:
                        esc = [h for h in w if h not in in_span]
                        raise AlgebraError(
                            f"decomposition of {lab} escapes the span: term "
                            f"{ambient.cooperad.label(c)}⊗({', '.join(word)})"
                            + (f", {esc[0]} is not in the span" if esc else ""))
                    for s, z in co.items():
                        k2 = (done + (s,), w)
                        nxt[k2] = nxt.get(k2, 0) + y * z
                partial = nxt
            for (done, _), y in partial.items():
                k2 = (c, done)
                terms[k2] = terms.get(k2, 0) + y
        terms = _clean(terms)
        # verify closure: reconstruct and compare
        back: dict = {}
        for (c, sw), y in terms.items():
            for combo in product(*[spanning[labels.index(s)][1].items() for s in sw]):
                wd = tuple(h for h, _ in combo)
                coef = y
                for _, z in combo:
                    coef = coef * z
                back[(c, wd)] = back.get((c, wd), 0) + coef
        vec_add(back, full, -1)
        if back:
            (c, word), _ = next(iter(back.items()))
            esc = [h for h in word if h not in in_span]
            raise AlgebraError(
                f"decomposition of {lab} escapes the span: term "
                f"{ambient.cooperad.label(c)}⊗({', '.join(word)})"
                + (f", {esc[0]} is not in the span" if esc else ""))
        dec[lab] = terms
    X = CoalgebraPresentation(ambient.cooperad, gens, d, dec, F, name)
    X.ambient = ambient
    X.inclusion = {lab: dict(v) for lab, v in spanning}
    return _raise_if_bad(X)


# ---------------------------------------------------------------------------
# morphisms

class CoalgebraMorphism:
    """Degree-0 map given on generators; commutes with d and decomposition."""

    def __init__(self, source: CoalgebraPresentation, target: CoalgebraPresentation,
                 images: dict, name: str = "f"):
        if source.cooperad is not target.cooperad:
            raise AlgebraError("morphism between coalgebras over different cooperads")
        F = target.field
        self.source, self.target, self.name = source, target, name
        self.images = {g: _clean({h: F(x) for h, x in images.get(g, {}).items()})
                       for g in source.labels}
        for g, v in self.images.items():
            for h in v:
                if h not in target.generators:
                    raise AlgebraError(f"image of {g} refers to unknown generator {h!r}")

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for g, x in v.items():
            vec_add(out, self.images[g], x)
        return out

    def apply_terms(self, terms: dict) -> dict:
        out: dict = {}
        for (c, word), x in terms.items():
            for combo in product(*[self.images[h].items() for h in word]):
                coef = x
                for _, z in combo:
                    coef = coef * z
                key = (c, tuple(h for h, _ in combo))
                out[key] = out.get(key, 0) + coef
        return _clean(out)

    def linear_map(self) -> LinearMap:
        S, T = self.source.generators, self.target.generators
        ent = {}
        for g, v in self.images.items():
            for h, x in v.items():
                ent[(T.index(h), S.index(g))] = x
        return LinearMap(S, T, 0, ent)

    def check(self) -> list[str]:
        S, T = self.source, self.target
        bad = []
        for g, v in self.images.items():
            for h in v:
                if T.degree(h) != S.degree(g):
                    bad.append(f"degree: {g} ↦ {h} changes degree")
        if bad:
            return bad
        for g in S.labels:
            lhs = self.apply(S.differential[g])
            rhs: dict = {}
            for h, x in self.images[g].items():
                vec_add(rhs, T.differential[h], x)
            vec_add(lhs, rhs, -1)
            if lhs:
                bad.append(f"does not commute with d on {g}")
            lhs = self.apply_terms(S.decomposition[g])
            vec_add(lhs, T.delta_vec(self.images[g]), -1)
            if lhs:
                bad.append(f"does not commute with decomposition on {g}")
        return bad

    def then(self, g: "CoalgebraMorphism") -> "CoalgebraMorphism":
        return CoalgebraMorphism(self.source, g.target,
                                 {h: g.apply(v) for h, v in self.images.items()},
                                 f"{g.name}∘{self.name}")


def make_morphism(source, target, images, name="f") -> CoalgebraMorphism:
    f = CoalgebraMorphism(source, target, images, name)
    bad = f.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    return f


def inclusion_morphism(X: CoalgebraPresentation) -> CoalgebraMorphism:
    if X.ambient is None:
        raise AlgebraError(f"{X.name} was not built as a subcoalgebra")
    return make_morphism(X, X.ambient, X.inclusion, "incl")


def zero_coalgebra(C: Cooperad, field: Field = QQ) -> CoalgebraPresentation:
    return CoalgebraPresentation(C, GradedBasis(()), {}, {}, field, "0")


# ---------------------------------------------------------------------------
# pushforward

def pushforward(f: CooperadMap, X: CoalgebraPresentation) -> CoalgebraPresentation:
    if f.source is not X.cooperad:
        raise AlgebraError("cooperad map does not start at the coalgebra's cooperad")
    dec = {}
    for g, terms in X.decomposition.items():
        out: dict = {}
        for (c, word), x in terms.items():
            for c2, y in f.image(c).items():
                key = (c2, word)
                out[key] = out.get(key, 0) + x * y
        dec[g] = out
    Y = CoalgebraPresentation(f.target, X.generators, X.differential, dec, X.field,
                              f"{f.name}_*{X.name}")
    rep = validate_coalgebra(Y)
    if not rep.ok:
        raise AlgebraError("pushforward is not a valid coalgebra: " + "; ".join(rep.violations))
    return Y


_LIE_DUALS: dict = {}


def ass_to_lie_map(C: Cooperad) -> CooperadMap:
    """The dual of the inclusion Lie → Ass, as a map Ass^c → Lie^c."""
    base, depth = _desusp_depth(C.operad)
    if depth or not isinstance(base, AssOperad):
        raise AlgebraError(f"cocommutator needs an Ass^c-coalgebra, got {C.name}")
    key = id(C)
    if key not in _LIE_DUALS:
        lie = preset_operad("Lie", min(C.max_arity, 6))
        incl = preset_operad_map("inclusion", lie, C.operad)
        _LIE_DUALS[key] = (C, dual_cooperad_map(incl, C, Cooperad(lie)))
    return _LIE_DUALS[key][1]


def cocommutator(X: CoalgebraPresentation) -> CoalgebraPresentation:
    return pushforward(ass_to_lie_map(X.cooperad), X)


def has_zero_decomposition(X: CoalgebraPresentation) -> bool:
    return all(not t for t in X.decomposition.values())
