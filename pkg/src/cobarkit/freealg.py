"""Bases of free algebras P(X) = ⊕ P(n) ⊗_Σn X^⊗n and their normal forms.

Three closed-form models cover the Ass, Com and Unit families (with any
number of desuspensions) at every weight; the generic model handles table
operads such as Lie through explicit stabilizer quotients, up to the
operad's ``max_arity``.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from . import perms
from .gradedlin import AlgebraError, Echelon, GradedBasis, vec_add
from .sigmaop import AssOperad, ComOperad, Operad, UnitOperad, _desusp_depth


class FreeAlgebraModel:
    """Common machinery; keys are hashable, sortable basis identifiers."""

    def __init__(self, P: Operad, generators: GradedBasis, characteristic: int = 0):
        self.P = P
        self.gens = generators
        self.char = characteristic
        self.gdeg = {lab: d for lab, d, _ in generators}
        self.gwt = {lab: max(w, 1) for lab, d, w in generators}
        self.order = {lab: i for i, lab in enumerate(generators.labels)}
        m = min(self.gdeg.values(), default=0)
        self.min_degree = m

    # to be provided ------------------------------------------------------
    def normal_form(self, op, word: tuple) -> dict:
        raise NotImplementedError

    def canonical(self, key) -> tuple:
        """(operation, word) representing the basis element."""
        raise NotImplementedError

    def keys(self, max_weight: int, degree_cap: int | None = None) -> list:
        """Basis keys of weight ≤ max_weight; ``degree_cap`` is only a pruning hint."""
        raise NotImplementedError

    def label(self, key) -> str:
        raise NotImplementedError

    # shared --------------------------------------------------------------
    def word_of(self, key) -> tuple:
        return self.canonical(key)[1]

    def degree(self, key) -> int:
        op, word = self.canonical(key)
        return self.P.degree(op) + sum(self.gdeg[g] for g in word)

    def weight(self, key) -> int:
        return len(self.word_of(key))

    def sort_key(self, key):
        return (self.weight(key), self.degree(key), self.label(key))

    def check_regime(self, degree_window):
        if (degree_window is None or degree_window[0] is None) and self.gens.elements:
            if self.P.ell + self.min_degree < 0:
                raise AlgebraError(
                    f"boundedness violated: slope {self.P.ell} + min degree {self.min_degree} < 0")

    def basis_keys(self, max_weight: int, degree_window=None) -> list:
        self.check_regime(degree_window)
        cap = degree_window[1] if degree_window is not None else None
        ks = self.keys(max_weight, cap)
        if degree_window is not None:
            lo, hi = degree_window
            ks = [k for k in ks if (lo is None or self.degree(k) >= lo)
                  and (hi is None or self.degree(k) <= hi)]
        return sorted(ks, key=self.sort_key)

    def graded_basis(self, max_weight: int, degree_window=None) -> GradedBasis:
        ks = self.basis_keys(max_weight, degree_window)
        return GradedBasis.of((self.label(k), self.degree(k), self.weight(k)) for k in ks)

    def _stab_sign(self, g: str, op, pos: int) -> int:
        """ε·χ for the transposition of two equal letters at pos, pos+1."""
        n = self.P.arity(op)
        t = perms.adjacent(n, pos)
        chi = self.P.act(op, t).get(op, 0)
        eps = -1 if self.gdeg[g] % 2 else 1
        return eps * chi

    def _letter_shifts(self):
        """(s, {g: |g| - s}): a word of length n has degree Σ(|g| - s) + s."""
        two = self.P.basis(2) if self.P.max_arity >= 2 else []
        s = self.P.degree(self.P.unit) - self.P.degree(two[0]) if two else 0
        return s, {g: d - s for g, d in self.gdeg.items()}

    def _words(self, max_weight, degree_cap, ordered: bool):
        """All words (or sorted words) of length 1..max_weight, pruned by degree."""
        labs = self.gens.labels
        s, eff = self._letter_shifts()
        prune = degree_cap is not None and all(e >= 0 for e in eff.values())
        out = []

        def grow(word, total, start):
            if word:
                out.append(tuple(word))
            if len(word) == max_weight:
                return
            for j in range(0 if ordered else start, len(labs)):
                g = labs[j]
                t = total + eff[g]
                if prune and t + s > degree_cap:
                    continue
                word.append(g)
                grow(word, t, j)
                word.pop()

        grow([], 0, 0)
        return out

    def _word_sort(self, word):
        keys = [self.order[g] for g in word]
        s = perms.sorting_perm(keys)
        sg, sorted_word = perms.act(s, word, [self.gdeg[g] for g in word])
        return s, sg, sorted_word


class WordModel(FreeAlgebraModel):
    """Ass family: P(n) is free of rank one, the class of e ⊗ a is the word a."""

    def normal_form(self, op, word):
        n = len(word)
        if self.P.arity(op) != n:
            raise AlgebraError("arity mismatch")
        # op = c · e·σ^{-1} with e the identity word
        sinv = perms.inverse(op)
        c = self.P.act(perms.identity(n), sinv)[op]
        sg, w = perms.act(sinv, word, [self.gdeg[g] for g in word])
        return {w: c * sg}

    def canonical(self, key):
        return perms.identity(len(key)), key

    def keys(self, max_weight, degree_cap=None):
        return self._words(max_weight, degree_cap, True)

    def label(self, key):
        return ".".join(key)


class MonomialModel(FreeAlgebraModel):
    """Com family: one operation per arity; classes are signed sorted monomials."""

    def normal_form(self, op, word):
        n = len(word)
        if self.P.arity(op) != n:
            raise AlgebraError("arity mismatch")
        s, sg, w = self._word_sort(word)
        chi = self.P.act(op, s)[op]
        coeff = sg * chi
        if self.char:
            run = 1
            for j in range(1, n):
                run = run + 1 if w[j] == w[j - 1] else 1
                if run >= self.char:
                    raise AlgebraError(
                        f"characteristic {self.char} divides the stabilizer order of {'.'.join(w)}")
        if self.char != 2:
            for j in range(n - 1):
                if w[j] == w[j + 1] and self._stab_sign(w[j], op, j) == -1:
                    return {}
        return {w: coeff}

    def canonical(self, key):
        return len(key), key

    def keys(self, max_weight, degree_cap=None):
        return [w for w in self._words(max_weight, degree_cap, False) if self.normal_form(len(w), w)]

    def label(self, key):
        parts = []
        i = 0
        while i < len(key):
            j = i
            while j < len(key) and key[j] == key[i]:
                j += 1
            parts.append(key[i] if j - i == 1 else f"{key[i]}^{j - i}")
            i = j
        return ".".join(parts)


class UnitModel(FreeAlgebraModel):
    def normal_form(self, op, word):
        if len(word) != 1:
            raise AlgebraError("Unit operad has only arity 1")
        return {word: 1}

    def canonical(self, key):
        return self.P.unit, key

    def keys(self, max_weight, degree_cap=None):
        return [(g,) for g in self.gens.labels] if max_weight >= 1 else []

    def sort_key(self, key):
        # keep the generator order so that Ω over Unit is the input complex verbatim
        return self.gens.index(key[0])

    def label(self, key):
        return key[0]


class GenericModel(FreeAlgebraModel):
    """Orbit representatives (op, sorted word) modulo the stabilizer relations."""

    def __init__(self, P, generators, characteristic=0):
        super().__init__(P, generators, characteristic)
        self._quot: dict = {}
        self.stabilizer_orders: dict = {}

    def _quotient(self, w: tuple) -> Echelon:
        if w in self._quot:
            return self._quot[w]
        n = len(w)
        if n > self.P.max_arity:
            raise AlgebraError(f"weight {n} exceeds the operad's arity bound {self.P.max_arity}")
        basis = self.P.basis(n)
        idx = {k: i for i, k in enumerate(basis)}
        e = Echelon(lambda k: idx[k])
        eps_sign = lambda g: -1 if self.gdeg[g] % 2 else 1
        order = 1
        run = 1
        for j in range(n - 1):
            if w[j] == w[j + 1]:
                run += 1
                order *= run
                t = perms.adjacent(n, j)
                for q in basis:
                    rel = dict(self.P.act(q, t))
                    vec_add(rel, {q: 1}, -eps_sign(w[j]))
                    e.add(rel)
            else:
                run = 1
        if self.char and order % self.char == 0 and order > 1:
            raise AlgebraError(
                f"characteristic {self.char} divides the stabilizer order {order} of {w}")
        self.stabilizer_orders[w] = order
        self._quot[w] = e
        return e

    def normal_form(self, op, word):
        s, sg, w = self._word_sort(word)
        v = {k: sg * c for k, c in self.P.act(op, perms.inverse(s)).items()}
        r = self._quotient(w).reduce(v)
        return {(k, w): c for k, c in r.items()}

    def canonical(self, key):
        return key

    def keys(self, max_weight, degree_cap=None):
        out = []
        labs = self.gens.labels
        for n in range(1, min(max_weight, self.P.max_arity) + 1):
            for w in combinations_with_replacement(labs, n):
                e = self._quotient(w)
                for q in self.P.basis(n):
                    if q not in e.rows:
                        out.append((q, w))
        return out

    def label(self, key):
        op, w = key
        return f"{self.P.label(op)}|{'.'.join(w)}"

    def sort_key(self, key):
        op, w = key
        return (len(w), self.degree(key), w, repr(op))


def free_algebra_model(P: Operad, generators: GradedBasis, characteristic: int = 0) -> FreeAlgebraModel:
    base, _ = _desusp_depth(P)
    if characteristic == 0:
        characteristic = _char_of(P)
    if isinstance(base, AssOperad):
        return WordModel(P, generators, characteristic)
    if isinstance(base, ComOperad):
        return MonomialModel(P, generators, characteristic)
    if isinstance(base, UnitOperad):
        return UnitModel(P, generators, characteristic)
    return GenericModel(P, generators, characteristic)


def _char_of(P: Operad) -> int:
    f = P.metadata.get("field", "Q")
    return 0 if f == "Q" else int(str(f).split(":")[1])
