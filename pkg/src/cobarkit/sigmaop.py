"""Operads and cooperads with symmetric group actions.

Operations are modelled as multilinear functions of degree-0 placeholders:
``p·s`` is the operation ``a -> p(s·a)`` where ``s·a`` moves input ``i`` to
slot ``s[i]``, and ``a ∘_i b`` (0-based ``i``) plugs ``b`` into slot ``i``.
With this convention equivariance carries no signs; all Koszul signs come
from the degrees of the operations themselves (only relevant for the
parallel associativity law and for desuspensions).

The presets Com, Ass and Unit are given in closed form for every arity;
Lie is a table up to arity 6.  ``max_arity`` bounds what is listed and what
``check_axioms`` verifies, never what can be computed.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import permutations
from typing import Callable, Hashable

from . import perms
from .gradedlin import AlgebraError, Echelon, Field, GradedBasis, QQ, vec_add, vec_scale

Key = Hashable

LIE_MAX_ARITY = 6


def _add(acc: dict, v: dict, c=1):
    return vec_add(acc, v, c)


# ---------------------------------------------------------------------------
# operads

class Operad:
    """Base class; subclasses supply basis, degree, act, compose."""

    name: str = "P"
    family: str | None = None
    shift: int = 0

    def __init__(self, max_arity: int, ell: int = 0, metadata: dict | None = None):
        if max_arity < 1:
            raise AlgebraError("max_arity must be at least 1")
        self.max_arity = max_arity
        self.ell = ell
        self.metadata = dict(metadata or {})

    # interface -------------------------------------------------------------
    def basis(self, n: int) -> list[Key]:
        raise NotImplementedError

    def arity(self, key: Key) -> int:
        raise NotImplementedError

    def degree(self, key: Key) -> int:
        return 0

    def act(self, key: Key, s: perms.Perm) -> dict:
        raise NotImplementedError

    def compose(self, a: Key, i: int, b: Key) -> dict:
        raise NotImplementedError

    @property
    def unit(self) -> Key:
        raise NotImplementedError

    def label(self, key: Key) -> str:
        return str(key)

    def parse(self, label: str) -> Key:
        for n in range(1, self.max_arity + 1):
            for k in self.basis(n):
                if self.label(k) == label:
                    return k
        raise AlgebraError(f"{label!r} is not a basis element of {self.name}")

    # derived ---------------------------------------------------------------
    def dims(self, upto: int | None = None) -> tuple[int, ...]:
        upto = upto or self.max_arity
        return tuple(len(self.basis(n)) for n in range(1, upto + 1))

    def component(self, n: int) -> GradedBasis:
        return GradedBasis.of((self.label(k), self.degree(k), n - 1) for k in self.basis(n))

    def act_vec(self, v: dict, s) -> dict:
        out: dict = {}
        for k, c in v.items():
            _add(out, self.act(k, s), c)
        return out

    def compose_vec(self, u: dict, i: int, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                _add(out, self.compose(a, i, b), x * y)
        return out

    def vec_label(self, v: dict) -> str:
        return " + ".join(f"{c}*{self.label(k)}" for k, c in sorted(v.items(), key=str)) or "0"

    def __repr__(self):
        return f"<Operad {self.name} max_arity={self.max_arity}>"


class AssOperad(Operad):
    """Ass(n) = regular representation; key = output order of the inputs."""

    name = "Ass"
    family = "Ass"

    def basis(self, n):
        return [tuple(p) for p in permutations(range(n))]

    def arity(self, key):
        return len(key)

    def act(self, key, s):
        return {perms.compose(perms.inverse(s), key): 1}

    def compose(self, a, i, b):
        l = len(b)
        out = []
        for x in a:
            if x < i:
                out.append(x)
            elif x == i:
                out.extend(i + t for t in b)
            else:
                out.append(x + l - 1)
        return {tuple(out): 1}

    @property
    def unit(self):
        return (0,)

    def label(self, key):
        if len(key) < 10:
            return "m" + "".join(str(x + 1) for x in key)
        return "m(" + ",".join(str(x + 1) for x in key) + ")"

    def parse(self, label):
        m = re.fullmatch(r"m(\d+)|m\(([\d,]+)\)", label)
        if not m:
            raise AlgebraError(f"{label!r} is not an Ass label")
        digits = [int(c) for c in m.group(1)] if m.group(1) else [int(c) for c in m.group(2).split(",")]
        key = tuple(d - 1 for d in digits)
        if sorted(key) != list(range(len(key))):
            raise AlgebraError(f"{label!r} is not a permutation")
        return key


class ComOperad(Operad):
    name = "Com"
    family = "Com"

    def basis(self, n):
        return [n]

    def arity(self, key):
        return key

    def act(self, key, s):
        return {key: 1}

    def compose(self, a, i, b):
        return {a + b - 1: 1}

    @property
    def unit(self):
        return 1

    def label(self, key):
        return f"c{key}"

    def parse(self, label):
        m = re.fullmatch(r"c(\d+)", label)
        if not m or int(m.group(1)) < 1:
            raise AlgebraError(f"{label!r} is not a Com label")
        return int(m.group(1))


class UnitOperad(Operad):
    name = "Unit"
    family = "Unit"

    def basis(self, n):
        return ["id"] if n == 1 else []

    def arity(self, key):
        return 1

    def act(self, key, s):
        return {key: 1}

    def compose(self, a, i, b):
        return {"id": 1}

    @property
    def unit(self):
        return "id"

    def parse(self, label):
        if label != "id":
            raise AlgebraError(f"{label!r} is not a Unit label")
        return "id"


class Coordinates:
    """Express vectors in terms of a fixed independent family."""

    def __init__(self, vectors: list[dict]):
        self.e = Echelon(lambda k: (k[0], repr(k[1])))
        for j, v in enumerate(vectors):
            aug = {(0, k): x for k, x in v.items()}
            aug[(1, j)] = 1
            self.e.add(aug)
        self.n = len(vectors)

    def express(self, v: dict) -> dict:
        r = self.e.reduce({(0, k): x for k, x in v.items()})
        if any(k[0] == 0 for k in r):
            raise AlgebraError("vector outside the span")
        return {k[1]: -x for k, x in r.items()}


def _bracket_expand(tree) -> dict:
    """Expand a bracket tree of input indices into Ass output words."""
    if isinstance(tree, int):
        return {(tree,): 1}
    left, right = (_bracket_expand(t) for t in tree)
    out: dict = {}
    for u, x in left.items():
        for v, y in right.items():
            _add(out, {u + v: 1}, x * y)
            _add(out, {v + u: 1}, -x * y)
    return out


def _tree_label(tree) -> str:
    if isinstance(tree, int):
        return str(tree + 1)
    return "[" + ",".join(_tree_label(t) for t in tree) + "]"


def _left_normed(seq):
    t = seq[0]
    for x in seq[1:]:
        t = (t, x)
    return t


class LieOperad(Operad):
    """Lie(n) inside Ass(n), basis of left-normed brackets starting with 1."""

    name = "Lie"
    family = "Lie"

    def __init__(self, max_arity, ell=0, metadata=None):
        if max_arity > LIE_MAX_ARITY:
            raise AlgebraError(f"Lie preset is capped at arity {LIE_MAX_ARITY}")
        super().__init__(max_arity, ell, metadata)
        self._ass = AssOperad(max_arity)
        self._trees: dict[int, list] = {}
        self._coords: dict[int, Coordinates] = {}

    def _setup(self, n):
        if n not in self._trees:
            if n < 1 or n > self.max_arity:
                raise AlgebraError(f"Lie arity {n} outside 1..{self.max_arity}")
            if n == 1:
                trees = [0]
            else:
                trees = [_left_normed((0,) + rest) for rest in permutations(range(1, n))]
            self._trees[n] = trees
            self._coords[n] = Coordinates([_bracket_expand(t) for t in trees])

    def basis(self, n):
        if n > self.max_arity:
            return []
        self._setup(n)
        return [(n, j) for j in range(len(self._trees[n]))]

    def arity(self, key):
        return key[0]

    def expand(self, key) -> dict:
        n, j = key
        self._setup(n)
        return _bracket_expand(self._trees[n][j])

    def _back(self, n, v):
        self._setup(n)
        return {(n, j): x for j, x in self._coords[n].express(v).items()}

    @lru_cache(maxsize=None)
    def _act(self, key, s):
        return self._back(key[0], self._ass.act_vec(self.expand(key), s))

    def act(self, key, s):
        return dict(self._act(key, tuple(s)))

    @lru_cache(maxsize=None)
    def _compose(self, a, i, b):
        n = a[0] + b[0] - 1
        return self._back(n, self._ass.compose_vec(self.expand(a), i, self.expand(b)))

    def compose(self, a, i, b):
        return dict(self._compose(a, i, b))

    @property
    def unit(self):
        return (1, 0)

    def label(self, key):
        n, j = key
        self._setup(n)
        return "id" if n == 1 else _tree_label(self._trees[n][j])

    def __hash__(self):
        return id(self)


class Desuspension(Operad):
    """Arity-wise Hadamard product with End of the suspended line, inverted.

    Arity n is shifted down by n-1; the action is twisted by the sign
    character; ``a ∘_i b`` picks up ``(-1)^{(k-1)|b| + (l-1) i}``.
    """

    family = None

    def __init__(self, base: Operad):
        super().__init__(base.max_arity, base.ell - 1, dict(base.metadata))
        self.base = base
        self.name = f"S^-1 {base.name}"
        self.family = base.family
        self.shift = base.shift + 1

    def basis(self, n):
        return self.base.basis(n)

    def arity(self, key):
        return self.base.arity(key)

    def degree(self, key):
        return self.base.degree(key) - (self.arity(key) - 1)

    def act(self, key, s):
        return vec_scale(self.base.act(key, s), perms.sign(s))

    def compose(self, a, i, b):
        k, l = self.arity(a), self.arity(b)
        e = ((k - 1) * self.base.degree(b) + (l - 1) * i) % 2
        out = self.base.compose(a, i, b)
        return vec_scale(out, -1) if e else out

    @property
    def unit(self):
        return self.base.unit

    def label(self, key):
        return self.base.label(key)

    def parse(self, label):
        return self.base.parse(label)


class TableOperad(Operad):
    """Operad given by explicit finite tables (arity <= max_arity)."""

    def __init__(self, name, max_arity, components, unit, swaps, compositions,
                 ell=0, metadata=None):
        super().__init__(max_arity, ell, metadata)
        self.name = name
        self._basis = {n: list(ks) for n, ks in components.items()}
        self._deg = {}
        self._arity = {}
        for n, ks in components.items():
            for k, d in ks.items():
                self._deg[k] = d
                self._arity[k] = n
        self._unit = unit
        self._swaps = swaps            # (key, j) -> dict, j = adjacent transposition (j,j+1)
        self._comp = compositions      # (a, i, b) -> dict

    def basis(self, n):
        return list(self._basis.get(n, []))

    def arity(self, key):
        return self._arity[key]

    def degree(self, key):
        return self._deg[key]

    def act(self, key, s):
        v = {key: 1}
        for j in _adjacent_word(s):
            out: dict = {}
            for k, x in v.items():
                _add(out, self._swaps.get((k, j), {}), x)
            v = out
        return v

    def compose(self, a, i, b):
        return dict(self._comp.get((a, i, b), {}))

    @property
    def unit(self):
        return self._unit

    def parse(self, label):
        if label in self._deg:
            return label
        raise AlgebraError(f"{label!r} is not a basis element of {self.name}")


def _adjacent_word(s: perms.Perm) -> list[int]:
    """Indices j such that s = s_{j_1} s_{j_2} ... (right action applies j_1 first)."""
    # bubble sort s into identity, recording swaps of adjacent positions
    arr = list(s)
    word = []
    n = len(arr)
    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                word.append(j)
                changed = True
    # arr_final = s ∘ t_1 ∘ ... ∘ t_m = id, so s = t_m ∘ ... ∘ t_1
    # p·s = p·(t_m ... t_1) = (((p·t_m)·...)·t_1)
    return list(reversed(word))


# ---------------------------------------------------------------------------
# presets

def preset_operad(name: str, max_arity: int = 5, field: Field = QQ) -> Operad:
    if max_arity < 1:
        raise AlgebraError("max_arity must be at least 1")
    meta = {"sigma_split": True, "field": field.name}
    if name == "Com":
        if field.characteristic:
            meta["sigma_split"] = False
            meta["warning"] = "not Σ-split in positive characteristic"
        return ComOperad(max_arity, 0, meta)
    if name == "Ass":
        meta["binary_product"] = "m12"
        return AssOperad(max_arity, 0, meta)
    if name == "Lie":
        if field.characteristic:
            meta["sigma_split"] = False
            meta["warning"] = "not Σ-split in positive characteristic"
        return LieOperad(max_arity, 0, meta)
    if name == "Unit":
        return UnitOperad(max_arity, 0, meta)
    raise AlgebraError(f"unknown operad preset {name!r}")


def operadic_desuspension(P: Operad) -> Operad:
    if isinstance(P, UnitOperad):
        return P
    return Desuspension(P)


# ---------------------------------------------------------------------------
# axioms

def _eq(u: dict, v: dict) -> bool:
    d = dict(u)
    vec_add(d, v, -1)
    return not d


def check_axioms(x) -> list[str]:
    if isinstance(x, Cooperad):
        return check_cooperad_axioms(x)
    return check_operad_axioms(x)


def check_operad_axioms(P: Operad, upto: int | None = None) -> list[str]:
    """Exhaustive check of the operad laws through arity ``upto``."""
    N = upto or P.max_arity
    bad: list[str] = []
    L = P.label
    B = {n: P.basis(n) for n in range(1, N + 1)}
    for n, ks in B.items():
        for k in ks:
            if P.degree(k) < P.ell * (n - 1):
                bad.append(f"degree bound: {L(k)} has degree {P.degree(k)} < {P.ell * (n - 1)}")
        for j in range(n - 1):
            t = perms.adjacent(n, j)
            for k in ks:
                if not _eq(P.act_vec(P.act(k, t), t), {k: 1}):
                    bad.append(f"Σ_{n} relation s_{j}^2 = 1 fails on {L(k)}")
            if j + 1 < n - 1:
                t2 = perms.adjacent(n, j + 1)
                for k in ks:
                    v = {k: 1}
                    for _ in range(3):
                        v = P.act_vec(P.act_vec(v, t), t2)
                    if not _eq(v, {k: 1}):
                        bad.append(f"Σ_{n} braid relation fails on {L(k)}")
    u = P.unit
    for n, ks in B.items():
        for k in ks:
            if not _eq(P.compose(u, 0, k), {k: 1}):
                bad.append(f"left unit fails on {L(k)}")
            for i in range(n):
                if not _eq(P.compose(k, i, u), {k: 1}):
                    bad.append(f"right unit fails on {L(k)} at slot {i}")
    for ka in range(2, N + 1):
        for kb in range(2, N + 2 - ka):
            for a in B[ka]:
                for b in B[kb]:
                    for i in range(ka):
                        ab = P.compose(a, i, b)
                        for j in range(ka - 1):
                            s = perms.adjacent(ka, j)
                            lhs = P.compose_vec(P.act(a, s), i, {b: 1})
                            rhs = P.act_vec(P.compose(a, s[i], b), perms.block_insert(s, i, kb))
                            if not _eq(lhs, rhs):
                                bad.append(f"equivariance fails: ({L(a)}·s{j}) ∘_{i} {L(b)}")
                        for j in range(kb - 1):
                            t = perms.adjacent(kb, j)
                            lhs = P.compose_vec({a: 1}, i, P.act(b, t))
                            rhs = P.act_vec(ab, perms.block_insert(perms.identity(ka), i, kb, t))
                            if not _eq(lhs, rhs):
                                bad.append(f"equivariance fails: {L(a)} ∘_{i} ({L(b)}·s{j})")
                        for kc in range(2, N + 3 - ka - kb):
                            for c in B[kc]:
                                for j in range(kb):
                                    lhs = P.compose_vec(ab, i + j, {c: 1})
                                    rhs = P.compose_vec({a: 1}, i, P.compose(b, j, c))
                                    if not _eq(lhs, rhs):
                                        bad.append(f"associativity fails on ({L(a)}, {L(b)}, {L(c)}) at ({i},{j})")
                                for j in range(i + 1, ka):
                                    lhs = P.compose_vec(ab, j + kb - 1, {c: 1})
                                    sg = -1 if (P.degree(b) * P.degree(c)) % 2 else 1
                                    rhs = P.compose_vec(P.compose(a, j, c), i, {b: 1})
                                    if not _eq(lhs, vec_scale(rhs, sg)):
                                        bad.append(f"associativity fails on ({L(a)}, {L(b)}, {L(c)}) at ({i},{j})")
    return bad


# ---------------------------------------------------------------------------
# cooperads

class Cooperad:
    """Linear dual of an operad: same basis keys, dual action and decomposition.

    ``weights`` may override the default weight grading arity - 1.
    """

    def __init__(self, operad: Operad, name: str | None = None, max_arity: int | None = None,
                 weights: dict | None = None, ell: int | None = None):
        self._ell = ell
        self.operad = operad
        self.name = name or f"{operad.name}^c"
        self.family = operad.family
        self.shift = operad.shift
        self.max_arity = max_arity or operad.max_arity
        self.weights = dict(weights or {})
        self.metadata = dict(operad.metadata)
        self._inf: dict = {}

    def basis(self, n):
        return self.operad.basis(n)

    def arity(self, key):
        return self.operad.arity(key)

    def degree(self, key):
        return -self.operad.degree(key)

    def weight(self, key):
        return self.weights.get(key, self.arity(key) - 1)

    @property
    def coaugmentation(self):
        return self.operad.unit

    def coideal(self, n):
        return [k for k in self.basis(n) if k != self.coaugmentation]

    def label(self, key):
        return self.operad.label(key)

    def parse(self, label):
        return self.operad.parse(label)

    @property
    def ell(self):
        """Largest slope with the coideal of arity n in degree >= ell(n-1)+1."""
        if self._ell is not None:
            return self._ell
        best = None
        for n in range(2, self.max_arity + 1):
            for k in self.basis(n):
                bound = (self.degree(k) - 1) // (n - 1)
                best = bound if best is None else min(best, bound)
        return best if best is not None else 0

    def act(self, key, s) -> dict:
        """Contragredient action: <c·s, p·s> = <c, p>."""
        fam = self.family
        if fam in ("Ass", "Com", "Unit"):
            # signed permutation matrices are orthogonal
            return self.operad.act(key, s)
        sinv = perms.inverse(s)
        n = self.arity(key)
        out = {}
        for other in self.basis(n):
            c = self.operad.act(other, sinv).get(key, 0)
            if c:
                out[other] = c
        return out

    def component(self, n):
        return GradedBasis.of((self.label(k), self.degree(k), self.weight(k)) for k in self.basis(n))

    def dims(self, upto=None):
        upto = upto or self.max_arity
        return tuple(len(self.basis(n)) for n in range(1, upto + 1))

    def infinitesimal(self, key) -> list[tuple]:
        """Terms (a, i, b, perm, coeff) with key ↦ Σ coeff (a ∘_i b)·perm, dual form.

        ``perm`` is a pointed shuffle; arities of a and b are at least 2.
        """
        if key in self._inf:
            return self._inf[key]
        n = self.arity(key)
        P = self.operad
        table: dict = {k: [] for k in self.basis(n)}
        for l in range(2, n):
            k = n - l + 1
            for S, i, sh in perms.pointed_shuffles(n, l):
                for a in P.basis(k):
                    for b in P.basis(l):
                        v = P.act_vec(P.compose(a, i, b), sh)
                        for c, x in v.items():
                            if x:
                                table[c].append((a, i, b, sh, x))
        self._inf.update(table)
        return self._inf[key]

    def __repr__(self):
        return f"<Cooperad {self.name}>"


def linear_dual_cooperad(P: Operad, max_arity: int | None = None) -> Cooperad:
    return Cooperad(P, max_arity=max_arity or P.max_arity)


def check_cooperad_axioms(C: Cooperad) -> list[str]:
    bad = [f"dual operad: {m}" for m in check_operad_axioms(C.operad, C.max_arity)]
    for n in range(1, C.max_arity + 1):
        for k in C.basis(n):
            w = C.weight(k)
            if w == 0 and k != C.coaugmentation:
                bad.append(f"connected weight: {C.label(k)} has weight 0 but is not the counit")
            if k == C.coaugmentation and w != 0:
                bad.append(f"connected weight: counit {C.label(k)} has weight {w}")
            if k != C.coaugmentation and C.degree(k) < C.ell * (n - 1) + 1:
                bad.append(f"degree bound: {C.label(k)} below {C.ell * (n - 1) + 1}")
    return bad


# ---------------------------------------------------------------------------
# maps

class OperadMap:
    """Arity-wise degree-0 map; ``image(key)`` returns a target vector."""

    def __init__(self, source: Operad, target: Operad, image: Callable[[Key], dict], name="f"):
        self.source, self.target, self._image, self.name = source, target, image, name

    def image(self, key) -> dict:
        return self._image(key)

    def image_vec(self, v: dict) -> dict:
        out: dict = {}
        for k, x in v.items():
            _add(out, self.image(k), x)
        return out

    def then(self, g: "OperadMap") -> "OperadMap":
        if g.source is not self.target:
            raise AlgebraError("operad maps do not compose")
        return OperadMap(self.source, g.target, lambda k: g.image_vec(self.image(k)),
                         f"{g.name}∘{self.name}")

    def check(self, upto=None) -> list[str]:
        N = upto or min(self.source.max_arity, self.target.max_arity)
        S, T = self.source, self.target
        bad = []
        if not _eq(self.image(S.unit), {T.unit: 1}):
            bad.append("unit not preserved")
        for n in range(1, N + 1):
            for a in S.basis(n):
                for k, _ in self.image(a).items():
                    if T.degree(k) != S.degree(a):
                        bad.append(f"degree not preserved on {S.label(a)}")
                for j in range(n - 1):
                    s = perms.adjacent(n, j)
                    if not _eq(T.act_vec(self.image(a), s), self.image_vec(S.act(a, s))):
                        bad.append(f"not equivariant on {S.label(a)}")
        for ka in range(2, N + 1):
            for kb in range(2, N + 2 - ka):
                for a in S.basis(ka):
                    for b in S.basis(kb):
                        for i in range(ka):
                            lhs = self.image_vec(S.compose(a, i, b))
                            rhs = T.compose_vec(self.image(a), i, self.image(b))
                            if not _eq(lhs, rhs):
                                bad.append(f"composition not preserved on {S.label(a)} ∘_{i} {S.label(b)}")
        return bad


def identity_operad_map(P: Operad) -> OperadMap:
    return OperadMap(P, P, lambda k: {k: 1}, "id")


def _desusp_depth(P):
    base, d = P, 0
    while isinstance(base, Desuspension):
        base, d = base.base, d + 1
    return base, d


def preset_operad_map(kind: str, source: Operad, target: Operad) -> OperadMap:
    """``abelianization`` (Ass→Com), ``inclusion`` (Lie→Ass), ``augmentation`` (→Unit)."""
    sb, sd = _desusp_depth(source)
    tb, td = _desusp_depth(target)
    if kind == "augmentation":
        if not isinstance(target, UnitOperad):
            raise AlgebraError("augmentation targets the Unit operad")
        return OperadMap(source, target,
                         lambda k: {"id": 1} if source.arity(k) == 1 else {}, "aug")
    if sd != td:
        raise AlgebraError("source and target must be desuspended equally")
    if kind == "abelianization" and isinstance(sb, AssOperad) and isinstance(tb, ComOperad):
        return OperadMap(source, target, lambda k: {len(k): 1}, "ab")
    if kind == "inclusion" and isinstance(sb, LieOperad) and isinstance(tb, AssOperad):
        return OperadMap(source, target, lambda k: sb.expand(k), "incl")
    if kind == "identity" and source is target:
        return identity_operad_map(source)
    raise AlgebraError(f"no preset operad map {kind!r} from {source.name} to {target.name}")


class CooperadMap:
    def __init__(self, source: Cooperad, target: Cooperad, image: Callable[[Key], dict], name="f"):
        self.source, self.target, self._image, self.name = source, target, image, name

    def image(self, key) -> dict:
        return self._image(key)

    def image_vec(self, v):
        out: dict = {}
        for k, x in v.items():
            _add(out, self.image(k), x)
        return out

    def then(self, g: "CooperadMap") -> "CooperadMap":
        return CooperadMap(self.source, g.target, lambda k: g.image_vec(self.image(k)),
                           f"{g.name}∘{self.name}")

    def check(self, upto=None) -> list[str]:
        N = upto or min(self.source.max_arity, self.target.max_arity)
        S, T = self.source, self.target
        bad = []
        for n in range(1, N + 1):
            for c in S.basis(n):
                img = self.image(c)
                for j in range(n - 1):
                    s = perms.adjacent(n, j)
                    lhs = {}
                    for k, x in img.items():
                        _add(lhs, T.act(k, s), x)
                    if not _eq(lhs, self.image_vec(S.act(c, s))):
                        bad.append(f"not equivariant on {S.label(c)}")
        return bad


def dual_map(f: OperadMap) -> CooperadMap:
    """Transpose of f: Q → R as a map R^c → Q^c (duals built on the fly)."""
    Qc = Cooperad(f.source)
    Rc = Cooperad(f.target)
    return dual_cooperad_map(f, Rc, Qc)


def dual_cooperad_map(f: OperadMap, source: Cooperad, target: Cooperad) -> CooperadMap:
    if source.operad is not f.target or target.operad is not f.source:
        raise AlgebraError("dual map needs the duals of f's target and source")

    def image(c):
        out = {}
        for q in f.source.basis(source.arity(c)):
            x = f.image(q).get(c, 0)
            if x:
                out[q] = x
        return out

    return CooperadMap(source, target, image, f"{f.name}^c")


def identity_cooperad_map(C: Cooperad) -> CooperadMap:
    return CooperadMap(C, C, lambda k: {k: 1}, "id")


def free_algebra_basis(P: Operad, generators: GradedBasis, max_weight: int,
                       degree_window: tuple[int, int] | None = None) -> GradedBasis:
    from .freealg import free_algebra_model
    return free_algebra_model(P, generators).graded_basis(max_weight, degree_window)
