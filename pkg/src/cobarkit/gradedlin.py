"""Exact scalars, graded bases, sparse linear maps and homology.

Everything here is exact: rationals are :class:`fractions.Fraction`, prime
field elements are :class:`Mod`.  Vectors are plain dicts mapping a hashable
key to a nonzero scalar; linear maps store their columns sparsely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence


class AlgebraError(ValueError):
    """Raised when an algebraic object violates one of its invariants."""


class WindowError(AlgebraError):
    """Requested degrees lie outside the certified window."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Mod:
    """Residue class modulo a prime."""

    __slots__ = ("r", "p")

    def __init__(self, r: int, p: int):
        self.p = p
        self.r = r % p

    def _lift(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise AlgebraError(f"mixing F_{self.p} and F_{other.p}")
            return other.r
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Mod(self.r + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Mod(self.r - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Mod(o - self.r, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Mod(self.r * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.r, self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Mod(self.r * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return (self.r - o) % self.p == 0

    def __hash__(self):
        return hash((self.r, self.p))

    def __bool__(self):
        return self.r != 0

    def __repr__(self):
        return f"{self.r} mod {self.p}"


@dataclass(frozen=True)
class Field:
    """The ground field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not _is_prime(c):
            raise AlgebraError(f"characteristic {c} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Accept ``Q``, ``Fp:5``, ``F5`` or ``GF(5)``."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?:Fp:|F|GF\()(\d+)\)?", t)
        if not m:
            raise AlgebraError(f"unknown field descriptor {text!r}")
        return cls(int(m.group(1)))

    @property
    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"

    def __call__(self, value) -> Fraction | Mod:
        if self.characteristic == 0:
            if isinstance(value, Mod):
                raise AlgebraError("cannot coerce a residue into Q")
            return Fraction(value)
        if isinstance(value, Mod):
            if value.p != self.characteristic:
                raise AlgebraError("residue from a different prime field")
            return value
        value = Fraction(value)
        if value.denominator % self.characteristic == 0:
            raise AlgebraError(f"{value} has no image in F_{self.characteristic}")
        return Mod(value.numerator * pow(value.denominator, -1, self.characteristic),
                   self.characteristic)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse_scalar(self, text: str):
        """Parse ``"a/b"``, ``"a"`` or ``"r mod p"``."""
        t = str(text).strip()
        m = re.fullmatch(r"(-?\d+)\s+mod\s+(\d+)", t)
        if m:
            p = int(m.group(2))
            if p != self.characteristic:
                raise AlgebraError(f"scalar {t!r} does not live in {self.name}")
            return Mod(int(m.group(1)), p)
        return self(Fraction(t))

    def format(self, a) -> str:
        if isinstance(a, Mod):
            return f"{a.r} mod {a.p}"
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


QQ = Field(0)


# ---------------------------------------------------------------------------
# sparse vectors

Vector = dict


def vec_add(acc: dict, other: Mapping, scale=1) -> dict:
    """In place ``acc += scale * other``; drops zeros."""
    for k, v in other.items():
        s = acc.get(k, 0) + scale * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def vec_scale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items() if c * x}


def _as_dict(v) -> dict:
    if isinstance(v, Mapping):
        return {k: x for k, x in v.items() if x}
    return {i: x for i, x in enumerate(v) if x}


def _inverse(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


class Echelon:
    """Incrementally built reduced echelon basis of a span.

    The pivot of a vector is its smallest key under ``order`` (default: the
    key itself), so results do not depend on insertion order of dict keys.
    """

    def __init__(self, order=None):
        self.order = order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}

    def __len__(self):
        return len(self.rows)

    def _pivot(self, v):
        return min(v, key=self.order)

    def reduce(self, v: Mapping) -> dict:
        # rows are mutually reduced, so one pass over the pivots suffices
        v = dict(v)
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if c:
                vec_add(v, self.rows[p], -c)
        return v

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; return True iff it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = self._pivot(r)
        r = vec_scale(r, _inverse(r[p]))
        for q, row in self.rows.items():
            if p in row:
                vec_add(row, r, -row[p])
        self.rows[p] = r
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)


def span_rank(vectors: Iterable[Mapping], order=None) -> int:
    e = Echelon(order)
    for v in vectors:
        e.add(v)
    return len(e)


def span_membership(target, generators: Sequence, order=None) -> bool:
    """Is ``target`` an exact linear combination of ``generators``?

    Vectors may be dicts or equal-length sequences.
    """
    if not isinstance(target, Mapping):
        n = len(target)
        for g in generators:
            if isinstance(g, Mapping) or len(g) != n:
                raise AlgebraError("dimension mismatch in span_membership")
    elif any(not isinstance(g, Mapping) for g in generators):
        raise AlgebraError("mixed vector representations in span_membership")
    e = Echelon(order)
    for g in generators:
        e.add(_as_dict(g))
    return e.contains(_as_dict(target))


def kernel_basis(columns: Sequence[Mapping]) -> list[dict]:
    """Basis of {c : sum_j c_j columns[j] = 0}, as dicts over column indices."""
    e = Echelon()
    kernel = []
    for j, col in enumerate(columns):
        v = {(0, k): x for k, x in col.items()}
        v[(1, j)] = 1
        r = e.reduce(v)
        if all(k[0] == 1 for k in r):
            kernel.append({k[1]: x for k, x in r.items()})
        e.add(v)
    return kernel


# ---------------------------------------------------------------------------
# graded bases and maps

@dataclass(frozen=True)
class GradedBasis:
    """Finite ordered basis of (label, degree, weight) triples."""

    elements: tuple[tuple[str, int, int], ...]
    min_degree: int | None = None

    def __post_init__(self):
        labels = [e[0] for e in self.elements]
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise AlgebraError(f"duplicate basis labels {dup}")
        for lab, deg, wt in self.elements:
            if wt < 0:
                raise AlgebraError(f"negative weight on {lab}")
        if self.min_degree is not None:
            low = [e for e in self.elements if e[1] < self.min_degree]
            if low:
                raise AlgebraError(f"{low[0][0]} lies below the stated minimum degree")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @classmethod
    def of(cls, items: Iterable, min_degree=None) -> "GradedBasis":
        els = []
        for it in items:
            if len(it) == 2:
                els.append((str(it[0]), int(it[1]), 0))
            else:
                els.append((str(it[0]), int(it[1]), int(it[2])))
        return cls(tuple(els), min_degree)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise AlgebraError(f"unknown basis label {label!r}") from None

    def __contains__(self, label):
        return label in self._index

    @property
    def labels(self) -> list[str]:
        return [e[0] for e in self.elements]

    def degree(self, i: int) -> int:
        return self.elements[i][1]

    def weight(self, i: int) -> int:
        return self.elements[i][2]

    def indices_in_degree(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.elements) if e[1] == d]

    def degrees(self) -> list[int]:
        return sorted({e[1] for e in self.elements})

    def permuted(self, perm: Sequence[int]) -> "GradedBasis":
        return GradedBasis(tuple(self.elements[i] for i in perm), self.min_degree)


@dataclass(frozen=True)
class LinearMap:
    """Sparse linear map between graded bases, homogeneous of ``degree``."""

    source: GradedBasis
    target: GradedBasis
    degree: int
    entries: Mapping[tuple[int, int], object] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), x in self.entries.items():
            if not x:
                continue
            if not (0 <= r < len(self.target) and 0 <= c < len(self.source)):
                raise AlgebraError(f"entry ({r},{c}) out of range")
            if self.target.degree(r) - self.source.degree(c) != self.degree:
                raise AlgebraError(
                    f"entry {self.source.elements[c][0]} -> {self.target.elements[r][0]}"
                    f" breaks degree {self.degree}")
            clean[(r, c)] = x
        object.__setattr__(self, "entries", clean)

    def column(self, c: int) -> dict[int, object]:
        return {r: x for (r, cc), x in self.entries.items() if cc == c}

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict] = [{} for _ in range(len(self.source))]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def apply(self, v: Mapping[int, object]) -> dict[int, object]:
        cols = self.columns()
        out: dict = {}
        for c, x in v.items():
            vec_add(out, cols[c], x)
        return out

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise AlgebraError("composition of non-matching maps")
        cols = self.columns()
        out: dict = {}
        for (r, c), x in other.entries.items():
            for r2, y in cols[r].items():
                k = (r2, c)
                out[k] = out.get(k, 0) + y * x
        return LinearMap(other.source, self.target, self.degree + other.degree, out)

    def is_zero(self) -> bool:
        return not self.entries

    def restricted(self, cols: Sequence[int]) -> list[dict]:
        all_cols = self.columns()
        return [all_cols[c] for c in cols]


def zero_map(source: GradedBasis, target: GradedBasis, degree: int) -> LinearMap:
    return LinearMap(source, target, degree, {})


def identity_map(b: GradedBasis) -> LinearMap:
    return LinearMap(b, b, 0, {(i, i): 1 for i in range(len(b))})


def rank(f: LinearMap | Sequence[Mapping]) -> int:
    """Exact rank by echelon reduction over the scalars' field."""
    cols = f.columns() if isinstance(f, LinearMap) else list(f)
    return span_rank(cols)


# ---------------------------------------------------------------------------
# chain complexes

@dataclass(frozen=True)
class ChainComplexSlice:
    """A finite piece of a chain complex, complete on degrees ``window``."""

    basis: GradedBasis
    differential: LinearMap
    window: tuple[int, int]

    def __post_init__(self):
        d = self.differential
        if d.source != self.basis or d.target != self.basis or d.degree != -1:
            raise AlgebraError("differential must be a degree -1 endomorphism of the basis")
        lo, hi = self.window
        sq = d.compose(d)
        for (r, c), x in sq.entries.items():
            if lo + 2 <= self.basis.degree(c) <= hi:
                lab = self.basis.elements[c][0]
                raise AlgebraError(f"d∘d != 0 on {lab}")

    @classmethod
    def from_basis(cls, basis: GradedBasis, entries: Mapping, window=None):
        if window is None:
            degs = basis.degrees() or [0]
            window = (min(degs) - 1, max(degs) + 1)
        return cls(basis, LinearMap(basis, basis, -1, entries), tuple(window))

    def dsquared_zero(self) -> bool:
        return self.differential.compose(self.differential).is_zero()

    def preserves_weight(self) -> bool:
        b = self.basis
        return all(b.weight(r) == b.weight(c) for (r, c) in self.differential.entries)


@dataclass(frozen=True)
class HomologyReport:
    window: tuple[int, int]
    betti: dict[int, int]
    kernel_dims: dict[int, int]
    image_ranks: dict[int, int]
    betti_by_weight: dict[tuple[int, int], int] | None = None

    def total(self) -> int:
        return sum(self.betti.values())

    def concentrated_in(self) -> list[int]:
        return [d for d, b in sorted(self.betti.items()) if b]


def _degree_rank(cols, basis, deg):
    idx = basis.indices_in_degree(deg)
    return idx, span_rank([cols[i] for i in idx])


def homology(c: ChainComplexSlice, window: tuple[int, int] | None = None,
             by_weight: bool = False) -> HomologyReport:
    """Betti numbers on ``window`` (default: the certified interior)."""
    lo, hi = c.window
    if window is None:
        window = (lo + 1, hi - 1)
    a, b = window
    if a < lo + 1 or b > hi - 1:
        raise WindowError(f"window {window} not certified by {c.window}")
    cols = c.differential.columns()
    basis = c.basis
    betti, kers, ims = {}, {}, {}
    ranks = {}
    for deg in range(a, b + 2):
        idx, r = _degree_rank(cols, basis, deg)
        ranks[deg] = (len(idx), r)
    for deg in range(a, b + 1):
        dim, r_out = ranks[deg]
        kers[deg] = dim - r_out
        ims[deg] = ranks[deg + 1][1]
        betti[deg] = kers[deg] - ims[deg]
        # rank-nullity self check against an independent kernel computation
        idx = basis.indices_in_degree(deg)
        if len(kernel_basis([cols[i] for i in idx])) != kers[deg]:
            raise AlgebraError("rank-nullity self-check failed")
    per_weight = None
    if by_weight:
        if not c.preserves_weight():
            raise AlgebraError("differential does not preserve weight")
        per_weight = {}
        weights = sorted({e[2] for e in basis})
        for deg in range(a, b + 1):
            for w in weights:
                src = [i for i in basis.indices_in_degree(deg) if basis.weight(i) == w]
                up = [i for i in basis.indices_in_degree(deg + 1) if basis.weight(i) == w]
                k = len(src) - span_rank([cols[i] for i in src])
                per_weight[(deg, w)] = k - span_rank([cols[i] for i in up])
    return HomologyReport((a, b), betti, kers, ims, per_weight)


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplexSlice
    target: ChainComplexSlice
    map: LinearMap

    def __post_init__(self):
        f = self.map
        if f.source != self.source.basis or f.target != self.target.basis or f.degree != 0:
            raise AlgebraError("chain map must be degree 0 between the complexes' bases")
        lhs = self.target.differential.compose(f)
        rhs = f.compose(self.source.differential)
        diff = dict(lhs.entries)
        for k, x in rhs.entries.items():
            s = diff.get(k, 0) - x
            if s:
                diff[k] = s
            else:
                diff.pop(k, None)
        if diff:
            (r, col), _ = next(iter(sorted(diff.items())))
            raise AlgebraError(
                f"not a chain map: fails on {self.source.basis.elements[col][0]}")


def mapping_cone(f: ChainMap) -> ChainComplexSlice:
    """cone(f)_k = source_{k-1} ⊕ target_k, d(s,t) = (-ds, f s + dt)."""
    S, T = f.source.basis, f.target.basis
    els = [("s:" + l, d + 1, w) for l, d, w in S] + [("t:" + l, d, w) for l, d, w in T]
    cone = GradedBasis(tuple(els))
    n = len(S)
    ent = {}
    for (r, c), x in f.source.differential.entries.items():
        ent[(r, c)] = -x
    for (r, c), x in f.map.entries.items():
        ent[(n + r, c)] = x
    for (r, c), x in f.target.differential.entries.items():
        ent[(n + r, n + c)] = x
    lo = max(f.source.window[0] + 1, f.target.window[0])
    hi = min(f.source.window[1] + 1, f.target.window[1])
    return ChainComplexSlice(cone, LinearMap(cone, cone, -1, ent), (lo, hi))


def induced_rank(f: ChainMap, deg: int) -> int:
    """Rank of H_deg(f), computed from cycles of the source and boundaries of the target."""
    S, T = f.source, f.target
    scols = S.differential.columns()
    idx = S.basis.indices_in_degree(deg)
    cycles = kernel_basis([scols[i] for i in idx])
    fcols = f.map.columns()
    images = []
    for z in cycles:
        v: dict = {}
        for j, x in z.items():
            vec_add(v, fcols[idx[j]], x)
        images.append(v)
    tcols = T.differential.columns()
    bounds = [tcols[i] for i in T.basis.indices_in_degree(deg + 1)]
    return span_rank(bounds + images) - span_rank(bounds)


def is_quasi_iso(f: ChainMap, window: tuple[int, int]) -> str:
    """'yes', 'no' or 'window-insufficient' for homology degrees in ``window``."""
    a, b = window
    for cx in (f.source, f.target):
        if cx.window[0] > a - 1 or cx.window[1] < b + 1:
            return "window-insufficient"
    hs = homology(f.source, (a, b))
    ht = homology(f.target, (a, b))
    if hs.betti != ht.betti:
        return "no"
    for deg in range(a, b + 1):
        if induced_rank(f, deg) != ht.betti[deg]:
            return "no"
    return "yes"
