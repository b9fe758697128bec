"""Brute-force references used to freeze expected values."""

from fractions import Fraction
from itertools import product
from math import factorial


def f2_span_contains(target: set, gens: list[set]) -> bool:
    """Enumerate all 2^k subsets; vectors over F_2 are sets of coordinates."""
    for mask in product((0, 1), repeat=len(gens)):
        acc = set()
        for bit, g in zip(mask, gens):
            if bit:
                acc ^= g
        if acc == target:
            return True
    return False


def dense_rank(rows: list[list]) -> int:
    """Plain Gaussian elimination over Q on a dense matrix."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def lie_dimension(n: int) -> int:
    return factorial(n - 1)


def ass_dimension(n: int) -> int:
    return factorial(n)


def cofree_ass_count(num_gens: int, max_weight: int) -> int:
    return sum(num_gens ** n for n in range(1, max_weight + 1))


def cofree_com_count(degrees: dict, max_weight: int) -> int:
    """Monomials of length 1..max_weight with no repeated odd letter."""
    labs = sorted(degrees)
    count = 0
    for n in range(1, max_weight + 1):
        for exps in product(range(n + 1), repeat=len(labs)):
            if sum(exps) != n:
                continue
            if any(e > 1 and degrees[g] % 2 for g, e in zip(labs, exps)):
                continue
            count += 1
    return count


def _trees(leaves: tuple):
    if len(leaves) == 1:
        yield leaves[0]
        return
    for k in range(1, len(leaves)):
        for left in _trees(leaves[:k]):
            for right in _trees(leaves[k:]):
                yield (left, right)


def _expand(tree) -> dict:
    if not isinstance(tree, tuple):
        return {(tree,): 1}
    a, b = _expand(tree[0]), _expand(tree[1])
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return out


def lie_dimension_by_brackets(n: int) -> int:
    """Rank of all bracket monomials on 1..n inside the free associative algebra."""
    from itertools import permutations
    words = list(permutations(range(n)))
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for perm in permutations(range(n)):
        for t in _trees(perm):
            v = _expand(t)
            row = [0] * len(words)
            for w, x in v.items():
                row[index[w]] += x
            if any(row):
                rows.append(row)
    return dense_rank(rows) if rows else 0



class ClassicalCobar:
    """T(s^-1 C) on a coalgebra with binary reduced coproduct, dense and naive.

    ``degs`` are degrees in C, ``d`` the differential {g: {h: c}}, ``delta``
    the reduced coproduct {g: {(a, b): c}}.  Shares no code with the package.
    """

    def __init__(self, degs: dict, d: dict, delta: dict):
        self.degs, self.d, self.delta = degs, d, delta
        self.gens = sorted(degs)
        self.sd = {g: degs[g] - 1 for g in self.gens}

    def words(self, N):
        return [w for n in range(1, N + 1) for w in product(self.gens, repeat=n)]

    def degree(self, w):
        # operadic desuspension places a word one degree above the classical s^-1 grading
        return sum(self.sd[g] for g in w) + 1

    def _d_gen(self, g):
        out = {}
        for h, c in self.d.get(g, {}).items():
            out[(h,)] = out.get((h,), 0) - c
        for (a, b), c in self.delta.get(g, {}).items():
            s = -1 if self.degs[a] % 2 else 1
            out[(a, b)] = out.get((a, b), 0) + s * c
        return out

    def d_word(self, w, N=None):
        out = {}
        pre = 0
        for i, g in enumerate(w):
            s = -1 if pre % 2 else 1
            for u, c in self._d_gen(g).items():
                k = w[:i] + u + w[i + 1:]
                out[k] = out.get(k, 0) + s * c
            pre += self.sd[g]
        return {k: c for k, c in out.items() if c and (N is None or len(k) <= N)}

    def betti(self, N, window):
        words = self.words(N)

        def rank_between(k):
            src = [w for w in words if self.degree(w) == k]
            tgt = [w for w in words if self.degree(w) == k - 1]
            if not src or not tgt:
                return 0
            idx = {w: i for i, w in enumerate(tgt)}
            rows = []
            for w in src:
                row = [0] * len(tgt)
                for u, c in self.d_word(w, N).items():
                    row[idx[u]] += c
                rows.append(row)
            return dense_rank(rows)

        lo, hi = window
        return {k: sum(1 for w in words if self.degree(w) == k) - rank_between(k) - rank_between(k + 1)
                for k in range(lo, hi + 1)}

    def boundary_contains(self, target: dict, N: int) -> bool:
        """Is ``target`` the boundary of a combination of words of length <= N?"""
        deg = self.degree(next(iter(target)))
        images = [self.d_word(w) for w in self.words(N) if self.degree(w) == deg + 1]
        keys = sorted({k for v in images for k in v} | set(target))
        rows = [[v.get(k, 0) for k in keys] for v in images]
        base = dense_rank(rows) if rows else 0
        return dense_rank(rows + [[target.get(k, 0) for k in keys]]) == base


def tor_over_y(dim: int, y_matrix: list[list], weights: list[int] | None = None,
               cap: int | None = None) -> dict:
    """Tor^{k[y]}(k, M) from the Koszul complex 0 -> M -y-> M -> 0.

    ``y_matrix[i][j]`` is the coefficient of basis vector i in y·e_j.  With
    ``cap`` only total weight <= cap is kept: the degree-1 copy is shifted
    by weight 1, and images leaving the cap are dropped.
    """
    weights = weights or [0] * dim
    top = [i for i in range(dim) if cap is None or weights[i] + 1 <= cap]
    bottom = [i for i in range(dim) if cap is None or weights[i] <= cap]
    rows = [[y_matrix[i][j] for i in bottom] for j in top]
    r = dense_rank(rows) if rows and bottom else 0
    return {0: len(bottom) - r, 1: len(top) - r}


def truncated_y_matrix(N: int) -> list[list]:
    """y on y·k[y]/(y^{N+1}) in the basis y, y^2, ..., y^N."""
    m = [[0] * N for _ in range(N)]
    for j in range(N - 1):
        m[j + 1][j] = 1
    return m
