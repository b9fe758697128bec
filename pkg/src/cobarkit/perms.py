"""Permutations in one-line notation (0-based) and Koszul signs.

A permutation ``s`` acts on a sequence by putting entry ``i`` at position
``s[i]``; with graded entries this picks up the Koszul sign of the swaps.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


def compose(s: Perm, t: Perm) -> Perm:
    """(s∘t)(i) = s(t(i))."""
    return tuple(s[t[i]] for i in range(len(t)))


def sign(s: Perm) -> int:
    n, seen, parity = len(s), [False] * len(s), 0
    for i in range(n):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = s[j]
                length += 1
            parity += length - 1
    return -1 if parity % 2 else 1


def koszul_sign(s: Perm, degrees: Sequence[int]) -> int:
    """Sign of moving item i (of degree degrees[i]) to position s[i]."""
    odd = 0
    n = len(s)
    for i in range(n):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if s[i] > s[j] and degrees[j] % 2:
                odd += 1
    return -1 if odd % 2 else 1


def act(s: Perm, items: Sequence, degrees: Sequence[int]) -> tuple[int, tuple]:
    """Return (sign, s·items)."""
    out = [None] * len(items)
    for i, x in enumerate(items):
        out[s[i]] = x
    return koszul_sign(s, degrees), tuple(out)


def sorting_perm(keys: Sequence) -> Perm:
    """Permutation moving ``keys`` into sorted (stable) order."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    return inverse(tuple(order))


def adjacent(n: int, j: int) -> Perm:
    """The transposition (j, j+1)."""
    s = list(range(n))
    s[j], s[j + 1] = j + 1, j
    return tuple(s)


def all_perms(n: int):
    return permutations(range(n))


def block_insert(s: Perm, i: int, l: int, t: Perm | None = None) -> Perm:
    """Permutation of k+l-1 letters induced by ``s`` with slot ``i`` blown up
    into a block of ``l`` letters permuted internally by ``t``."""
    k = len(s)
    t = t or identity(l)
    # position where the block starts after applying s
    start = {}
    pos = 0
    inv = inverse(s)
    for target in range(k):
        src = inv[target]
        start[src] = pos
        pos += l if src == i else 1
    out = []
    for src in range(k):
        if src == i:
            out.extend(start[i] + t[m] for m in range(l))
        else:
            out.append(start[src])
    return tuple(out)


def pointed_shuffles(n: int, l: int):
    """Yield (S, i, perm) for every l-subset S of range(n).

    ``perm`` sends input j to its position in rest[:i] + S + rest[i:], where
    ``rest`` lists the inputs outside S in order and ``i`` counts the rest
    inputs smaller than min(S).
    """
    for S in combinations(range(n), l):
        rest = [j for j in range(n) if j not in S]
        i = sum(1 for j in rest if j < S[0])
        arranged = rest[:i] + list(S) + rest[i:]
        perm = [0] * n
        for pos, j in enumerate(arranged):
            perm[j] = pos
        yield S, i, tuple(perm)
