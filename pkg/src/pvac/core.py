"""Exact scalars, parities, permutations, and sign bookkeeping.

Everything downstream reduces its sign conventions to the three primitives
here: Koszul signs of permutations acting on graded tensors, sorting signs
of odd index sets, and their complements.  All arithmetic is exact.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Scalar = Fraction
Parity = int  # 0 even, 1 odd
Perm = tuple[int, ...]  # perm[i] = image of position i, 0-based
IndexSet = tuple[int, ...]  # sorted ascending, elements in 1..N

ZERO = Fraction(0)
ONE = Fraction(1)


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose_perm(a: Perm, b: Perm) -> Perm:
    """a after b: (a∘b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(b)))


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_sign(p: Perm) -> int:
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def all_perms(n: int):
    from itertools import permutations

    return (tuple(p) for p in permutations(range(n)))


def permute_items(p: Perm, items: Sequence):
    """Place the item in slot i into slot p(i)."""
    out = [None] * len(items)
    for i, it in enumerate(items):
        out[p[i]] = it
    return tuple(out)


def koszul_sign(p: Perm, parities: Sequence[Parity]) -> int:
    """Sign of permuting graded tensor factors by p.

    The factor pair (i, j) with i < j and p(i) > p(j) crosses, contributing
    (-1)^{parity_i * parity_j}.
    """
    if len(p) != len(parities):
        raise ValueError("permutation/parity length mismatch")
    sign = 1
    for i in range(len(p)):
        if not parities[i]:
            continue
        for j in range(i + 1, len(p)):
            if parities[j] and p[i] > p[j]:
                sign = -sign
    return sign


def sort_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting distinct integers ascending; 0 on repeats."""
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] == seq[j]:
                return 0
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def set_sign(I: Iterable[int], J: Iterable[int]) -> int:
    """Sign with which an ascending odd product over I absorbs one over J.

    Zero when the sets overlap, otherwise the sorting sign of I followed by J.
    """
    I = tuple(I)
    J = tuple(J)
    if set(I) & set(J):
        return 0
    return sort_sign(I + J)


def complement_sign(I: Iterable[int], N: int) -> int:
    I = tuple(I)
    J = tuple(i for i in range(1, N + 1) if i not in I)
    return set_sign(I, J)


def index_subsets(N: int):
    """All subsets of {1..N} as ascending tuples, by size then lexicographic."""
    for r in range(N + 1):
        yield from combinations(range(1, N + 1), r)


def merge_sign(I: Sequence[int], J: Sequence[int]) -> tuple[IndexSet, int]:
    """Merge two ascending index tuples, tracking the anticommutation sign.

    Returns ((), 0) - style zero via sign 0 - when the tuples share an element.
    """
    s = set_sign(I, J)
    if s == 0:
        return (), 0
    return tuple(sorted(I + J)), s
