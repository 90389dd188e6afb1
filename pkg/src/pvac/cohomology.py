"""Chain and cochain complexes attached to a Poisson structure presentation.

Everything lives in plain tensor coordinates over the rationals; the sign
bookkeeping of the graded picture is folded into sign-weighted shuffle
relations and Koszul block-reordering rules, so each space is a concrete
quotient or subspace of a tensor power with exact reductions.  The double
complex is stored per block type: a cell holds one multilinear map for every
ascending size profile, its columns restrict to the multiplication complex
and its rows to the bracket complex, and evaluation at canonical lines
matches it with the block-count splitting of the quiver-operation
differential.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import linalg
from .core import Perm, all_perms, invert_perm, perm_sign, permute_items
from .finite_op import (
    Cols,
    FiniteOperation,
    PoissonPresentation,
    Vector,
    bigrade,
    check_poisson,
    cols_add,
    cols_scale,
    fo_add,
    fo_bracket,
    fo_bracket_lines,
    fo_eq,
    fo_scale,
    fo_zero,
    is_sign_invariant,
    mc_from_poisson,
    sgn_symmetrize,
    split_mc,
    tensor_index,
    tensor_tuples,
    zero_cols,
)
from .quiver import (
    LinePartition,
    act_quiver,
    blocks_count,
    line_partitions,
    line_quiver,
    reduce_quiver,
)
from .symgrp import eulerian, shuffles


def vadd(u: Vector, v: Vector) -> Vector:
    return [x + y for x, y in zip(u, v)]


def vscale(c, u: Vector) -> Vector:
    c = Fraction(c)
    return [c * x for x in u]


def vzero(dim: int) -> Vector:
    return [Fraction(0)] * dim


@dataclass
class CommAlgebra:
    dim: int
    product: Cols  # dim^2 columns, column (i,j) = e_i * e_j

    def multiply(self, a: Vector, b: Vector) -> Vector:
        out = vzero(self.dim)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out = vadd(out, vscale(x * y, self.product[i * self.dim + j]))
        return out


@dataclass
class LieAlgebra:
    dim: int
    bracket: Cols

    def brack(self, a: Vector, b: Vector) -> Vector:
        out = vzero(self.dim)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out = vadd(out, vscale(x * y, self.bracket[i * self.dim + j]))
        return out


def check_comm(A: CommAlgebra) -> list[str]:
    """Commutativity and associativity violations on basis triples."""
    out = []
    basis = [[Fraction(i == r) for r in range(A.dim)] for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            if A.multiply(basis[i], basis[j]) != A.multiply(basis[j], basis[i]):
                out.append(f"commutativity at ({i},{j})")
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                lhs = A.multiply(A.multiply(basis[i], basis[j]), basis[k])
                rhs = A.multiply(basis[i], A.multiply(basis[j], basis[k]))
                if lhs != rhs:
                    out.append(f"associativity at ({i},{j},{k})")
    return out


def check_lie(L: LieAlgebra) -> list[str]:
    """Antisymmetry and Jacobi violations on basis triples."""
    out = []
    basis = [[Fraction(i == r) for r in range(L.dim)] for i in range(L.dim)]
    for i in range(L.dim):
        for j in range(L.dim):
            if L.brack(basis[i], basis[j]) != vscale(-1, L.brack(basis[j], basis[i])):
                out.append(f"antisymmetry at ({i},{j})")
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(L.dim):
                s = L.brack(basis[i], L.brack(basis[j], basis[k]))
                s = vadd(s, L.brack(basis[j], L.brack(basis[k], basis[i])))
                s = vadd(s, L.brack(basis[k], L.brack(basis[i], basis[j])))
                if any(s):
                    out.append(f"jacobi at ({i},{j},{k})")
    return out


def comm_part(P: PoissonPresentation) -> CommAlgebra:
    return CommAlgebra(P.dim, P.product)


def lie_part(P: PoissonPresentation) -> LieAlgebra:
    return LieAlgebra(P.dim, P.bracket)


@dataclass
class PoissonModule:
    """A module over both halves, given by structure constants.

    Columns of each action are indexed by (algebra basis, module basis)
    pairs, algebra index major.
    """

    dim: int
    comm_action: Cols
    lie_action: Cols

    def act_comm(self, i: int, m: Vector) -> Vector:
        out = vzero(self.dim)
        for r, x in enumerate(m):
            if x:
                out = vadd(out, vscale(x, self.comm_action[i * self.dim + r]))
        return out

    def act_lie(self, i: int, m: Vector) -> Vector:
        out = vzero(self.dim)
        for r, x in enumerate(m):
            if x:
                out = vadd(out, vscale(x, self.lie_action[i * self.dim + r]))
        return out


def adjoint_module(P: PoissonPresentation) -> PoissonModule:
    return PoissonModule(P.dim, [list(c) for c in P.product], [list(c) for c in P.bracket])


# ---------------------------------------------------------------------------
# chains of the multiplication half


def shuffle_relations(dim: int, n: int) -> list[Vector]:
    """Sign-weighted shuffle sums applied to every basis word of length n."""
    rels: list[Vector] = []
    width = dim**n
    for r in range(1, n):
        shs = shuffles(r, n - r)
        for w in tensor_tuples(dim, n):
            vec = vzero(width)
            for sigma in shs:
                vec[tensor_index(permute_items(sigma, w), dim)] += perm_sign(sigma)
            rels.append(vec)
    return rels


@dataclass
class HarrisonSpace:
    """Degree-n chain space as an exact quotient of the n-th tensor power.

    Words at the free indices represent a basis; every pivot word carries a
    frozen expansion over them.
    """

    dim: int
    degree: int
    free: list[int]
    _pos: dict[int, int]
    _expand: dict[int, Vector]

    @property
    def rank(self) -> int:
        return len(self.free)

    def word_coords(self, w: tuple[int, ...]) -> Vector:
        idx = tensor_index(w, self.dim)
        if idx in self._pos:
            out = vzero(self.rank)
            out[self._pos[idx]] = Fraction(1)
            return out
        return list(self._expand[idx])

    def reduce_vec(self, vec: Vector) -> Vector:
        out = vzero(self.rank)
        for idx, c in enumerate(vec):
            if not c:
                continue
            if idx in self._pos:
                out[self._pos[idx]] += c
            else:
                out = vadd(out, vscale(c, self._expand[idx]))
        return out

    def lift(self, coords: Vector) -> Vector:
        vec = vzero(self.dim**self.degree)
        for k, c in enumerate(coords):
            vec[self.free[k]] = c
        return vec


def harrison_space(A: CommAlgebra, n: int, bound: int = 7) -> HarrisonSpace:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > bound:
        raise ValueError(f"degree {n} exceeds the configured bound {bound}")
    dim = A.dim
    width = dim**n
    rels = shuffle_relations(dim, n)
    if not rels:
        free = list(range(width))
        return HarrisonSpace(dim, n, free, {w: i for i, w in enumerate(free)}, {})
    red, pivots = linalg.rref(rels)
    pivot_set = set(pivots)
    free = [j for j in range(width) if j not in pivot_set]
    pos = {w: i for i, w in enumerate(free)}
    expand: dict[int, Vector] = {}
    for r, p in enumerate(pivots):
        coords = vzero(len(free))
        for j in free:
            if red[r][j]:
                coords[pos[j]] = -red[r][j]
        expand[p] = coords
    return HarrisonSpace(dim, n, free, pos, expand)


def harrison_boundary(A: CommAlgebra, M: PoissonModule, n: int, bound: int = 7) -> linalg.Matrix:
    """Boundary matrix from degree-n classes tensor M to degree n-1.

    Index layout: class index major, module index minor.  Degree one maps to
    zero by convention.
    """
    ch_n = harrison_space(A, n, bound)
    rows_dim = 0 if n == 1 else harrison_space(A, n - 1, bound).rank * M.dim
    mat = linalg.zeros(rows_dim, ch_n.rank * M.dim)
    if n == 1:
        return mat
    ch_prev = harrison_space(A, n - 1, bound)
    words = tensor_tuples(A.dim, n)
    for ci, widx in enumerate(ch_n.free):
        w = words[widx]
        for m in range(M.dim):
            col = ci * M.dim + m
            mvec = vzero(M.dim)
            mvec[m] = Fraction(1)
            for word, mv, c in _boundary_terms(A, M, w, mvec):
                coords = ch_prev.word_coords(word)
                for k, a in enumerate(coords):
                    if not a:
                        continue
                    for r, b in enumerate(mv):
                        if b:
                            mat[k * M.dim + r][col] += c * a * b
    return mat


def _boundary_terms(A: CommAlgebra, M: PoissonModule, w: tuple[int, ...], mvec: Vector):
    """Expansion of the boundary of a basis word tensor a module vector."""
    n = len(w)
    out = []
    head = M.act_comm(w[0], mvec)
    out.append((w[1:], head, Fraction(1)))
    for i in range(1, n):
        prod = A.product[w[i - 1] * A.dim + w[i]]
        for letter, c in enumerate(prod):
            if c:
                word = w[: i - 1] + (letter,) + w[i + 1 :]
                out.append((word, mvec, Fraction((-1) ** i) * c))
    tail = M.act_comm(w[n - 1], mvec)
    out.append((w[: n - 1], tail, Fraction((-1) ** n)))
    return out


# ---------------------------------------------------------------------------
# cochains


def hochschild_coboundary(A: CommAlgebra, M: PoissonModule, F: Cols, n: int) -> Cols:
    """The two-sided multiplication coboundary of an n-ary cochain."""
    dim = A.dim
    out = []
    for w in tensor_tuples(dim, n + 1):
        val = M.act_comm(w[0], F[tensor_index(w[1:], dim)])
        for i in range(1, n + 1):
            prod = A.product[w[i - 1] * dim + w[i]]
            for letter, c in enumerate(prod):
                if c:
                    word = w[: i - 1] + (letter,) + w[i + 1 :]
                    val = vadd(val, vscale(Fraction((-1) ** i) * c, F[tensor_index(word, dim)]))
        val = vadd(val, vscale((-1) ** (n + 1), M.act_comm(w[n], F[tensor_index(w[:n], dim)])))
        out.append(val)
    return out


def harrison_coboundary(A: CommAlgebra, M: PoissonModule, G: Cols, n: int, bound: int = 7) -> Cols:
    """The coboundary of a class-level cochain, via its word-level lift.

    G is indexed by the degree-n class basis; the result is indexed by the
    degree n+1 basis.  The lifted cochain's coboundary is checked to kill
    the relations before it is read off at the free words.
    """
    ch_n = harrison_space(A, n, bound)
    ch_next = harrison_space(A, n + 1, bound)
    if len(G) != ch_n.rank:
        raise ValueError("cochain length does not match the class basis")
    mdim = M.dim
    F = []
    for w in tensor_tuples(A.dim, n):
        acc = vzero(mdim)
        for r, c in enumerate(ch_n.word_coords(w)):
            if c:
                acc = vadd(acc, vscale(c, G[r]))
        F.append(acc)
    F2 = hochschild_coboundary(A, M, F, n)
    if not kills_shuffles(F2, A.dim, n + 1):
        raise ArithmeticError("coboundary does not descend to classes")
    return [list(F2[widx]) for widx in ch_next.free]


def kills_shuffles(F: Cols, dim: int, n: int) -> bool:
    mdim = len(F[0]) if F else 0
    for rel in shuffle_relations(dim, n):
        acc = vzero(mdim)
        for idx, c in enumerate(rel):
            if c:
                acc = vadd(acc, vscale(c, F[idx]))
        if any(acc):
            return False
    return True


def eulerian_components(F: Cols, dim: int, n: int, signed: bool = True, bound: int = 7) -> list[Cols]:
    """Precompositions with the idempotent family, indexed by part count minus one."""
    idems = eulerian(n, signed=signed, bound=bound)
    mdim = len(F[0]) if F else 0
    out = []
    for ga in idems:
        cols = []
        for w in tensor_tuples(dim, n):
            acc = vzero(mdim)
            for sigma, c in ga.items():
                acc = vadd(acc, vscale(c, F[tensor_index(permute_items(sigma, w), dim)]))
            cols.append(acc)
        out.append(cols)
    return out


def ce_coboundary(L: LieAlgebra, M: PoissonModule, F: Cols, n: int) -> Cols:
    """The bracket coboundary of an alternating n-ary cochain."""
    dim = L.dim
    out = []
    for w in tensor_tuples(dim, n + 1):
        val = vzero(M.dim)
        for j in range(n + 1):
            rest = w[:j] + w[j + 1 :]
            val = vadd(val, vscale((-1) ** j, M.act_lie(w[j], F[tensor_index(rest, dim)])))
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                br = L.bracket[w[i] * dim + w[j]]
                rest = tuple(w[k] for k in range(n + 1) if k != i and k != j)
                for letter, c in enumerate(br):
                    if c:
                        word = (letter,) + rest
                        val = vadd(
                            val,
                            vscale(Fraction((-1) ** (i + j)) * c, F[tensor_index(word, dim)]),
                        )
        out.append(val)
    return out


def alternating_projection(F: Cols, dim: int, n: int) -> Cols:
    mdim = len(F[0]) if F else 0
    out = []
    nf = Fraction(1, len(list(all_perms(n))) if n else 1)
    perms = list(all_perms(n))
    for w in tensor_tuples(dim, n):
        acc = vzero(mdim)
        for sigma in perms:
            acc = vadd(acc, vscale(perm_sign(sigma), F[tensor_index(permute_items(sigma, w), dim)]))
        out.append(vscale(nf, acc))
    return out


# ---------------------------------------------------------------------------
# the double complex, stored per ascending block type

BlockType = tuple[int, ...]


def block_types(n: int, p: int) -> list[BlockType]:
    """Partitions of n into exactly p parts, sizes ascending."""
    out: list[BlockType] = []

    def rec(remaining: int, parts: int, minimum: int, acc: list[int]):
        if parts == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for k in range(minimum, remaining - parts + 2):
            rec(remaining - k, parts - 1, k, acc + [k])

    rec(n, p, 1, [])
    return out


def canonical_line(J: BlockType) -> LinePartition:
    blocks = []
    start = 1
    for k in J:
        blocks.append(tuple(range(start, start + k)))
        start += k
    return tuple(blocks)


def line_type(L: LinePartition) -> BlockType:
    return tuple(sorted(len(b) for b in L))


@dataclass
class CellElement:
    """One bidegree of the double complex: a map per ascending block type."""

    p: int
    arity: int
    dim: int
    mdim: int
    comps: dict[BlockType, Cols]

    def __post_init__(self):
        width = self.dim**self.arity
        for J in block_types(self.arity, self.p):
            if J not in self.comps:
                self.comps[J] = zero_cols(self.mdim, width)

    @property
    def q(self) -> int:
        return self.arity - self.p

    def is_zero(self) -> bool:
        return all(not any(x for col in cols for x in col) for cols in self.comps.values())


def zero_cell(p: int, arity: int, dim: int, mdim: int) -> CellElement:
    return CellElement(p, arity, dim, mdim, {})


def cell_add(a: CellElement, b: CellElement) -> CellElement:
    comps = {J: cols_add(a.comps[J], b.comps[J]) for J in a.comps}
    return CellElement(a.p, a.arity, a.dim, a.mdim, comps)


def cell_scale(c, a: CellElement) -> CellElement:
    return CellElement(a.p, a.arity, a.dim, a.mdim, {J: cols_scale(c, v) for J, v in a.comps.items()})


def cell_eq(a: CellElement, b: CellElement) -> bool:
    return a.p == b.p and a.arity == b.arity and all(a.comps[J] == b.comps[J] for J in a.comps)


def _norm(n: int) -> Fraction:
    """Degree normalization of the evaluation identification."""
    return Fraction((-1) ** (((n - 1) // 2) % 2))


def cell_from_operation(Y: FiniteOperation, p: int) -> CellElement:
    """Evaluate an invariant operation at the canonical line of each type."""
    c = _norm(Y.n)
    comps = {J: cols_scale(c, Y.values[canonical_line(J)]) for J in block_types(Y.n, p)}
    return CellElement(p, Y.n, Y.dim, Y.dim, comps)


def _line_transport(L: LinePartition, n: int) -> Perm:
    """The relabelling taking the canonical line of L's type onto L."""
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for block in L:
        by_size.setdefault(len(block), []).append(block)
    sigma = [0] * n
    start = 1
    for k in line_type(L):
        target = by_size[k].pop(0)
        for offset, vertex in enumerate(target):
            sigma[start - 1 + offset] = vertex - 1
        start += k
    return tuple(sigma)


def operation_from_cell(el: CellElement) -> FiniteOperation:
    """Spread canonical values over every line by sign-twisted relabelling."""
    if el.mdim != el.dim:
        raise ValueError("operations need the adjoint coefficient space")
    n, dim = el.arity, el.dim
    c = 1 / _norm(n)
    values: dict[LinePartition, Cols] = {}
    tuples = tensor_tuples(dim, n)
    for L in line_partitions(n):
        if blocks_count(L) != el.p:
            continue
        F = el.comps[line_type(L)]
        sigma = _line_transport(L, n)
        inv = invert_perm(sigma)
        s = c * perm_sign(sigma)
        cols = [vscale(s, F[tensor_index(permute_items(inv, t), dim)]) for t in tuples]
        values[L] = cols
    out = fo_zero(n, dim)
    for L, cols in values.items():
        out.values[L] = cols
    return out


def cell_is_coherent(el: CellElement) -> bool:
    """Whether the per-type data glues to a sign-invariant operation."""
    return is_sign_invariant(operation_from_cell(el))


# ---------------------------------------------------------------------------
# dimensions through characters


def _cycle_count(sigma: Perm) -> int:
    seen = [False] * len(sigma)
    out = 0
    for i in range(len(sigma)):
        if seen[i]:
            continue
        out += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
    return out


def finite_cell_dim(n: int, dim: int, p: int) -> int:
    """Dimension of the invariant operations supported on p-block lines.

    Character sum of the signed action on the joint line-and-tensor index;
    the target slot contributes one plain factor of the dimension.
    """
    lines = [L for L in line_partitions(n) if blocks_count(L) == p]
    total = Fraction(0)
    perms = list(all_perms(n))
    for sigma in perms:
        line_trace = Fraction(0)
        for L in lines:
            red = reduce_quiver(act_quiver(sigma, line_quiver(L, n)))
            line_trace += red.get(L, Fraction(0))
        if line_trace:
            total += perm_sign(sigma) * line_trace * Fraction(dim) ** _cycle_count(sigma)
    total = total * Fraction(dim) / Fraction(len(perms))
    if total.denominator != 1:
        raise ArithmeticError("character sum is not integral")
    return int(total)


def _choose(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def cochain_cell_dim(A: CommAlgebra, mdim: int, n: int, p: int, bound: int = 7) -> int:
    """Dimension of the maps out of the p-block chain summands.

    Counted without reference to quivers: each block type contributes the
    product over distinct sizes of a symmetric power count for even size and
    an exterior power count for odd size, on the exact chain quotient ranks.
    """
    ranks: dict[int, int] = {}
    total = 0
    for J in block_types(n, p):
        factor = 1
        for k in set(J):
            if k not in ranks:
                ranks[k] = harrison_space(A, k, bound).rank
            m = J.count(k)
            d = ranks[k]
            factor *= _choose(d + m - 1, m) if k % 2 == 0 else _choose(d, m)
        total += factor
    return total * mdim


def eulerian_rank(n: int, dim: int, p: int, bound: int = 7) -> int:
    """Trace of the p-th signed idempotent on the n-th tensor power."""
    ga = eulerian(n, signed=True, bound=bound)[p - 1]
    total = Fraction(0)
    for sigma, c in ga.items():
        total += c * Fraction(dim) ** _cycle_count(sigma)
    if total.denominator != 1:
        raise ArithmeticError("idempotent trace is not integral")
    return int(total)


# ---------------------------------------------------------------------------
# differentials of the double complex


def _block_ranges(J: BlockType) -> list[tuple[int, int]]:
    out = []
    start = 0
    for k in J:
        out.append((start, start + k))
        start += k
    return out


def _resort_blocks(sizes: list[int]) -> tuple[BlockType, list[int], int]:
    """Stable ascending order with the Koszul sign of the block moves."""
    order = sorted(range(len(sizes)), key=lambda i: (sizes[i], i))
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                sign *= (-1) ** (sizes[order[a]] * sizes[order[b]])
    return tuple(sizes[i] for i in order), order, sign


def _eval_blocks(F: Cols, dim: int, blocks: list[tuple[int, ...]], order: list[int]) -> Vector:
    word = tuple(x for i in order for x in blocks[i])
    return F[tensor_index(word, dim)]


def bicomplex_vertical(A: CommAlgebra, M: PoissonModule, el: CellElement) -> CellElement:
    """Slot-wise two-sided multiplication coboundary, block count preserved."""
    n, dim = el.arity, el.dim
    out = zero_cell(el.p, n + 1, dim, M.dim)
    for J2 in block_types(n + 1, el.p):
        ranges = _block_ranges(J2)
        target = out.comps[J2]
        for w_idx, w in enumerate(tensor_tuples(dim, n + 1)):
            blocks = [w[a:b] for a, b in ranges]
            acc = vzero(M.dim)
            for i, (k2, blk) in enumerate(zip(J2, blocks)):
                if k2 < 2:
                    continue
                eps = (-1) ** sum(J2[:i])
                sizes = list(J2)
                sizes[i] = k2 - 1
                J, order, koszul = _resort_blocks(sizes)
                F = el.comps[J]
                coeff = Fraction(eps * koszul)
                inner = blocks[:i] + [blk[1:]] + blocks[i + 1 :]
                acc = vadd(acc, vscale(coeff, M.act_comm(blk[0], _eval_blocks(F, dim, inner, order))))
                for r in range(1, k2):
                    prod = A.product[blk[r - 1] * dim + blk[r]]
                    merged_base = blk[: r - 1] + blk[r + 1 :]
                    for letter, c in enumerate(prod):
                        if not c:
                            continue
                        inner = blocks[:i] + [blk[: r - 1] + (letter,) + blk[r:][1:]] + blocks[i + 1 :]
                        acc = vadd(
                            acc,
                            vscale(coeff * Fraction((-1) ** r) * c, _eval_blocks(F, dim, inner, order)),
                        )
                inner = blocks[:i] + [blk[: k2 - 1]] + blocks[i + 1 :]
                acc = vadd(
                    acc,
                    vscale(
                        coeff * Fraction((-1) ** k2),
                        M.act_comm(blk[k2 - 1], _eval_blocks(F, dim, inner, order)),
                    ),
                )
            target[w_idx] = acc
    return out


def chain_bracket(P: PoissonPresentation, x: tuple[int, ...], y: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    """Degree minus one bracket of two chain words.

    One letter of each side pairs through the coefficient bracket; the
    prefixes shuffle together before it and the suffixes after it.  The
    placement sign is the parity cost of routing the odd pairing to slots
    (a, b) with every letter odd, which makes the map a biderivation for
    the shuffle product and hence well defined on relation classes.
    """
    j, k = len(x), len(y)
    out: dict[tuple[int, ...], Fraction] = {}
    for a in range(j):
        for b in range(k):
            eps = Fraction((-1) ** (b * (j - a + 1) + j - 1))
            for letter, c in enumerate(P.bracket[x[a] * P.dim + y[b]]):
                if not c:
                    continue
                for pre, s1 in _signed_shuffles(x[:a], y[:b]):
                    for post, s2 in _signed_shuffles(x[a + 1 :], y[b + 1 :]):
                        w = pre + (letter,) + post
                        out[w] = out.get(w, Fraction(0)) + eps * c * s1 * s2
    return {w: c for w, c in out.items() if c}


def _signed_shuffles(u: tuple[int, ...], v: tuple[int, ...]):
    """Interleavings of two words with the sign of the crossing count."""
    if not u:
        return [(v, 1)]
    if not v:
        return [(u, 1)]
    out = []
    for rest, s in _signed_shuffles(u[1:], v):
        out.append(((u[0],) + rest, s))
    for rest, s in _signed_shuffles(u, v[1:]):
        out.append(((v[0],) + rest, s * (-1) ** len(u)))
    return out


def bicomplex_horizontal(P: PoissonPresentation, M: PoissonModule, el: CellElement) -> CellElement:
    """Bracket coboundary: singleton blocks act, block pairs merge."""
    n, dim = el.arity, el.dim
    out = zero_cell(el.p + 1, n + 1, dim, M.dim)
    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], dict[tuple[int, ...], Fraction]] = {}
    for J2 in block_types(n + 1, el.p + 1):
        ranges = _block_ranges(J2)
        target = out.comps[J2]
        for w_idx, w in enumerate(tensor_tuples(dim, n + 1)):
            blocks = [w[a:b] for a, b in ranges]
            acc = vzero(M.dim)
            for i, k in enumerate(J2):
                if k != 1:
                    continue
                eps = (-1) ** sum(J2[:i])
                rest = blocks[:i] + blocks[i + 1 :]
                sizes = list(J2[:i] + J2[i + 1 :])
                J, order, koszul = _resort_blocks(sizes)
                F = el.comps[J]
                acc = vadd(
                    acc,
                    vscale(Fraction(eps * koszul), M.act_lie(blocks[i][0], _eval_blocks(F, dim, rest, order))),
                )
            for i in range(len(J2)):
                for j in range(i + 1, len(J2)):
                    eps = (-1) ** (sum(J2[:i]) * J2[i])
                    eps *= (-1) ** ((sum(J2[:j]) - J2[i]) * J2[j])
                    eps *= -1
                    key = (blocks[i], blocks[j])
                    merged = cache.get(key)
                    if merged is None:
                        merged = cache[key] = chain_bracket(P, blocks[i], blocks[j])
                    if not merged:
                        continue
                    others = [blocks[r] for r in range(len(J2)) if r != i and r != j]
                    sizes = [J2[i] + J2[j] - 1] + [J2[r] for r in range(len(J2)) if r != i and r != j]
                    J, order, koszul = _resort_blocks(sizes)
                    F = el.comps[J]
                    for word, c in merged.items():
                        inner = [word] + others
                        acc = vadd(acc, vscale(Fraction(eps * koszul) * c, _eval_blocks(F, dim, inner, order)))
            target[w_idx] = acc
    return out


# ---------------------------------------------------------------------------
# cell bases and reports


def _index_tuples(d: int, m: int, strict: bool) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(start: int, acc: list[int]):
        if len(acc) == m:
            out.append(tuple(acc))
            return
        for r in range(start, d):
            rec(r + 1 if strict else r, acc + [r])

    rec(0, [])
    return out


def _group_layout(J: BlockType) -> list[tuple[int, list[int]]]:
    """Slots of the ascending type grouped by block size."""
    groups: dict[int, list[int]] = {}
    for i, k in enumerate(J):
        groups.setdefault(k, []).append(i)
    return sorted(groups.items())


def _functional_comps(
    spaces: dict[int, HarrisonSpace],
    J: BlockType,
    choice: dict[int, tuple[int, ...]],
    m: int,
    mdim: int,
    dim: int,
) -> Cols:
    """Word-level values of the product functional picked by class indices.

    Equal-size blocks are symmetrised with the Koszul block swap sign, so an
    odd size contributes an exterior monomial and an even size a symmetric
    one.
    """
    n = sum(J)
    ranges = _block_ranges(J)
    groups = _group_layout(J)
    cols = zero_cols(mdim, dim**n)
    for w_idx, w in enumerate(tensor_tuples(dim, n)):
        coords = [spaces[k].word_coords(w[a:b]) for k, (a, b) in zip(J, ranges)]
        total = Fraction(1)
        for k, slots in groups:
            idxs = choice[k]
            group_val = Fraction(0)
            seen = set()
            for perm in permutations(range(len(slots))):
                arranged = tuple(idxs[r] for r in perm)
                if k % 2 == 0:
                    if arranged in seen:
                        continue
                    seen.add(arranged)
                    s = 1
                else:
                    s = perm_sign(perm)
                term = Fraction(s)
                for slot, r in zip(slots, arranged):
                    term *= coords[slot][r]
                    if not term:
                        break
                group_val += term
            total *= group_val
            if not total:
                break
        if total:
            cols[w_idx][m] = total
    return cols


def cell_basis(A: CommAlgebra, mdim: int, n: int, p: int, bound: int = 7) -> list[CellElement]:
    """Explicit basis of one bidegree, grouped per ascending block type."""
    spaces: dict[int, HarrisonSpace] = {}
    out: list[CellElement] = []
    for J in block_types(n, p):
        for k in set(J):
            if k not in spaces:
                spaces[k] = harrison_space(A, k, bound)
        groups = _group_layout(J)
        pools = [
            _index_tuples(spaces[k].rank, len(slots), strict=k % 2 == 1) for k, slots in groups
        ]

        def rec(gi: int, choice: dict[int, tuple[int, ...]]):
            if gi == len(groups):
                for m in range(mdim):
                    comps = {J: _functional_comps(spaces, J, choice, m, mdim, A.dim)}
                    out.append(CellElement(p, n, A.dim, mdim, comps))
                return
            k = groups[gi][0]
            for idxs in pools[gi]:
                rec(gi + 1, {**choice, k: idxs})

        rec(0, {})
    return out


def random_cell(
    A: CommAlgebra,
    mdim: int,
    n: int,
    p: int,
    rng: random.Random,
    terms: int = 4,
    span: int = 3,
    bound: int = 7,
) -> CellElement:
    """Random coherent element: a sparse combination of basis functionals."""
    spaces: dict[int, HarrisonSpace] = {}
    el = zero_cell(p, n, A.dim, mdim)
    for J in block_types(n, p):
        for k in set(J):
            if k not in spaces:
                spaces[k] = harrison_space(A, k, bound)
        groups = _group_layout(J)
        for _ in range(terms):
            choice = {}
            ok = True
            for k, slots in groups:
                pool = _index_tuples(spaces[k].rank, len(slots), strict=k % 2 == 1)
                if not pool:
                    ok = False
                    break
                choice[k] = pool[rng.randrange(len(pool))]
            if not ok:
                continue
            coeff = Fraction(rng.randint(-span, span))
            if not coeff:
                continue
            m = rng.randrange(mdim)
            cols = _functional_comps(spaces, J, choice, m, mdim, A.dim)
            el.comps[J] = cols_add(el.comps[J], cols_scale(coeff, cols))
    return el


def _cell_vector(el: CellElement) -> Vector:
    out: Vector = []
    for J in block_types(el.arity, el.p):
        for col in el.comps[J]:
            out.extend(col)
    return out


def poisson_bicomplex(
    P: PoissonPresentation,
    pmax: int,
    qmax: int,
    M: PoissonModule | None = None,
    rng: random.Random | None = None,
    samples: int = 1,
    tmax: int | None = None,
    bound: int = 7,
) -> dict:
    """Cell dimensions plus sampled exact checks of the three identities.

    tmax, when given, restricts the window to cells with p + q <= tmax.
    """
    failures = check_poisson(P)
    if failures:
        raise ValueError("not a Poisson presentation: " + "; ".join(failures))
    A = comm_part(P)
    if M is None:
        M = adjoint_module(P)
    if rng is None:
        rng = random.Random(0)
    if tmax is None:
        tmax = pmax + qmax
    dims = {}
    for p in range(1, pmax + 1):
        for q in range(qmax + 1):
            if p + q <= tmax:
                dims[(p, q)] = cochain_cell_dim(A, M.dim, p + q, p, bound)
    report = {
        "dims": dims,
        "square_vertical": True,
        "square_horizontal": True,
        "anticommute": True,
        "witnesses": [],
    }
    for p in range(1, pmax + 1):
        for q in range(qmax + 1):
            if p + q > tmax:
                continue
            for _ in range(samples):
                el = random_cell(A, M.dim, p + q, p, rng, bound=bound)
                dv = bicomplex_vertical(A, M, el)
                dh = bicomplex_horizontal(P, M, el)
                if not bicomplex_vertical(A, M, dv).is_zero():
                    report["square_vertical"] = False
                    report["witnesses"].append(("vertical", p, q))
                if not bicomplex_horizontal(P, M, dh).is_zero():
                    report["square_horizontal"] = False
                    report["witnesses"].append(("horizontal", p, q))
                mixed = cell_add(bicomplex_horizontal(P, M, dv), bicomplex_vertical(A, M, dh))
                if not mixed.is_zero():
                    report["anticommute"] = False
                    report["witnesses"].append(("mixed", p, q))
    return report


def _rank(rows: list[Vector]) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    _, pivots = linalg.rref(rows)
    return len(pivots)


def total_cohomology(
    P: PoissonPresentation, nmax: int, M: PoissonModule | None = None, bound: int = 7
) -> dict[int, int]:
    """Cohomology dimensions of the totalised double complex in range."""
    A = comm_part(P)
    if M is None:
        M = adjoint_module(P)

    def total_basis(n: int) -> list[CellElement]:
        out = []
        for p in range(1, n + 1):
            out.extend(cell_basis(A, M.dim, n, p, bound))
        return out

    def d_rows(els: list[CellElement], n: int) -> list[Vector]:
        layout = []
        offset = 0
        for p2 in range(1, n + 2):
            width = len(block_types(n + 1, p2)) * A.dim ** (n + 1) * M.dim
            layout.append(offset)
            offset += width
        rows = []
        for el in els:
            row = [Fraction(0)] * offset
            dv = bicomplex_vertical(A, M, el)
            dh = bicomplex_horizontal(P, M, el)
            for target in (dv, dh):
                vec = _cell_vector(target)
                base = layout[target.p - 1]
                for i, v in enumerate(vec):
                    row[base + i] += v
            rows.append(row)
        return rows

    ranks: dict[int, int] = {0: 0}
    sizes: dict[int, int] = {}
    for n in range(1, nmax + 1):
        els = total_basis(n)
        sizes[n] = len(els)
        ranks[n] = _rank(d_rows(els, n))
    out = {}
    for n in range(1, nmax + 1):
        kernel = sizes[n] - ranks[n]
        out[n] = kernel - ranks[n - 1]
    return out


def _random_operation(rng: random.Random, n: int, dim: int, span: int = 2) -> FiniteOperation:
    f = fo_zero(n, dim)
    for L in line_partitions(n):
        for col in f.values[L]:
            for r in range(dim):
                if rng.random() < 0.4:
                    col[r] = Fraction(rng.randint(-span, span))
    return f


def compare_with_finite(
    P: PoissonPresentation,
    max_arity: int = 4,
    rng: random.Random | None = None,
    samples: int = 2,
    full_basis_arity: int = 3,
    bound: int = 7,
) -> dict:
    """Cell-by-cell comparison of the double complex with the quiver side.

    Dimensions are computed three independent ways per cell.  Evaluation at
    canonical lines is checked to intertwine both differentials: over the
    full cell basis up to full_basis_arity, and on seeded random invariant
    operations above it.  Restrictions reproduce the two-sided
    multiplication coboundary on the first column and the bracket coboundary
    on the all-singleton row, and the two transfer maps invert each other.
    """
    failures = check_poisson(P)
    if failures:
        raise ValueError("not a Poisson presentation: " + "; ".join(failures))
    A = comm_part(P)
    M = adjoint_module(P)
    L = lie_part(P)
    dim = P.dim
    Xh, Xv = split_mc(mc_from_poisson(P))
    if rng is None:
        rng = random.Random(0)
    report: dict = {
        "dims": [],
        "dims_equal": True,
        "chain_maps": True,
        "column_restriction": True,
        "row_restriction": True,
        "round_trips": True,
        "rank_bijective": True,
        "witnesses": [],
    }

    for n in range(1, max_arity + 2):
        for p in range(1, n + 1):
            fdim = finite_cell_dim(n, dim, p)
            cdim = cochain_cell_dim(A, dim, n, p, bound)
            edim = eulerian_rank(n, dim, p, bound) * dim
            report["dims"].append((n, p, fdim, cdim, edim))
            if not fdim == cdim == edim:
                report["dims_equal"] = False
                report["witnesses"].append(("dims", n, p))

    def truth_cell(xpart: FiniteOperation, comp: FiniteOperation, p2: int) -> CellElement:
        n2 = comp.n + 1
        types2 = block_types(n2, p2)
        lines = [canonical_line(J) for J in types2]
        vals = fo_bracket_lines(xpart, comp, lines)
        out = zero_cell(p2, n2, dim, dim)
        c2 = _norm(n2)
        for J, line in zip(types2, lines):
            out.comps[J] = [vscale(c2, col) for col in vals[line]]
        return out

    def check_el(el: CellElement, tag: str) -> None:
        comp = operation_from_cell(el)
        if not cell_eq(bicomplex_vertical(A, M, el), truth_cell(Xv, comp, el.p)):
            report["chain_maps"] = False
            report["witnesses"].append(("vertical", el.arity, el.p, tag))
        if not cell_eq(bicomplex_horizontal(P, M, el), truth_cell(Xh, comp, el.p + 1)):
            report["chain_maps"] = False
            report["witnesses"].append(("horizontal", el.arity, el.p, tag))

    for n in range(1, full_basis_arity + 1):
        for p in range(1, n + 1):
            for el in cell_basis(A, dim, n, p, bound):
                check_el(el, "basis")
    for n in range(full_basis_arity + 1, max_arity + 1):
        for _ in range(samples):
            Y = sgn_symmetrize(_random_operation(rng, n, dim))
            for (p, _q), comp in bigrade(Y).items():
                check_el(cell_from_operation(comp, p), "sample")

    for n in range(1, min(max_arity, 3) + 1):
        F = [[Fraction(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim**n)]
        el = CellElement(1, n, dim, dim, {(n,): [list(col) for col in F]})
        if bicomplex_vertical(A, M, el).comps[(n + 1,)] != hochschild_coboundary(A, M, F, n):
            report["column_restriction"] = False
            report["witnesses"].append(("column", n))
        G = alternating_projection(
            [[Fraction(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim**n)], dim, n
        )
        el = CellElement(n, n, dim, dim, {(1,) * n: [list(col) for col in G]})
        if bicomplex_horizontal(P, M, el).comps[(1,) * (n + 1)] != ce_coboundary(L, M, G, n):
            report["row_restriction"] = False
            report["witnesses"].append(("row", n))

    for n in range(1, max_arity + 1):
        for p in range(1, n + 1):
            el = random_cell(A, dim, n, p, rng, bound=bound)
            if not cell_eq(cell_from_operation(operation_from_cell(el), p), el):
                report["round_trips"] = False
                report["witnesses"].append(("cell_round_trip", n, p))
        Y = sgn_symmetrize(_random_operation(rng, n, dim))
        for (p, _q), comp in bigrade(Y).items():
            if not fo_eq(operation_from_cell(cell_from_operation(comp, p)), comp):
                report["round_trips"] = False
                report["witnesses"].append(("operation_round_trip", n, p))

    for n in range(1, full_basis_arity + 1):
        for p in range(1, n + 1):
            basis = cell_basis(A, dim, n, p, bound)
            rows = []
            for el in basis:
                op = operation_from_cell(el)
                row: Vector = []
                for line in line_partitions(n):
                    if blocks_count(line) == p:
                        for col in op.values[line]:
                            row.extend(col)
                rows.append(row)
            if not len(basis) == _rank(rows) == finite_cell_dim(n, dim, p):
                report["rank_bijective"] = False
                report["witnesses"].append(("rank", n, p))
    return report
