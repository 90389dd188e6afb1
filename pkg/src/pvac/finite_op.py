"""Quiver-indexed multilinear operations on a finite-dimensional space.

An arity-n operation assigns to every n-quiver a linear map V^{otimes n} -> V,
linearly in the quiver and subject to the cycle relations, so it is determined
by its values on the disjoint-union-of-lines basis.  These operations form an
operad: composition routes a quiver through its cocomposition.  Inside sit the
sign-invariant elements, a graded Lie algebra under the shuffle box product,
whose odd square-zero elements in arity 2 are exactly the Poisson structures
on V.  The differential each such element induces splits into a piece raising
the number of line blocks and a piece raising the edge count, computed here
both ways: through the box product and through direct cochain formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import Perm, all_perms, invert_perm, perm_sign, permute_items
from .quiver import (
    LinePartition,
    Quiver,
    act_quiver,
    blocks_count,
    cocompose,
    line_partitions,
    line_quiver,
    reduce_quiver,
)
from .symgrp import shuffles

Vector = list[Fraction]
Cols = list[Vector]  # column j = image of the j-th basis tensor


def tensor_tuples(dim: int, n: int) -> list[tuple[int, ...]]:
    return list(product(range(dim), repeat=n))


def tensor_index(idxs: tuple[int, ...], dim: int) -> int:
    j = 0
    for i in idxs:
        j = j * dim + i
    return j


def zero_cols(dim: int, width: int) -> Cols:
    return [[Fraction(0)] * dim for _ in range(width)]


def cols_add(a: Cols, b: Cols) -> Cols:
    return [[x + y for x, y in zip(ca, cb)] for ca, cb in zip(a, b)]


def cols_scale(c, a: Cols) -> Cols:
    c = Fraction(c)
    return [[c * x for x in col] for col in a]


@dataclass
class FiniteOperation:
    n: int
    dim: int
    values: dict[LinePartition, Cols]

    def __post_init__(self):
        width = self.dim**self.n
        for L in line_partitions(self.n):
            if L not in self.values:
                self.values[L] = zero_cols(self.dim, width)

    def is_zero(self) -> bool:
        return all(
            all(x == 0 for col in cols for x in col) for cols in self.values.values()
        )


def fo_zero(n: int, dim: int) -> FiniteOperation:
    return FiniteOperation(n, dim, {})


def fo_identity(dim: int) -> FiniteOperation:
    cols = [[Fraction(i == j) for i in range(dim)] for j in range(dim)]
    return FiniteOperation(1, dim, {((1,),): cols})


def fo_add(*fs: FiniteOperation) -> FiniteOperation:
    n, dim = fs[0].n, fs[0].dim
    out = fo_zero(n, dim)
    for f in fs:
        if (f.n, f.dim) != (n, dim):
            raise ValueError("arity or dimension mismatch")
        for L, cols in f.values.items():
            out.values[L] = cols_add(out.values[L], cols)
    return out


def fo_scale(c, f: FiniteOperation) -> FiniteOperation:
    return FiniteOperation(
        f.n, f.dim, {L: cols_scale(c, cols) for L, cols in f.values.items()}
    )


def fo_eq(f: FiniteOperation, g: FiniteOperation) -> bool:
    return f.n == g.n and f.dim == g.dim and f.values == g.values


def fo_eval_quiver(f: FiniteOperation, Q: Quiver) -> Cols:
    """The value at an arbitrary quiver, through the line-basis reduction."""
    out = zero_cols(f.dim, f.dim**f.n)
    for L, c in reduce_quiver(Q).items():
        out = cols_add(out, cols_scale(c, f.values[L]))
    return out


def fo_act(sigma: Perm, f: FiniteOperation) -> FiniteOperation:
    """Right action: value at Gamma becomes the sigma(Gamma)-value on permuted input."""
    dim = f.dim
    out = fo_zero(f.n, dim)
    tuples = tensor_tuples(dim, f.n)
    for L in line_partitions(f.n):
        mat = fo_eval_quiver(f, act_quiver(sigma, line_quiver(L, f.n)))
        cols = [
            mat[tensor_index(permute_items(sigma, t), dim)] for t in tuples
        ]
        out.values[L] = [list(col) for col in cols]
    return out


def is_sign_invariant(f: FiniteOperation) -> bool:
    for k in range(f.n - 1):
        tau = list(range(f.n))
        tau[k], tau[k + 1] = tau[k + 1], tau[k]
        acted = fo_act(tuple(tau), f)
        if not fo_eq(acted, fo_scale(-1, f)):
            return False
    return True


def sgn_symmetrize(f: FiniteOperation) -> FiniteOperation:
    terms = [
        fo_scale(perm_sign(sigma), fo_act(sigma, f)) for sigma in all_perms(f.n)
    ]
    return fo_scale(Fraction(1, math.factorial(f.n)), fo_add(*terms))


def _compose_line(f: FiniteOperation, gs: list[FiniteOperation], L: LinePartition) -> Cols:
    dim = f.dim
    nu = tuple(g.n for g in gs)
    N = sum(nu)
    outer, inner = cocompose(nu, line_quiver(L, N))
    mf = fo_eval_quiver(f, outer)
    mgs = [fo_eval_quiver(g, q) for g, q in zip(gs, inner)]
    cols = []
    for t in tensor_tuples(dim, N):
        mids = []
        pos = 0
        for g, mg in zip(gs, mgs):
            block = t[pos : pos + g.n]
            pos += g.n
            mids.append(mg[tensor_index(block, dim)])
        col = [Fraction(0)] * dim
        for mid_t in tensor_tuples(dim, f.n):
            w = Fraction(1)
            for u, i in zip(mids, mid_t):
                w *= u[i]
                if not w:
                    break
            if not w:
                continue
            fcol = mf[tensor_index(mid_t, dim)]
            for r in range(dim):
                col[r] += w * fcol[r]
        cols.append(col)
    return cols


def fo_compose(f: FiniteOperation, gs: list[FiniteOperation]) -> FiniteOperation:
    if len(gs) != f.n:
        raise ValueError("arity mismatch: need one inner operation per input")
    dim = f.dim
    if any(g.dim != dim for g in gs):
        raise ValueError("arity or dimension mismatch")
    N = sum(g.n for g in gs)
    out = fo_zero(N, dim)
    for L in line_partitions(N):
        out.values[L] = _compose_line(f, gs, L)
    return out


def fo_insert_first(f: FiniteOperation, g: FiniteOperation) -> FiniteOperation:
    return fo_compose(f, [g] + [fo_identity(f.dim)] * (f.n - 1))


def fo_box(f: FiniteOperation, g: FiniteOperation) -> FiniteOperation:
    """Shuffle-summed first-slot insertion; inputs must be sign-invariant."""
    if not (is_sign_invariant(f) and is_sign_invariant(g)):
        raise ValueError("box product requires sign-invariant operations")
    df, dg = f.n - 1, g.n - 1
    comp = fo_insert_first(f, g)
    terms = []
    for sigma in shuffles(dg + 1, df):
        # the suspension twists the right action by the sign character
        terms.append(fo_scale(perm_sign(sigma), fo_act(invert_perm(sigma), comp)))
    return fo_add(*terms)


def fo_bracket(f: FiniteOperation, g: FiniteOperation) -> FiniteOperation:
    sign = (-1) ** ((f.n - 1) * (g.n - 1))
    return fo_add(fo_box(f, g), fo_scale(-sign, fo_box(g, f)))


def _box_line(f: FiniteOperation, gs: list[FiniteOperation], L: LinePartition, cache: dict) -> Cols:
    dim = f.dim
    N = sum(g.n for g in gs)
    tuples = tensor_tuples(dim, N)
    acc = zero_cols(dim, dim**N)
    for sigma in shuffles(gs[0].n, f.n - 1):
        tau = invert_perm(sigma)
        red = reduce_quiver(act_quiver(tau, line_quiver(L, N)))
        mat = zero_cols(dim, dim**N)
        for L2, c in red.items():
            if L2 not in cache:
                cache[L2] = _compose_line(f, gs, L2)
            mat = cols_add(mat, cols_scale(c, cache[L2]))
        s = perm_sign(sigma)
        for t_idx, t in enumerate(tuples):
            col = mat[tensor_index(permute_items(tau, t), dim)]
            av = acc[t_idx]
            for r in range(dim):
                av[r] += s * col[r]
    return acc


def fo_bracket_lines(
    f: FiniteOperation, g: FiniteOperation, lines: list[LinePartition]
) -> dict[LinePartition, Cols]:
    """Selected lines of the bracket, sharing composition work across them."""
    if not (is_sign_invariant(f) and is_sign_invariant(g)):
        raise ValueError("bracket requires sign-invariant operations")
    sign = (-1) ** ((f.n - 1) * (g.n - 1))
    ident = fo_identity(f.dim)
    gs_fg = [g] + [ident] * (f.n - 1)
    gs_gf = [f] + [ident] * (g.n - 1)
    cache_fg: dict = {}
    cache_gf: dict = {}
    out = {}
    for L in lines:
        a = _box_line(f, gs_fg, L, cache_fg)
        b = _box_line(g, gs_gf, L, cache_gf)
        out[L] = cols_add(a, cols_scale(-sign, b))
    return out


@dataclass
class PoissonPresentation:
    dim: int
    product: Cols  # dim^2 columns
    bracket: Cols

    def multiply(self, a: Vector, b: Vector) -> Vector:
        return self._bilinear(self.product, a, b)

    def brack(self, a: Vector, b: Vector) -> Vector:
        return self._bilinear(self.bracket, a, b)

    def _bilinear(self, cols: Cols, a: Vector, b: Vector) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                col = cols[i * self.dim + j]
                for r in range(self.dim):
                    out[r] += x * y * col[r]
        return out


EDGELESS2: LinePartition = ((1,), (2,))
LINE2: LinePartition = ((1, 2),)


def mc_from_poisson(P: PoissonPresentation) -> FiniteOperation:
    X = fo_zero(2, P.dim)
    X.values[EDGELESS2] = [list(col) for col in P.bracket]
    X.values[LINE2] = [list(col) for col in P.product]
    return X


def poisson_from_mc(X: FiniteOperation) -> PoissonPresentation:
    if X.n != 2:
        raise ValueError("arity 2 required")
    return PoissonPresentation(
        X.dim,
        [list(col) for col in X.values[LINE2]],
        [list(col) for col in X.values[EDGELESS2]],
    )


def is_mc(X: FiniteOperation) -> bool:
    if X.n != 2 or not is_sign_invariant(X):
        return False
    return fo_box(X, X).is_zero()


def mc_failure_witness(X: FiniteOperation):
    """The first line partition where the box square fails, or None."""
    if X.n != 2:
        raise ValueError("arity 2 required")
    if not is_sign_invariant(X):
        return "sign-invariance"
    sq = fo_box(X, X)
    for L in line_partitions(3):
        if any(x != 0 for col in sq.values[L] for x in col):
            return L
    return None


def check_poisson(P: PoissonPresentation) -> list[str]:
    """Axioms checked directly on basis vectors with exact arithmetic."""
    dim = P.dim
    basis = [[Fraction(i == j) for i in range(dim)] for j in range(dim)]
    bad = []

    def eq(u, v):
        return all(x == y for x, y in zip(u, v))

    def add(u, v):
        return [x + y for x, y in zip(u, v)]

    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if not eq(P.multiply(a, b), P.multiply(b, a)):
                bad.append(f"commutativity fails at ({i},{j})")
            neg = [-x for x in P.brack(b, a)]
            if not eq(P.brack(a, b), neg):
                bad.append(f"antisymmetry fails at ({i},{j})")
            for k, c in enumerate(basis):
                if not eq(
                    P.multiply(P.multiply(a, b), c), P.multiply(a, P.multiply(b, c))
                ):
                    bad.append(f"associativity fails at ({i},{j},{k})")
                lhs = P.brack(a, P.multiply(b, c))
                rhs = add(P.multiply(P.brack(a, b), c), P.multiply(b, P.brack(a, c)))
                if not eq(lhs, rhs):
                    bad.append(f"Leibniz fails at ({i},{j},{k})")
                lhs = P.brack(a, P.brack(b, c))
                rhs = add(P.brack(P.brack(a, b), c), P.brack(b, P.brack(a, c)))
                if not eq(lhs, rhs):
                    bad.append(f"Jacobi fails at ({i},{j},{k})")
    return bad


def differential(X: FiniteOperation, f: FiniteOperation) -> FiniteOperation:
    if not is_mc(X):
        raise ValueError("differential requires a Maurer-Cartan element")
    return fo_bracket(X, f)


def bigrade(f: FiniteOperation) -> dict[tuple[int, int], FiniteOperation]:
    """Split by the number of line blocks p; the complementary degree is q = n-1-p."""
    out = {}
    for p in range(1, f.n + 1):
        comp = fo_zero(f.n, f.dim)
        nonzero = False
        for L, cols in f.values.items():
            if blocks_count(L) == p:
                comp.values[L] = [list(c) for c in cols]
                if any(x != 0 for col in cols for x in col):
                    nonzero = True
        if nonzero:
            out[(p, f.n - 1 - p)] = comp
    return out


def split_mc(X: FiniteOperation) -> tuple[FiniteOperation, FiniteOperation]:
    """The bracket-carrying and product-carrying halves of an arity-2 element."""
    if X.n != 2:
        raise ValueError("arity 2 required")
    Xh = fo_zero(2, X.dim)
    Xh.values[EDGELESS2] = [list(c) for c in X.values[EDGELESS2]]
    Xv = fo_zero(2, X.dim)
    Xv.values[LINE2] = [list(c) for c in X.values[LINE2]]
    return Xh, Xv


def split_differential(X: FiniteOperation):
    """d = d_h + d_v: the block-raising and edge-raising halves of [X, -]."""
    if not is_mc(X):
        raise ValueError("split requires a Maurer-Cartan element")
    Xh, Xv = split_mc(X)

    def d_h(Y: FiniteOperation) -> FiniteOperation:
        return fo_bracket(Xh, Y)

    def d_v(Y: FiniteOperation) -> FiniteOperation:
        return fo_bracket(Xv, Y)

    return d_h, d_v
