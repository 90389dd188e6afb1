"""Finite-dimensional modules over the operator superalgebras H_W and H_K.

A module carries one even operator T and N odd operators S^1..S^N subject to

    W:  T S^i = S^i T,   S^i S^j + S^j S^i = 0
    K:  T S^i = S^i T,   S^i S^j + S^j S^i = 2 delta_{ij} T

together with the parity constraints (T even, S^i odd).  Tensor powers act
slotwise with Koszul signs, and reduce eliminates the last supervariable of
a polynomial via lambda_n |-> -(lambda_1+..+lambda_{n-1}) - T and the odd
analogue, which is the canonical representative used everywhere downstream.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import supervars
from .linalg import mat_mul, mat_add, mat_scale, zeros
from .supervars import SPoly, Target


@dataclass(frozen=True)
class HModule:
    parities: tuple[int, ...]
    T: tuple[tuple[Fraction, ...], ...]
    S: tuple[tuple[tuple[Fraction, ...], ...], ...]
    variant: str
    names: tuple[str, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def N(self) -> int:
        return len(self.S)


def make_module(parities, T, S, variant, names=None) -> HModule:
    T = tuple(tuple(Fraction(x) for x in row) for row in T)
    S = tuple(tuple(tuple(Fraction(x) for x in row) for row in m) for m in S)
    return HModule(tuple(int(p) % 2 for p in parities), T, S, variant, tuple(names) if names else None)


def zero_module(dim: int, parities, N: int, variant: str) -> HModule:
    z = [[Fraction(0)] * dim for _ in range(dim)]
    return make_module(parities, z, [z] * N, variant)


def parity_shift(V: HModule, k: int = 1) -> HModule:
    if k % 2 == 0:
        return V
    return HModule(tuple((p + 1) % 2 for p in V.parities), V.T, V.S, V.variant, V.names)


def check_h_action(V: HModule) -> list[str]:
    """All defining relations as exact matrix identities; empty list means pass."""
    fails: list[str] = []
    d = V.dim
    T = [list(r) for r in V.T]
    Ss = [[list(r) for r in m] for m in V.S]
    for r in range(d):
        for c in range(d):
            if T[r][c] and (V.parities[r] + V.parities[c]) % 2:
                fails.append(f"T not even at ({r},{c})")
            for i, S in enumerate(Ss):
                if S[r][c] and (V.parities[r] + V.parities[c]) % 2 == 0:
                    fails.append(f"S^{i+1} not odd at ({r},{c})")
    for i, S in enumerate(Ss):
        lhs = mat_mul(T, S)
        rhs = mat_mul(S, T)
        if lhs != rhs:
            fails.append(f"T S^{i+1} != S^{i+1} T")
    for i in range(len(Ss)):
        for j in range(i, len(Ss)):
            anti = mat_add(mat_mul(Ss[i], Ss[j]), mat_mul(Ss[j], Ss[i]))
            if V.variant == supervars.W:
                want = zeros(d, d)
            else:
                want = mat_scale(Fraction(2 if i == j else 0), T)
            if anti != want:
                fails.append(f"S^{i+1} S^{j+1} + S^{j+1} S^{i+1} relation fails")
    return fails


def tensor_basis(V: HModule, m: int) -> list[tuple[int, ...]]:
    return [tuple(t) for t in product(range(V.dim), repeat=m)]


def tensor_parity(V: HModule, idx: tuple[int, ...]) -> int:
    return sum(V.parities[b] for b in idx) % 2


def slot_op(V: HModule, m: int, slot: int, mat, odd: bool) -> dict[tuple[int, ...], dict[tuple[int, ...], Fraction]]:
    """The operator 1 x .. x phi x .. x 1 on V^{x m} in sparse column form.

    Acting on v_1 x .. x v_m, an odd phi in slot `slot` (1-based) picks up
    (-1)^{p(v_1)+..+p(v_{slot-1})}.
    """
    cols: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    for idx in tensor_basis(V, m):
        sign = 1
        if odd and sum(V.parities[b] for b in idx[: slot - 1]) % 2:
            sign = -1
        col: dict[tuple[int, ...], Fraction] = {}
        b = idx[slot - 1]
        for r in range(V.dim):
            if mat[r][b]:
                out = idx[: slot - 1] + (r,) + idx[slot:]
                col[out] = col.get(out, Fraction(0)) + sign * mat[r][b]
        cols[idx] = col
    return cols


def apply_slot_op(V: HModule, m: int, slot: int, mat, odd: bool, vec: dict[tuple[int, ...], Fraction]) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for idx, c in vec.items():
        sign = 1
        if odd and sum(V.parities[b] for b in idx[: slot - 1]) % 2:
            sign = -1
        b = idx[slot - 1]
        for r in range(V.dim):
            if mat[r][b]:
                key = idx[: slot - 1] + (r,) + idx[slot:]
                out[key] = out.get(key, Fraction(0)) + sign * mat[r][b] * c
    return {k: v for k, v in out.items() if v}


def reduction_target(n: int) -> Target:
    """Lambda_n |-> -Lambda_1 - .. - Lambda_{n-1} - nabla."""
    return Target({j: -1 for j in range(1, n)}, nabla=-1)


def reduce(p: SPoly, n: int) -> SPoly:
    """Canonical representative: eliminate variable n.

    For n=1 the target is just -nabla.
    """
    return supervars.substitute(p, n, reduction_target(n))
