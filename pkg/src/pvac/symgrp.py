"""Group algebras of symmetric groups, shuffles, and Eulerian idempotents.

Convolution lives on degree-indexed series of group algebra elements,
modelling degree-preserving endomorphisms of the tensor coalgebra: apply the
two factors to the two halves of each deconcatenation, then shuffle.  Both
the plain and the sign-weighted shuffle products are supported; the signed
one is what the suspension introduces, and is the flavour under which the
idempotents cut the Hochschild complex of a commutative algebra into
subcomplexes.

e^(1) is the convolution logarithm of the identity, computed as the
alternating series in J = id - unit counit (which starts in degree 1, so
every degree-n component is a finite sum), and e^(p) = (e^(1))^{*p} / p!.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import Perm, compose_perm, identity_perm, perm_sign

GA = dict[Perm, Fraction]
Series = list[GA]  # index = degree


def shuffles(m: int, n: int) -> list[Perm]:
    """Permutations of [m+n] increasing on the first m and last n positions."""
    out = []
    whole = range(m + n)
    for first in combinations(whole, m):
        rest = [i for i in whole if i not in first]
        out.append(tuple(list(first) + rest))
    return out


def ga_add(x: GA, y: GA) -> GA:
    out = dict(x)
    for p, c in y.items():
        out[p] = out.get(p, Fraction(0)) + c
        if not out[p]:
            del out[p]
    return out


def ga_scale(c, x: GA) -> GA:
    c = Fraction(c)
    return {p: c * v for p, v in x.items() if c * v}


def ga_mul(x: GA, y: GA) -> GA:
    out: GA = {}
    for p, a in x.items():
        for q, b in y.items():
            r = compose_perm(p, q)
            out[r] = out.get(r, Fraction(0)) + a * b
            if not out[r]:
                del out[r]
    return out


def sign_twist(x: GA) -> GA:
    return {p: perm_sign(p) * c for p, c in x.items()}


def juxtapose(p: Perm, q: Perm) -> Perm:
    np = len(p)
    return p + tuple(np + v for v in q)


def convolve(f: Series, g: Series, nmax: int, signed: bool = False) -> Series:
    out: Series = [dict() for _ in range(nmax + 1)]
    for n in range(nmax + 1):
        acc: GA = {}
        for p in range(n + 1):
            q = n - p
            if p >= len(f) or q >= len(g) or not f[p] or not g[q]:
                continue
            block = {}
            for a, ca in f[p].items():
                for b, cb in g[q].items():
                    block[juxtapose(a, b)] = ca * cb
            for sigma in shuffles(p, q):
                w = Fraction(perm_sign(sigma)) if signed else Fraction(1)
                for t, ct in block.items():
                    r = compose_perm(sigma, t)
                    acc[r] = acc.get(r, Fraction(0)) + w * ct
        out[n] = {k: v for k, v in acc.items() if v}
    return out


def identity_series(nmax: int) -> Series:
    return [{identity_perm(n): Fraction(1)} for n in range(nmax + 1)]


def j_series(nmax: int) -> Series:
    """id minus unit-counit: vanishes in degree 0, identity above."""
    out = identity_series(nmax)
    out[0] = {}
    return out


def convolution_power(f: Series, k: int, nmax: int, signed: bool) -> Series:
    out: Series = [{} for _ in range(nmax + 1)]
    out[0] = {(): Fraction(1)}
    for _ in range(k):
        out = convolve(out, f, nmax, signed)
    return out


@lru_cache(maxsize=None)
def _eulerian_table(nmax: int, signed: bool) -> tuple:
    j = j_series(nmax)
    e1: Series = [{} for _ in range(nmax + 1)]
    jp = convolution_power(j, 0, nmax, signed)
    for k in range(1, nmax + 1):
        jp = convolve(jp, j, nmax, signed)
        c = Fraction((-1) ** (k + 1), k)
        for n in range(nmax + 1):
            for p, v in jp[n].items():
                e1[n][p] = e1[n].get(p, Fraction(0)) + c * v
    e1 = [{p: v for p, v in comp.items() if v} for comp in e1]
    table = [e1]
    power = e1
    fact = 1
    for p in range(2, nmax + 1):
        power = convolve(power, e1, nmax, signed)
        fact *= p
        table.append([ga_scale(Fraction(1, fact), comp) for comp in power])
    return tuple(tuple(series) for series in table)


def eulerian(n: int, signed: bool = False, bound: int = 7) -> list[GA]:
    """The idempotents e^(1)_n .. e^(n)_n in the group algebra of S_n."""
    if n < 1:
        raise ValueError("degree must be positive")
    if n > bound:
        raise ValueError(f"degree {n} exceeds the configured bound {bound}")
    table = _eulerian_table(n, signed)
    return [dict(table[p - 1][n]) for p in range(1, n + 1)]


def shuffle_sum(r: int, s: int, signed: bool = False) -> GA:
    """The shuffle-set sum s_{r,s} in the group algebra, optionally sign-weighted."""
    out: GA = {}
    for sigma in shuffles(r, s):
        out[sigma] = Fraction(perm_sign(sigma)) if signed else Fraction(1)
    return out
