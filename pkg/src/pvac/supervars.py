"""Polynomial superalgebras in supervariables and the substitution calculus.

A supervariable with index k is the tuple (lambda_k, theta_k^1, ..., theta_k^N)
of one even and N odd generators.  Two flavours share all code paths:

  W: the free supercommutative algebra (odd squares vanish);
  K: odd generators of one supervariable square to -lambda of that variable,
     distinct supervariables still anticommute.

Polynomials may take coefficients in the scalars or in a finite-dimensional
module carrying operators T (even) and S^1..S^N (odd); substitution of a
variable by a signed sum of variables and the operator tuple (T, S^i) is the
workhorse used for skew-symmetry, variable elimination, and composition.

Terms are kept in a normal form: per term, lambda exponents per variable,
then odd letters sorted by (variable, superscript), then the coefficient.
Variable indices only need to be distinct integers; negative indices serve
as auxiliary variables during composition.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import index_subsets

# one odd letter theta_k^i
Letter = tuple[int, int]
# term key: (((var, exp), ...) sorted, (Letter, ...) sorted, basis index)
TermKey = tuple[tuple[tuple[int, int], ...], tuple[Letter, ...], int]

W, K = "W", "K"


class SPoly:
    """Immutable polynomial with scalar or module coefficients.

    module=None means scalar coefficients; basis index is then 0 and even.
    """

    __slots__ = ("N", "variant", "module", "terms")

    def __init__(self, N: int, variant: str, module, terms: Mapping[TermKey, Fraction]):
        self.N = N
        self.variant = variant
        self.module = module
        self.terms = {k: v for k, v in terms.items() if v}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SPoly)
            and self.N == other.N
            and self.variant == other.variant
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.N, self.variant, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"SPoly({format_poly(self)})"

    def variables(self) -> set[int]:
        out: set[int] = set()
        for lam, theta, _ in self.terms:
            out.update(k for k, _ in lam)
            out.update(k for k, _ in theta)
        return out

    def parity(self) -> int | None:
        """Common parity of all terms, None for 0 or mixed."""
        seen: set[int] = set()
        for lam, theta, b in self.terms:
            pv = self.module.parities[b] if self.module is not None else 0
            seen.add((len(theta) + pv) % 2)
        if len(seen) == 1:
            return seen.pop()
        return None


def zero(N: int, variant: str, module=None) -> SPoly:
    return SPoly(N, variant, module, {})


def from_terms(N: int, variant: str, module, items: Iterable[tuple[TermKey, Fraction]]) -> SPoly:
    acc: dict[TermKey, Fraction] = {}
    for key, c in items:
        if not c:
            continue
        acc[key] = acc.get(key, Fraction(0)) + c
        if not acc[key]:
            del acc[key]
    return SPoly(N, variant, module, acc)


def const(N: int, variant: str, module, basis: int, c: Fraction | int = 1) -> SPoly:
    return SPoly(N, variant, module, {((), (), basis): Fraction(c)})


def one(N: int, variant: str) -> SPoly:
    return const(N, variant, None, 0)


def lam_gen(N: int, variant: str, k: int, module=None, basis: int = 0) -> SPoly:
    return SPoly(N, variant, module, {(((k, 1),), (), basis): Fraction(1)})


def theta_gen(N: int, variant: str, k: int, i: int, module=None, basis: int = 0) -> SPoly:
    if not 1 <= i <= N:
        raise ValueError(f"theta superscript {i} outside 1..{N}")
    return SPoly(N, variant, module, {((), ((k, i),), basis): Fraction(1)})


def monomial(N: int, variant: str, module, lam: Mapping[int, int], theta: Sequence[Letter], basis: int = 0, c=1) -> SPoly:
    lam_t = tuple(sorted((k, m) for k, m in lam.items() if m))
    th = tuple(theta)
    if list(th) != sorted(set(th)):
        raise ValueError("odd letters must be sorted and distinct")
    return SPoly(N, variant, module, {(lam_t, th, basis): Fraction(c)})


def add(*ps: SPoly) -> SPoly:
    ref = ps[0]
    acc: dict[TermKey, Fraction] = {}
    for p in ps:
        if p.N != ref.N or p.variant != ref.variant:
            raise ValueError("variable system mismatch")
        for key, c in p.terms.items():
            acc[key] = acc.get(key, Fraction(0)) + c
    module = next((p.module for p in ps if p.module is not None), None)
    return SPoly(ref.N, ref.variant, module, acc)


def scale(c: Fraction | int, p: SPoly) -> SPoly:
    c = Fraction(c)
    return SPoly(p.N, p.variant, p.module, {k: c * v for k, v in p.terms.items()})


def sub(p: SPoly, q: SPoly) -> SPoly:
    return add(p, scale(-1, q))


def _lam_mul(a: tuple[tuple[int, int], ...], b: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    acc = dict(a)
    for k, m in b:
        acc[k] = acc.get(k, 0) + m
    return tuple(sorted(acc.items()))


def _theta_mul(L1: Sequence[Letter], L2: Sequence[Letter], variant: str):
    """Merge sorted odd letter words; returns (sign, extra lambdas, letters) or None.

    Equal letters vanish in the W flavour and collapse to -lambda in K.
    """
    sign = 1
    extra: list[int] = []
    out: list[Letter] = []
    i, j = 0, 0
    n1 = len(L1)
    while i < n1 and j < len(L2):
        a, b = L1[i], L2[j]
        if a == b:
            if variant == W:
                return None
            # b crosses the tail of L1 to sit beside a, then theta^2 = -lambda
            if (n1 - i - 1) % 2:
                sign = -sign
            sign = -sign
            extra.append(a[0])
            i += 1
            j += 1
        elif a < b:
            out.append(a)
            i += 1
        else:
            if (n1 - i) % 2:
                sign = -sign
            out.append(b)
            j += 1
    out.extend(L1[i:])
    out.extend(L2[j:])
    return sign, extra, tuple(out)


def mul(p: SPoly, q: SPoly) -> SPoly:
    """Product; p must be scalar-valued, q scalar- or module-valued."""
    if p.N != q.N or p.variant != q.variant:
        raise ValueError("variable system mismatch")
    if p.module is not None:
        raise ValueError("left factor must have scalar coefficients")
    acc: dict[TermKey, Fraction] = {}
    for (lam1, th1, _), c1 in p.terms.items():
        for (lam2, th2, b), c2 in q.terms.items():
            merged = _theta_mul(th1, th2, p.variant)
            if merged is None:
                continue
            sign, extra, th = merged
            lam = _lam_mul(lam1, lam2)
            for k in extra:
                lam = _lam_mul(lam, ((k, 1),))
            key = (lam, th, b)
            acc[key] = acc.get(key, Fraction(0)) + sign * c1 * c2
            if not acc[key]:
                del acc[key]
    return SPoly(p.N, p.variant, q.module, acc)


def mul_many(ps: Sequence[SPoly]) -> SPoly:
    out = ps[0]
    for p in ps[1:]:
        out = mul(out, p)
    return out


def partial_lam(p: SPoly, k: int) -> SPoly:
    acc: dict[TermKey, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        d = dict(lam)
        m = d.get(k, 0)
        if not m:
            continue
        if m == 1:
            del d[k]
        else:
            d[k] = m - 1
        key = (tuple(sorted(d.items())), th, b)
        acc[key] = acc.get(key, Fraction(0)) + m * c
    return SPoly(p.N, p.variant, p.module, acc)


def partial_theta(p: SPoly, k: int, i: int) -> SPoly:
    """Left derivative: remove theta_k^i with the sign of letters before it."""
    acc: dict[TermKey, Fraction] = {}
    target = (k, i)
    for (lam, th, b), c in p.terms.items():
        if target not in th:
            continue
        idx = th.index(target)
        sign = -1 if idx % 2 else 1
        key = (lam, th[:idx] + th[idx + 1 :], b)
        acc[key] = acc.get(key, Fraction(0)) + sign * c
        if not acc[key]:
            del acc[key]
    return SPoly(p.N, p.variant, p.module, acc)


class Target:
    """The right-hand side of a substitution: sum of signed variables and optionally the operator tuple."""

    __slots__ = ("var_signs", "nabla")

    def __init__(self, var_signs: Mapping[int, int] | Sequence[tuple[int, int]], nabla: int = 0):
        self.var_signs = dict(var_signs)
        if any(s not in (1, -1) for s in self.var_signs.values()):
            raise ValueError("variable signs must be +-1")
        if nabla not in (0, 1, -1):
            raise ValueError("nabla sign must be 0 or +-1")
        self.nabla = nabla


def _mat_col(M, b: int) -> dict[int, Fraction]:
    return {r: M[r][b] for r in range(len(M)) if M[r][b]}


def _apply_S_term(i: int, lam, th, b: int, coeff: Fraction, module, corrections: frozenset[int]):
    """Left action of the odd operator S^i on one normal-form term.

    Crossing an odd letter flips the sign; in the K flavour a letter
    theta_k^i with the same superscript and k in the correction set also
    leaves the cross term 2 lambda_k behind.  At the coefficient the matrix
    S^i is applied plainly.
    """
    out = []
    for idx, (vk, vi) in enumerate(th):
        if vi == i and vk in corrections:
            sign = -1 if idx % 2 else 1
            out.append(
                (
                    _lam_mul(lam, ((vk, 1),)),
                    th[:idx] + th[idx + 1 :],
                    b,
                    coeff * 2 * sign,
                )
            )
    end_sign = -1 if len(th) % 2 else 1
    for r, entry in _mat_col(module.S[i - 1], b).items():
        out.append((lam, th, r, coeff * end_sign * entry))
    return out


def _apply_T_term(lam, th, b: int, coeff: Fraction, module):
    return [(lam, th, r, coeff * entry) for r, entry in _mat_col(module.T, b).items()]


def substitute(p: SPoly, k: int, target: Target) -> SPoly:
    """Replace the supervariable with index k throughout p.

    lambda_k^m |-> (sum of signed lambdas + signed T)^m and each odd letter
    theta_k^i |-> (sum of signed theta^i + signed S^i), the odd factors
    eliminated from the innermost letter outwards so operator parts act
    directly on the coefficient they reach.
    """
    if target.nabla and p.module is None:
        raise ValueError("operator substitution requires module coefficients")
    if target.nabla and p.module is not None and len(p.module.S) != p.N:
        raise ValueError("module operator count does not match N")
    corrections = frozenset(target.var_signs) if p.variant == K else frozenset()
    acc: dict[TermKey, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        lam_d = dict(lam)
        m = lam_d.pop(k, 0)
        rest_lam = tuple(sorted(lam_d.items()))
        block = tuple(ell for ell in th if ell[0] == k)
        others = tuple(ell for ell in th if ell[0] != k)
        post = sum(1 for ell in others if ell > (k, 0))
        sign = -1 if (len(block) * post) % 2 else 1
        # working terms live to the right of `others`; start from the bare coefficient
        work: list = [((), (), b, sign * c)]
        for _, i in reversed(block):
            nxt: list = []
            for wl, wt, wb, wc in work:
                for j, s in target.var_signs.items():
                    merged = _theta_mul(((j, i),), wt, p.variant)
                    if merged is None:
                        continue
                    ms, extra, mth = merged
                    mlam = wl
                    for ek in extra:
                        mlam = _lam_mul(mlam, ((ek, 1),))
                    nxt.append((mlam, mth, wb, wc * s * ms))
                if target.nabla:
                    for t in _apply_S_term(i, wl, wt, wb, wc * target.nabla, p.module, corrections):
                        nxt.append(t)
            work = nxt
        for _ in range(m):
            nxt = []
            for wl, wt, wb, wc in work:
                for j, s in target.var_signs.items():
                    nxt.append((_lam_mul(wl, ((j, 1),)), wt, wb, wc * s))
                if target.nabla:
                    for t in _apply_T_term(wl, wt, wb, wc * target.nabla, p.module):
                        nxt.append(t)
            work = nxt
        for wl, wt, wb, wc in work:
            if not wc:
                continue
            merged = _theta_mul(others, wt, p.variant)
            if merged is None:
                continue
            ms, extra, mth = merged
            mlam = _lam_mul(rest_lam, wl)
            for ek in extra:
                mlam = _lam_mul(mlam, ((ek, 1),))
            key = (mlam, mth, wb)
            acc[key] = acc.get(key, Fraction(0)) + ms * wc
            if not acc[key]:
                del acc[key]
    return SPoly(p.N, p.variant, p.module, acc)


def rename_var(p: SPoly, k: int, j: int) -> SPoly:
    if k == j:
        return p
    return substitute(p, k, Target({j: 1}))


def residue(p: SPoly, k: int | None = None) -> dict[int, Fraction]:
    """Coefficient of lambda^0 theta^{1..N} in a one-variable polynomial."""
    if k is None:
        vs = p.variables()
        if len(vs) > 1:
            raise ValueError("residue needs a single-variable polynomial")
        k = vs.pop() if vs else 1
    full = tuple((k, i) for i in range(1, p.N + 1))
    out: dict[int, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        if lam == () and th == full:
            out[b] = out.get(b, Fraction(0)) + c
    return {b: c for b, c in out.items() if c}


def _op_power_apply(M, power: int, vec: dict[int, Fraction], dim: int) -> dict[int, Fraction]:
    cur = dict(vec)
    for _ in range(power):
        nxt: dict[int, Fraction] = {}
        for b, c in cur.items():
            for r in range(dim):
                if M[r][b]:
                    nxt[r] = nxt.get(r, Fraction(0)) + M[r][b] * c
        cur = nxt
    return cur


def integrate(F, G, p: SPoly, k: int | None = None) -> dict[int, Fraction]:
    """Definite integral over the odd directions and from F to G in the even one.

    F and G are even matrices on the coefficient module (0 is allowed as a
    shorthand for the zero matrix).  A term lambda^m theta^I v contributes
    only for I = {1..N}, giving (G^{m+1} - F^{m+1}) v / (m+1).
    """
    if p.module is None:
        raise ValueError("integration needs module coefficients")
    dim = len(p.module.parities)
    if F == 0:
        F = [[Fraction(0)] * dim for _ in range(dim)]
    if G == 0:
        G = [[Fraction(0)] * dim for _ in range(dim)]
    if k is None:
        vs = p.variables()
        if len(vs) > 1:
            raise ValueError("integrate needs a single-variable polynomial")
        k = vs.pop() if vs else 1
    full = tuple((k, i) for i in range(1, p.N + 1))
    out: dict[int, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        if th != full:
            continue
        m = dict(lam).get(k, 0)
        gpart = _op_power_apply(G, m + 1, {b: c}, dim)
        fpart = _op_power_apply(F, m + 1, {b: c}, dim)
        for r, v in gpart.items():
            out[r] = out.get(r, Fraction(0)) + v / (m + 1)
        for r, v in fpart.items():
            out[r] = out.get(r, Fraction(0)) - v / (m + 1)
    return {b: c for b, c in out.items() if c}


def theta_set_poly(N: int, variant: str, k: int, I: Sequence[int]) -> SPoly:
    """The ascending product theta_k^{i_1} ... theta_k^{i_r} as a scalar polynomial."""
    letters = tuple((k, i) for i in sorted(I))
    return SPoly(N, variant, None, {((), letters, 0): Fraction(1)})


def nabla_t(p: SPoly) -> SPoly:
    """T acting on a module-valued polynomial (even, crosses letters freely)."""
    if p.module is None:
        raise ValueError("module coefficients required")
    acc: dict[TermKey, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        for wl, wt, wb, wc in _apply_T_term(lam, th, b, c, p.module):
            key = (wl, wt, wb)
            acc[key] = acc.get(key, Fraction(0)) + wc
            if not acc[key]:
                del acc[key]
    return SPoly(p.N, p.variant, p.module, acc)


def nabla_s(p: SPoly, i: int) -> SPoly:
    """S^i acting from the left on a module-valued polynomial.

    It anticommutes past odd letters; in the K flavour, crossing theta_k^i of
    the same superscript additionally leaves 2 lambda_k behind, for every
    variable k.  This is the operator action induced on reduced
    representatives by variable elimination, so it matches substitute.
    """
    if p.module is None:
        raise ValueError("module coefficients required")
    acc: dict[TermKey, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        corr = frozenset(k for k, _ in th) if p.variant == K else frozenset()
        for wl, wt, wb, wc in _apply_S_term(i, lam, th, b, c, p.module, corr):
            key = (wl, wt, wb)
            acc[key] = acc.get(key, Fraction(0)) + wc
            if not acc[key]:
                del acc[key]
    return SPoly(p.N, p.variant, p.module, acc)


def coefficient_map(p: SPoly, fn) -> SPoly:
    """Apply a linear basis->poly-free map fn(basis)->dict[basis,Fraction] to coefficients."""
    acc: dict[TermKey, Fraction] = {}
    for (lam, th, b), c in p.terms.items():
        for nb, nc in fn(b).items():
            key = (lam, th, nb)
            acc[key] = acc.get(key, Fraction(0)) + c * nc
            if not acc[key]:
                del acc[key]
    return SPoly(p.N, p.variant, p.module, acc)


def format_poly(p: SPoly, names: Sequence[str] | None = None) -> str:
    if not p.terms:
        return "0"
    bits = []
    for (lam, th, b), c in sorted(p.terms.items()):
        factors = []
        for k, m in lam:
            v = f"l{k}" if k > 0 else f"L{-k}"
            factors.append(v if m == 1 else f"{v}^{m}")
        for k, i in th:
            v = f"t{k}" if k > 0 else f"H{-k}"
            factors.append(f"{v}^{i}")
        if p.module is not None:
            factors.append(names[b] if names else f"e{b}")
        body = "*".join(factors) if factors else "1"
        bits.append(f"({c})*{body}")
    return " + ".join(bits)


def skew_vars_swap(p: SPoly) -> SPoly:
    """Exchange the roles of variables 1 and 2 via a fresh intermediate index."""
    tmp = -10**6
    q = rename_var(p, 1, tmp)
    q = rename_var(q, 2, 1)
    return rename_var(q, tmp, 2)


def subsets(N: int):
    return list(index_subsets(N))
