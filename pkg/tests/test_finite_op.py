import math
import random
from fractions import Fraction
from math import gcd

import pytest

from pvac import linalg
from pvac.core import all_perms, compose_perm, invert_perm, perm_sign, permute_items
from pvac.finite_op import (
    EDGELESS2,
    LINE2,
    FiniteOperation,
    PoissonPresentation,
    bigrade,
    check_poisson,
    cols_add,
    cols_scale,
    differential,
    fo_act,
    fo_add,
    fo_box,
    fo_compose,
    fo_eq,
    fo_eval_quiver,
    fo_identity,
    fo_insert_first,
    fo_scale,
    fo_zero,
    is_mc,
    is_sign_invariant,
    mc_failure_witness,
    mc_from_poisson,
    poisson_from_mc,
    sgn_symmetrize,
    split_differential,
    split_mc,
    tensor_index,
    tensor_tuples,
    zero_cols,
)
from pvac.quiver import (
    blocks_count,
    line_partitions,
    line_quiver,
    parse_quiver,
)


def rand_op(rng, n, dim, density=0.4, span=2):
    f = fo_zero(n, dim)
    for L in line_partitions(n):
        cols = f.values[L]
        for j in range(dim**n):
            for r in range(dim):
                if rng.random() < density:
                    cols[j][r] = Fraction(rng.randrange(-span, span + 1))
    return f


def rand_invariant(rng, n, dim, **kw):
    return sgn_symmetrize(rand_op(rng, n, dim, **kw))


def kg_poisson():
    """K + g for the nonabelian 2-dimensional Lie algebra, g an ideal squaring to zero.

    Basis: e0 the unit of the K summand, e1 = x, e2 = y with [x, y] = x.
    Product: (a, u)(b, v) = (ab, av + bu).  Bracket: componentwise on g.
    """
    prod_cols = zero_cols(3, 9)
    br_cols = zero_cols(3, 9)
    for i, j, k in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2)]:
        prod_cols[i * 3 + j][k] = Fraction(1)
    br_cols[1 * 3 + 2][1] = Fraction(1)
    br_cols[2 * 3 + 1][1] = Fraction(-1)
    return PoissonPresentation(3, prod_cols, br_cols)


def eval_cols(cols, dim, vecs):
    out = [Fraction(0)] * dim
    for j, t in enumerate(tensor_tuples(dim, len(vecs))):
        w = Fraction(1)
        for k, i in enumerate(t):
            w *= vecs[k][i]
            if not w:
                break
        if w:
            for r in range(dim):
                out[r] += w * cols[j][r]
    return out


def basis_vectors(dim):
    return [[Fraction(i == r) for r in range(dim)] for i in range(dim)]


def vadd(u, v):
    return [x + y for x, y in zip(u, v)]


def vscale(c, u):
    return [c * x for x in u]


def test_tensor_index_round_trip():
    for j, t in enumerate(tensor_tuples(3, 3)):
        assert tensor_index(t, 3) == j


def test_identity_composition():
    rng = random.Random(1)
    f = rand_op(rng, 3, 2)
    ident = fo_identity(2)
    assert fo_eq(fo_compose(f, [ident] * 3), f)
    assert fo_eq(fo_compose(ident, [f]), f)


def test_composition_arity_mismatch():
    rng = random.Random(2)
    f = rand_op(rng, 2, 2)
    with pytest.raises(ValueError):
        fo_compose(f, [fo_identity(2)])


def test_composition_associativity():
    rng = random.Random(3)
    f = rand_op(rng, 2, 2, density=0.3)
    g1 = rand_op(rng, 2, 2, density=0.3)
    g2 = rand_op(rng, 1, 2, density=0.5)
    h1 = rand_op(rng, 1, 2, density=0.5)
    h2 = rand_op(rng, 2, 2, density=0.3)
    h3 = rand_op(rng, 1, 2, density=0.5)
    left = fo_compose(fo_compose(f, [g1, g2]), [h1, h2, h3])
    right = fo_compose(f, [fo_compose(g1, [h1, h2]), fo_compose(g2, [h3])])
    assert fo_eq(left, right)


def block_perm(sigma, nu):
    """The relabelling of composite inputs induced by permuting the outer slots."""
    m = len(sigma)
    nu_lhs = [nu[sigma[j]] for j in range(m)]
    lhs_start = [0]
    for a in nu_lhs:
        lhs_start.append(lhs_start[-1] + a)
    h_start = [0]
    for a in nu:
        h_start.append(h_start[-1] + a)
    tau = [0] * sum(nu)
    for k in range(m):
        j = sigma.index(k)
        for r in range(nu[k]):
            tau[lhs_start[j] + r] = h_start[k] + r
    return tuple(tau)


def test_equivariance_block_relabelling():
    rng = random.Random(4)
    cases = [
        ((2, 1), (1, 0)),
        ((2, 1), (0, 1)),
        ((1, 2, 1), (1, 2, 0)),
        ((1, 2, 1), (0, 2, 1)),
    ]
    for nu, sigma in cases:
        m = len(nu)
        f = rand_op(rng, m, 2, density=0.3)
        gs = [rand_op(rng, k, 2, density=0.4) for k in nu]
        lhs = fo_compose(fo_act(sigma, f), [gs[sigma[j]] for j in range(m)])
        rhs = fo_act(block_perm(sigma, nu), fo_compose(f, gs))
        assert fo_eq(lhs, rhs)


def test_eval_quiver_relations():
    rng = random.Random(5)
    f = rand_op(rng, 2, 2)
    rev = fo_eval_quiver(f, parse_quiver("2; 2>1"))
    assert rev == cols_scale(-1, f.values[LINE2])
    g = rand_op(rng, 3, 2)
    assert fo_eval_quiver(g, parse_quiver("3; 1>2, 2>3, 3>1")) == zero_cols(2, 8)
    h = rand_op(rng, 2, 2)
    assert fo_eval_quiver(h, parse_quiver("2; 1>2, 1>2")) == zero_cols(2, 4)


def test_action_composition_law():
    rng = random.Random(6)
    f = rand_op(rng, 3, 2, density=0.3)
    for sigma in all_perms(3):
        for tau in all_perms(3):
            left = fo_act(tau, fo_act(sigma, f))
            right = fo_act(compose_perm(sigma, tau), f)
            assert fo_eq(left, right)


def test_symmetrize_projects_to_invariants():
    rng = random.Random(7)
    raw = rand_op(rng, 3, 2)
    assert not is_sign_invariant(raw)
    inv = sgn_symmetrize(raw)
    assert is_sign_invariant(inv)
    assert not inv.is_zero()
    assert fo_eq(sgn_symmetrize(inv), inv)


def test_box_rejects_noninvariant():
    rng = random.Random(8)
    raw = rand_op(rng, 2, 2)
    inv = sgn_symmetrize(rand_op(rng, 2, 2))
    with pytest.raises(ValueError):
        fo_box(raw, inv)
    with pytest.raises(ValueError):
        fo_box(inv, raw)


def test_kg_poisson_is_mc():
    P = kg_poisson()
    assert check_poisson(P) == []
    X = mc_from_poisson(P)
    assert is_sign_invariant(X)
    assert is_mc(X)
    assert mc_failure_witness(X) is None


def test_perturbed_product_fails_both_routes():
    P = kg_poisson()
    # e1*e1 = e0 keeps commutativity and associativity but breaks Leibniz
    P.product[1 * 3 + 1][0] = Fraction(1)
    bad = check_poisson(P)
    assert any("Leibniz" in msg for msg in bad)
    X = mc_from_poisson(P)
    assert not is_mc(X)
    witness = mc_failure_witness(X)
    assert witness in line_partitions(3)


def rand_poisson_candidate(rng, dim, density=0.4, span=1):
    prod_cols = zero_cols(dim, dim * dim)
    br_cols = zero_cols(dim, dim * dim)
    for i in range(dim):
        for j in range(i, dim):
            for r in range(dim):
                if rng.random() < density:
                    c = Fraction(rng.randrange(-span, span + 1))
                    prod_cols[i * dim + j][r] = c
                    prod_cols[j * dim + i][r] = c
                if j > i and rng.random() < density:
                    c = Fraction(rng.randrange(-span, span + 1))
                    br_cols[i * dim + j][r] = c
                    br_cols[j * dim + i][r] = -c
    return PoissonPresentation(dim, prod_cols, br_cols)


def test_mc_poisson_equivalence_random():
    rng = random.Random(9)
    hits = {True: 0, False: 0}
    samples = [kg_poisson(), PoissonPresentation(2, zero_cols(2, 4), zero_cols(2, 4))]
    samples += [rand_poisson_candidate(rng, rng.choice([2, 3])) for _ in range(24)]
    for P in samples:
        ok = check_poisson(P) == []
        assert is_mc(mc_from_poisson(P)) == ok
        hits[ok] += 1
    assert hits[True] >= 2 and hits[False] >= 2


def test_round_trips():
    rng = random.Random(10)
    P = kg_poisson()
    Q = poisson_from_mc(mc_from_poisson(P))
    assert Q.product == P.product and Q.bracket == P.bracket
    X = sgn_symmetrize(rand_op(rng, 2, 3))
    assert fo_eq(mc_from_poisson(poisson_from_mc(X)), X)


def test_bigrade_decomposition():
    rng = random.Random(11)
    f = rand_invariant(rng, 3, 2)
    parts = bigrade(f)
    assert set(parts) <= {(1, 1), (2, 0), (3, -1)}
    assert fo_eq(fo_add(*parts.values()), f)
    for (p, q), comp in parts.items():
        assert is_sign_invariant(comp)
        for L, cols in comp.values.items():
            if any(x for col in cols for x in col):
                assert blocks_count(L) == p
    X = mc_from_poisson(kg_poisson())
    assert set(bigrade(X)) == {(1, 0), (2, -1)}


def test_differential_requires_mc():
    P = kg_poisson()
    P.product[1 * 3 + 1][0] = Fraction(1)
    X = mc_from_poisson(P)
    Y = fo_identity(3)
    with pytest.raises(ValueError):
        differential(X, Y)
    with pytest.raises(ValueError):
        split_differential(X)


def hochschild_type(P, F, n):
    """Edge-raising half evaluated directly: the two-sided multiplication sum."""
    dim = P.dim
    basis = basis_vectors(dim)
    sign = Fraction((-1) ** (n + 1))
    cols = []
    for t in tensor_tuples(dim, n + 1):
        vs = [basis[i] for i in t]
        val = P.multiply(vs[0], eval_cols(F, dim, vs[1:]))
        for j in range(1, n + 1):
            mid = vs[: j - 1] + [P.multiply(vs[j - 1], vs[j])] + vs[j + 1 :]
            val = vadd(val, vscale(Fraction((-1) ** j), eval_cols(F, dim, mid)))
        last = P.multiply(eval_cols(F, dim, vs[:n]), vs[n])
        val = vadd(val, vscale(Fraction((-1) ** (n + 1)), last))
        cols.append(vscale(sign, val))
    return cols


def ce_type(P, F, n):
    """Block-raising half evaluated directly: the bracket-insertion sum.

    The prefactor matches the edge-raising half; checked by hand at n = 1.
    """
    dim = P.dim
    basis = basis_vectors(dim)
    sign = Fraction((-1) ** (n + 1))
    cols = []
    for t in tensor_tuples(dim, n + 1):
        vs = [basis[i] for i in t]
        val = [Fraction(0)] * dim
        for j in range(1, n + 2):
            rest = vs[: j - 1] + vs[j:]
            term = P.brack(vs[j - 1], eval_cols(F, dim, rest))
            val = vadd(val, vscale(Fraction((-1) ** (j - 1)), term))
        for j in range(1, n + 2):
            for k in range(j + 1, n + 2):
                rest = [P.brack(vs[j - 1], vs[k - 1])] + [
                    vs[i] for i in range(n + 1) if i not in (j - 1, k - 1)
                ]
                term = eval_cols(F, dim, rest)
                val = vadd(val, vscale(Fraction((-1) ** (j + k)), term))
        cols.append(vscale(sign, val))
    return cols


def chain_line(n):
    return (tuple(range(1, n + 1)),)


def edgeless_line(n):
    return tuple((i,) for i in range(1, n + 1))


def test_split_differential_matches_direct_formulas():
    """The two halves, restricted to the extreme columns, are the classical sums.

    An invariant operation concentrated on the full chain is a single
    multilinear map; the edge-raising half must act on it by the two-sided
    multiplication formula.  Concentrated on the edgeless line it is an
    alternating map and the block-raising half must act by the bracket
    insertion formula.  Mixed supports only have their bidegree shifts
    checked here; the cell-by-cell matching runs against the cochain side.
    """
    P = kg_poisson()
    X = mc_from_poisson(P)
    d_h, d_v = split_differential(X)
    rng = random.Random(12)
    for arity in (1, 2, 3):
        Y = rand_invariant(rng, arity, 3, density=0.25, span=1)
        for (p, _), comp in bigrade(Y).items():
            dv = d_v(comp)
            for L, cols in dv.values.items():
                if any(x for col in cols for x in col):
                    assert blocks_count(L) == p
            dh = d_h(comp)
            for L, cols in dh.values.items():
                if any(x for col in cols for x in col):
                    assert blocks_count(L) == p + 1
            if p == 1:
                F = comp.values[chain_line(arity)]
                assert dv.values[chain_line(arity + 1)] == hochschild_type(P, F, arity)
            if p == arity:
                F = comp.values[edgeless_line(arity)]
                assert dh.values[edgeless_line(arity + 1)] == ce_type(P, F, arity)


def test_differential_squares_to_zero():
    P = kg_poisson()
    X = mc_from_poisson(P)
    d_h, d_v = split_differential(X)
    rng = random.Random(13)
    Y = rand_invariant(rng, 2, 3, density=0.25, span=1)
    assert differential(X, differential(X, Y)).is_zero()
    assert d_h(d_h(Y)).is_zero()
    assert d_v(d_v(Y)).is_zero()
    assert fo_add(d_h(d_v(Y)), d_v(d_h(Y))).is_zero()


def action_matrix(sigma, n, dim):
    """The permutation action on the joint line-and-tensor index, reduced to lines."""
    lines = line_partitions(n)
    tuples = tensor_tuples(dim, n)
    idx = {(L, t): k for k, (L, t) in enumerate((L, t) for L in lines for t in tuples)}
    D = len(idx)
    A = linalg.zeros(D, D)
    from pvac.quiver import act_quiver, reduce_quiver

    for L in lines:
        red = reduce_quiver(act_quiver(sigma, line_quiver(L, n)))
        for t in tuples:
            row = idx[(L, t)]
            st = permute_items(sigma, t)
            for L2, c in red.items():
                A[row][idx[(L2, st)]] += c
    return A, idx


def sparse_nullity(rows, ncols):
    """Nullity of an integer matrix given as sparse rows, by fraction-free elimination."""
    pivots = {}
    rank = 0
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            if c not in pivots:
                pivots[c] = row
                rank += 1
                break
            p = pivots[c]
            a, b = p[c], row[c]
            new = {}
            for k in set(row) | set(p):
                v = a * row.get(k, 0) - b * p.get(k, 0)
                if v:
                    new[k] = v
            g = 0
            for v in new.values():
                g = gcd(g, v)
            row = {k: v // g for k, v in new.items()} if g else {}
    return ncols - rank


def invariant_dims_dense(n, dim):
    lines = line_partitions(n)
    D = len(lines) * dim**n
    perms = list(all_perms(n))
    P = linalg.zeros(D, D)
    for sigma in perms:
        A, _ = action_matrix(sigma, n, dim)
        s = Fraction(perm_sign(sigma), math.factorial(n))
        for i in range(D):
            for j in range(D):
                P[i][j] += s * A[i][j]
    by_projection = linalg.rank(P)
    rows = []
    for k in range(n - 1):
        tau = list(range(n))
        tau[k], tau[k + 1] = tau[k + 1], tau[k]
        tau = tuple(tau)
        A, _ = action_matrix(tau, n, dim)
        s = perm_sign(tau)
        for i in range(D):
            row = [A[i][j] - (s if i == j else 0) for j in range(D)]
            rows.append(row)
    by_nullspace = len(linalg.nullspace(rows)) if rows else D
    return by_projection, by_nullspace


def invariant_dim_trace(n, dim):
    from pvac.quiver import act_quiver, reduce_quiver

    total = Fraction(0)
    for sigma in all_perms(n):
        diag = Fraction(0)
        for L in line_partitions(n):
            red = reduce_quiver(act_quiver(sigma, line_quiver(L, n)))
            diag += red.get(L, Fraction(0))
        seen = set()
        cycles = 0
        for i in range(n):
            if i not in seen:
                cycles += 1
                j = i
                while j not in seen:
                    seen.add(j)
                    j = sigma[j]
        total += Fraction(perm_sign(sigma)) * diag * dim**cycles
    return total / math.factorial(n)


def invariant_dim_sparse_nullity(n, dim):
    from pvac.quiver import act_quiver, reduce_quiver

    lines = line_partitions(n)
    tuples = tensor_tuples(dim, n)
    idx = {(L, t): k for k, (L, t) in enumerate((L, t) for L in lines for t in tuples)}
    rows = []
    for k in range(n - 1):
        tau = list(range(n))
        tau[k], tau[k + 1] = tau[k + 1], tau[k]
        tau = tuple(tau)
        s = perm_sign(tau)
        for L in lines:
            red = reduce_quiver(act_quiver(tau, line_quiver(L, n)))
            for t in tuples:
                row = {}
                st = permute_items(tau, t)
                for L2, c in red.items():
                    row[idx[(L2, st)]] = row.get(idx[(L2, st)], 0) + int(c)
                col = idx[(L, t)]
                row[col] = row.get(col, 0) - s
                rows.append(row)
    return sparse_nullity(rows, len(idx))


def test_invariant_dimension_two_constructions():
    for n, dim in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]:
        proj, nul = invariant_dims_dense(n, dim)
        assert proj == nul
        assert invariant_dim_trace(n, dim) == proj
        assert invariant_dim_sparse_nullity(n, dim) == proj


def test_invariant_dimension_n4_dim2():
    assert invariant_dim_trace(4, 2) == invariant_dim_sparse_nullity(4, 2)
