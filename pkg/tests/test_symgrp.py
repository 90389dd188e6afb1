import math
from fractions import Fraction

import pytest

from pvac.core import all_perms, identity_perm, perm_sign, permute_items
from pvac.symgrp import (
    convolve,
    eulerian,
    ga_add,
    ga_mul,
    ga_scale,
    identity_series,
    j_series,
    shuffle_sum,
    shuffles,
    sign_twist,
)


def apply_ga(x, word):
    out = {}
    for p, c in x.items():
        w = permute_items(p, word)
        out[w] = out.get(w, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def shuffle_words(x, y, signed):
    """All interleavings of two words; in the signed flavour each letter of y
    moved to the front crosses all remaining letters of x."""
    if not x:
        return {y: Fraction(1)}
    if not y:
        return {x: Fraction(1)}
    out = {}
    for w, c in shuffle_words(x[1:], y, signed).items():
        out[(x[0],) + w] = out.get((x[0],) + w, Fraction(0)) + c
    s = Fraction(-1 if signed and len(x) % 2 else 1)
    for w, c in shuffle_words(x, y[1:], signed).items():
        out[(y[0],) + w] = out.get((y[0],) + w, Fraction(0)) + s * c
    return {k: v for k, v in out.items() if v}


def deconcat(word, k):
    if k == 1:
        return [(word,)]
    out = []
    for i in range(len(word) + 1):
        for rest in deconcat(word[i:], k - 1):
            out.append((word[:i],) + rest)
    return out


def mu_delta_power(word, k, signed):
    """The k-fold deconcatenate-then-shuffle endomorphism, evaluated directly."""
    out = {}
    for cut in deconcat(word, k):
        partial = {cut[0]: Fraction(1)}
        for blk in cut[1:]:
            nxt = {}
            for w, c in partial.items():
                for w2, c2 in shuffle_words(w, blk, signed).items():
                    nxt[w2] = nxt.get(w2, Fraction(0)) + c * c2
            partial = nxt
        for w, c in partial.items():
            out[w] = out.get(w, Fraction(0)) + c
    return {k2: v for k2, v in out.items() if v}


class TestShuffles:
    def test_counts_and_monotonicity(self):
        for m in range(4):
            for n in range(4):
                sh = shuffles(m, n)
                assert len(sh) == math.comb(m + n, m)
                for p in sh:
                    assert list(p[:m]) == sorted(p[:m])
                    assert list(p[m:]) == sorted(p[m:])

    def test_degenerate(self):
        assert shuffles(0, 3) == [identity_perm(3)]
        assert shuffles(3, 0) == [identity_perm(3)]


class TestConvolution:
    def test_id_star_id_degree_two(self):
        ident = identity_series(3)
        star = convolve(ident, ident, 3, signed=False)
        assert star[2] == {(0, 1): Fraction(3), (1, 0): Fraction(1)}
        star_s = convolve(ident, ident, 3, signed=True)
        assert star_s[2] == {(0, 1): Fraction(3), (1, 0): Fraction(-1)}

    @pytest.mark.parametrize("signed", [False, True])
    def test_matches_tensor_coalgebra_model(self, signed):
        ident = identity_series(4)
        star2 = convolve(ident, ident, 4, signed)
        star3 = convolve(star2, ident, 4, signed)
        for n in range(1, 5):
            word = tuple(range(n))
            assert apply_ga(star2[n], word) == mu_delta_power(word, 2, signed)
            assert apply_ga(star3[n], word) == mu_delta_power(word, 3, signed)

    @pytest.mark.parametrize("signed", [False, True])
    def test_associative(self, signed):
        ident = identity_series(3)
        j = j_series(3)
        left = convolve(convolve(ident, j, 3, signed), ident, 3, signed)
        right = convolve(ident, convolve(j, ident, 3, signed), 3, signed)
        assert left == right


class TestEulerian:
    def test_degree_two_values(self):
        e = eulerian(2, signed=False)
        half = Fraction(1, 2)
        assert e[0] == {(0, 1): half, (1, 0): -half}
        assert e[1] == {(0, 1): half, (1, 0): half}
        es = eulerian(2, signed=True)
        assert es[0] == {(0, 1): half, (1, 0): half}
        assert es[1] == {(0, 1): half, (1, 0): -half}

    @pytest.mark.parametrize("signed", [False, True])
    def test_idempotent_orthogonal_complete(self, signed):
        for n in range(1, 6):
            es = eulerian(n, signed)
            assert len(es) == n
            total = {}
            for i, x in enumerate(es):
                for j, y in enumerate(es):
                    prod = ga_mul(x, y)
                    if i == j:
                        assert prod == x, (n, i)
                    else:
                        assert prod == {}, (n, i, j)
                total = ga_add(total, x)
            assert total == {identity_perm(n): Fraction(1)}

    def test_top_piece_is_full_average(self):
        # plain flavour: symmetrizer; signed flavour: sign-weighted average
        for n in range(1, 5):
            top = eulerian(n, signed=False)[n - 1]
            expect = {p: Fraction(1, math.factorial(n)) for p in all_perms(n)}
            assert top == expect
        for n in range(1, 5):
            top = eulerian(n, signed=True)[n - 1]
            expect = {
                p: Fraction(perm_sign(p), math.factorial(n)) for p in all_perms(n)
            }
            assert top == expect

    def test_twist_exchanges_flavours(self):
        for n in range(1, 6):
            plain = eulerian(n, signed=False)
            twisted = [sign_twist(x) for x in eulerian(n, signed=True)]
            assert plain == twisted

    @pytest.mark.parametrize("signed", [False, True])
    def test_first_piece_kills_shuffle_sums(self, signed):
        for n in range(2, 6):
            e1 = eulerian(n, signed)[0]
            for r in range(1, n):
                s = shuffle_sum(r, n - r, signed)
                assert ga_mul(e1, s) == {}, (n, r, signed)

    def test_rank_counts(self):
        # rank of e^(p) acting on the group algebra = cycle-count Stirling number
        from pvac.linalg import rank

        for n in range(1, 6):
            perms = list(all_perms(n))
            index = {p: i for i, p in enumerate(perms)}
            stirling = {}
            stirling[(0, 0)] = 1
            for a in range(1, n + 1):
                for b in range(a + 1):
                    stirling[(a, b)] = stirling.get((a - 1, b - 1), 0) + (
                        a - 1
                    ) * stirling.get((a - 1, b), 0)
            for p_idx, e in enumerate(eulerian(n, signed=False), start=1):
                rows = []
                for g in perms:
                    row = [Fraction(0)] * len(perms)
                    for h, c in ga_mul(e, {g: Fraction(1)}).items():
                        row[index[h]] = c
                    rows.append(row)
                assert rank(rows) == stirling[(n, p_idx)], (n, p_idx)

    def test_bound_enforced(self):
        with pytest.raises(ValueError):
            eulerian(8)
        eulerian(4, bound=4)
        with pytest.raises(ValueError):
            eulerian(5, bound=4)

    def test_truncation_stable(self):
        # computing inside a larger table must not change lower degrees
        from pvac.symgrp import _eulerian_table

        small = _eulerian_table(4, False)
        large = _eulerian_table(6, False)
        for p in range(1, 5):
            assert small[p - 1][4] == large[p - 1][4]
