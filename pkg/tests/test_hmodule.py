from fractions import Fraction
from itertools import product

from pvac import supervars as sv
from pvac.hmodule import (
    apply_slot_op,
    check_h_action,
    make_module,
    parity_shift,
    reduce,
    tensor_basis,
    tensor_parity,
    zero_module,
)
from pvac.supervars import K, W


def test_zero_module_passes():
    assert check_h_action(zero_module(2, [0, 1], 1, W)) == []


def test_w_commutation_failure_detected():
    bad = make_module([0, 1], [[0, 0], [0, 1]], [[[0, 0], [1, 0]]], W)
    fails = check_h_action(bad)
    assert any("T S^1" in f for f in fails)


def test_w_nilpotent_s_passes():
    good = make_module([0, 1], [[1, 0], [0, 1]], [[[0, 1], [0, 0]]], W)
    assert check_h_action(good) == []


def test_k_square_relation():
    good = make_module([0, 1], [[1, 0], [0, 1]], [[[0, 1], [1, 0]]], K)
    assert check_h_action(good) == []
    bad = make_module([0, 1], [[2, 0], [0, 2]], [[[0, 1], [1, 0]]], K)
    assert any("relation" in f for f in check_h_action(bad))


def test_parity_constraint_detected():
    bad = make_module([0, 1], [[0, 1], [0, 0]], [[[0, 0], [0, 0]]], W)
    assert any("not even" in f for f in check_h_action(bad))


def test_parity_shift_involution():
    m = make_module([0, 1, 0], [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [], W)
    assert parity_shift(parity_shift(m)).parities == m.parities
    assert parity_shift(m, 2).parities == m.parities
    assert parity_shift(m).parities == (1, 0, 1)


class TestReduce:
    def setup_method(self):
        self.m = make_module([0, 1], [[1, 0], [0, 1]], [[[0, 1], [0, 0]]], W)

    def test_single_variable(self):
        p = sv.mul(sv.lam_gen(1, W, 1), sv.const(1, W, self.m, 0))
        # lambda_1 |-> -T, and T e_0 = e_0
        assert reduce(p, 1) == sv.scale(-1, sv.const(1, W, self.m, 0))

    def test_two_variables_linear(self):
        p = sv.mul(sv.lam_gen(1, W, 2), sv.const(1, W, self.m, 0))
        want = sv.add(
            sv.scale(-1, sv.mul(sv.lam_gen(1, W, 1), sv.const(1, W, self.m, 0))),
            sv.scale(-1, sv.const(1, W, self.m, 0)),
        )
        assert reduce(p, 2) == want

    def test_constant(self):
        p = sv.const(1, W, self.m, 1)
        assert reduce(p, 2) == p

    def test_total_lambda_acts_as_minus_t(self):
        # (lambda_1 + lambda_2) a v reduces to -T applied to the reduction
        for lam_deg, with_theta in product(range(3), [False, True]):
            mono = {1: lam_deg} if lam_deg else {}
            letters = [(2, 1)] if with_theta else []
            a = sv.monomial(1, W, self.m, mono, letters, 1)
            total = sv.add(
                sv.mul(sv.lam_gen(1, W, 1), a),
                sv.mul(sv.lam_gen(1, W, 2), a),
            )
            assert reduce(total, 2) == sv.scale(-1, sv.nabla_t(reduce(a, 2)))


def test_tensor_parity_and_slot_signs():
    m = make_module([0, 1], [[1, 0], [0, 1]], [[[0, 1], [0, 0]]], W)
    assert tensor_parity(m, (0, 1)) == 1
    assert tensor_parity(m, (1, 1)) == 0
    assert len(tensor_basis(m, 3)) == 8
    # odd operator in slot 2 sees the parity of slot 1
    S = m.S[0]
    out_even_first = apply_slot_op(m, 2, 2, S, True, {(0, 1): Fraction(1)})
    assert out_even_first == {(0, 0): Fraction(1)}
    out_odd_first = apply_slot_op(m, 2, 2, S, True, {(1, 1): Fraction(1)})
    assert out_odd_first == {(1, 0): Fraction(-1)}
