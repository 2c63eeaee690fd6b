"""Tests for the base bump superposition and its rescaled blocks.

For the factorial family the bump weights have the closed form
w_k = k! / (2^k (k+1)^k), which the tests recompute independently of the
trace-growth machinery the implementation uses.
"""

import math
from fractions import Fraction

import pytest

from carleman.blocks import (
    BaseFunction,
    Block,
    base_lower_check,
    base_upper_check,
    block_lower_check,
    block_upper_check,
    polar_block_bound_check,
    polar_block_jet,
)
from carleman.jets import EXACT
from carleman.weights import analytic, gevrey, shift


def closed_form_weight(k: int) -> Fraction:
    return Fraction(math.factorial(k), 2**k * (k + 1) ** k)


def test_weights_match_closed_form():
    bf = BaseFunction(gevrey(1), terms=12)
    assert bf.k_range == range(1, 13)
    for k in bf.k_range:
        assert bf.weight_exact(k) == closed_form_weight(k)
        assert bf.weight_log(k) == pytest.approx(
            math.log(closed_form_weight(k)), rel=1e-12
        )


def test_needs_minimum_terms():
    with pytest.raises(ValueError):
        BaseFunction(gevrey(1), terms=3)


def test_value_exact_hand_sum():
    bf = BaseFunction(gevrey(1), terms=10)
    x1, x2 = Fraction(1), Fraction(1, 2)
    want = sum(
        closed_form_weight(k) / (1 + x1**2 + (Fraction(k + 1) * x2) ** 2)
        for k in range(1, 11)
    )
    assert bf.value(x1, x2, exact=True) == want
    assert bf.value(1.0, 0.5) == pytest.approx(float(want), rel=1e-12)


def test_value_truncation_tail_is_honest():
    coarse = BaseFunction(gevrey(1), terms=20)
    fine = BaseFunction(gevrey(1), terms=40)
    for x in [(Fraction(0), Fraction(0)), (Fraction(3, 2), Fraction(-2, 3))]:
        gap = fine.value(*x, exact=True) - coarse.value(*x, exact=True)
        assert 0 <= gap
        assert float(gap) <= math.exp(coarse.value_tail_log())


def test_jet_constant_term_is_value_at_base():
    bf = BaseFunction(gevrey(1), terms=10)
    base = (Fraction(2, 3), Fraction(-1, 4))
    jet = bf.jet(base, 3, EXACT)
    assert jet.coefficient((0, 0)) == bf.value(*base, exact=True)


def test_axis_second_derivative_closed_form():
    # d^2/dx2^2 of w/(1 + x1^2 + m^2 x2^2) at (t, 0) is -2 w m^2 / (1+t^2)^2
    bf = BaseFunction(gevrey(1), terms=10)
    for t in (Fraction(0), Fraction(1, 2)):
        a = 1 + t**2
        want = -2 * sum(
            closed_form_weight(k) * Fraction(k + 1) ** 2 / a**2 for k in range(1, 11)
        )
        ax = bf.axis_derivative(2, t)
        assert ax.exact == want
        assert not ax.symmetry_zero


def test_axis_derivative_matches_exact_jet():
    bf = BaseFunction(gevrey(1), terms=8)
    t = Fraction(1, 2)
    jet = bf.jet((t, Fraction(0)), 8, EXACT)
    for order in (2, 4, 6, 8):
        ax = bf.axis_derivative(order, t)
        assert ax.exact == jet.coefficient((0, order)) * math.factorial(order)


def test_axis_odd_orders_vanish():
    bf = BaseFunction(gevrey(1), terms=8)
    ax = bf.axis_derivative(3, Fraction(1, 3))
    assert ax.symmetry_zero
    assert ax.exact == 0
    assert ax.value.sign == 0


def test_axis_truncation_bound_is_honest():
    coarse = BaseFunction(gevrey(1), terms=20)
    fine = BaseFunction(gevrey(1), terms=60)
    for order in (2, 4, 8):
        drop = abs(fine.axis_derivative(order, 0).exact - coarse.axis_derivative(order, 0).exact)
        bound = math.factorial(order) * coarse.axis_tail_exact(order, Fraction(1))
        assert drop <= bound


def test_base_lower_rows():
    rows = base_lower_check(gevrey(1), [2, 4, 6, 8], terms=40)
    assert [r.order for r in rows] == [2, 4, 6, 8]
    assert all(r.exact_ok and r.ok for r in rows)


def test_base_lower_rejects_bad_orders():
    with pytest.raises(ValueError):
        base_lower_check(gevrey(1), [3], terms=40)
    with pytest.raises(ValueError):
        base_lower_check(gevrey(1), [0], terms=40)
    with pytest.raises(ValueError):
        base_lower_check(gevrey(1), [42], terms=40)


def test_base_upper_sweep():
    res = base_upper_check(gevrey(1), degree=4, points=6, terms=40, seed=3)
    assert res.ok
    assert res.checked == 6 * 15
    assert res.max_log_ratio <= 0


def test_base_upper_other_family():
    res = base_upper_check(analytic(), degree=4, points=4, terms=40)
    assert res.ok


def test_block_validation():
    bf = BaseFunction(gevrey(1), terms=6)
    Block(bf, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        Block(bf, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        Block(bf, 2, 1)
    with pytest.raises(ValueError):
        Block(bf, 2, 0)


def test_block_value_is_rescaled_base():
    bf = BaseFunction(gevrey(1), terms=8)
    blk = Block(bf, 3, Fraction(1, 4))
    assert blk.center == (Fraction(3, 4), Fraction(0))
    x = (Fraction(1, 2), Fraction(-1, 3))
    want = bf.value(
        (x[0] - blk.center[0]) / blk.rho, x[1] / blk.rho, exact=True
    )
    assert blk.value(*x, exact=True) == want
    # the peak sits at the center
    assert blk.value(*blk.center, exact=True) == bf.value(0, 0, exact=True)


def test_block_jet_constant_term():
    bf = BaseFunction(gevrey(1), terms=8)
    blk = Block(bf, 2, Fraction(1, 3))
    base_pt = (Fraction(1), Fraction(1, 5))
    jet = blk.jet(base_pt, 3, EXACT)
    assert jet.coefficient((0, 0)) == blk.value(*base_pt, exact=True)


def test_block_axis_derivative_rescales():
    bf = BaseFunction(gevrey(1), terms=8)
    blk = Block(bf, 2, Fraction(1, 3))
    c1 = blk.center[0]
    jet = blk.jet((c1, Fraction(0)), 4, EXACT)
    for order in (2, 4):
        ax = blk.axis_derivative(order, c1)
        assert ax.exact == jet.coefficient((0, order)) * math.factorial(order)
        # the center rescaling is the base derivative over rho^order
        assert ax.exact == bf.axis_derivative(order, 0).exact / blk.rho**order


def test_block_sweeps():
    geoms = [(Fraction(1), Fraction(1, 2)), (Fraction(4), Fraction(1, 8))]
    up = block_upper_check(gevrey(1), geoms, degree=4, points=4, terms=40)
    assert up.ok
    low = block_lower_check(gevrey(1), geoms, [2, 4], terms=40)
    assert all(r.exact_ok and r.ok for r in low)
    with pytest.raises(ValueError):
        block_lower_check(gevrey(1), geoms, [5], terms=40)


def test_polar_block_jet_value_and_axis():
    bf = BaseFunction(gevrey(1), terms=8)
    blk = Block(bf, 2, Fraction(1, 4))
    r0 = Fraction(3, 4)
    polar = polar_block_jet(blk, (r0, Fraction(0)), 4, EXACT)
    cart = blk.jet((r0, Fraction(0)), 4, EXACT)
    # theta = 0 sends the radial line onto the x1 axis
    for k in range(5):
        assert polar.coefficient((k, 0)) == cart.coefficient((k, 0))


def test_polar_block_jet_float_constant():
    bf = BaseFunction(gevrey(1), terms=8)
    blk = Block(bf, 2, Fraction(1, 4))
    r0, th = 1.2, 0.7
    jet = polar_block_jet(blk, (r0, th), 3)
    want = blk.value(r0 * math.cos(th), r0 * math.sin(th))
    assert jet.coefficient((0, 0)) == pytest.approx(want, rel=1e-12)


def test_polar_block_sweep_and_normalization():
    res = polar_block_bound_check(
        gevrey(1), [(Fraction(1), Fraction(1, 2))], degree=3, radii=3, angles=2, terms=12
    )
    assert res.ok
    assert res.empirical_constant > 0
    with pytest.raises(ValueError):
        polar_block_bound_check(shift(gevrey(1), 2), [(Fraction(1), Fraction(1, 2))])
