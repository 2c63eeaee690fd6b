"""Tests for the rational bump, its jets, and the certified derivative bounds."""

from fractions import Fraction

import pytest

from carleman.bricks import (
    BrickParams,
    brick_jet,
    brick_taylor_check,
    brick_value,
    cauchy_kernel_check,
    polar_brick_bound_check,
    polar_brick_jet,
    polar_sample_radii,
    polar_symmetry_check,
)
from carleman.jets import EXACT, JetError
import random


def test_params_validation():
    BrickParams(0, 1, 1)  # q = 0 and rho = 1 are allowed
    with pytest.raises(ValueError):
        BrickParams(-1, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        BrickParams(1, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        BrickParams(1, 1, 0)
    with pytest.raises(ValueError):
        BrickParams(1, 1, 2)


def test_center():
    p = BrickParams(3, 2, Fraction(1, 4))
    assert p.center == (Fraction(3, 4), Fraction(0))


def test_brick_value_hand_computed():
    p = BrickParams(1, 2, Fraction(1, 2))
    assert brick_value(p, Fraction(1, 2), 0) == 1  # peak value at the center
    assert brick_value(p, 1, 1) == Fraction(1, 18)


def test_brick_jet_constant_and_gradient():
    p = BrickParams(1, 2, Fraction(1, 2))
    jet = brick_jet(p, (Fraction(0), Fraction(0)), 2, EXACT)
    assert jet.coefficient((0, 0)) == Fraction(1, 2)
    assert jet.coefficient((1, 0)) == 1
    assert jet.coefficient((0, 1)) == 0  # even in x2


def test_brick_jet_constant_matches_value_off_origin():
    # the jet must expand about the requested base point, not a shifted one
    p = BrickParams(2, 3, Fraction(1, 3))
    for base in [(Fraction(1, 2), Fraction(-1, 5)), (Fraction(-2), Fraction(3, 7))]:
        jet = brick_jet(p, base, 3, EXACT)
        assert jet.coefficient((0, 0)) == brick_value(p, *base)


def test_kernel_bound_sweep():
    res = cauchy_kernel_check([Fraction(1), Fraction(1, 2), Fraction(5)], degree=6, points=4)
    assert res.ok
    assert res.checked == 3 * 4 * 28  # 28 multi-indices up to degree 6
    assert res.max_log_ratio <= 0
    assert 0 < res.empirical_constant <= 8


def test_brick_taylor_bound_sweep():
    params = [
        BrickParams(1, 1, 1),
        BrickParams(3, 4, Fraction(1, 3)),
    ]
    res = brick_taylor_check(params, degree=6, points=4)
    assert res.ok
    assert res.max_log_ratio <= 0
    assert 0 < res.empirical_constant <= 8


def test_polar_brick_bound_sweep():
    res = polar_brick_bound_check([BrickParams(1, 2, Fraction(1, 2))], degree=4, radii=4, angles=3)
    assert res.ok
    assert res.empirical_constant > 0


def test_polar_jet_even_in_angle():
    assert polar_symmetry_check(BrickParams(1, 2, Fraction(1, 2)))
    assert polar_symmetry_check(BrickParams(0, 1, 1))


def test_polar_jet_exact_needs_zero_angle():
    p = BrickParams(1, 2, Fraction(1, 2))
    with pytest.raises(JetError):
        polar_brick_jet(p, (Fraction(1), Fraction(1, 3)), 4, EXACT)


def test_polar_jet_matches_cartesian_on_axis():
    # at theta = 0 the radial line is the x1 axis, so pure radial derivatives
    # coincide with pure x1 derivatives of the Cartesian jet
    p = BrickParams(2, 3, Fraction(1, 4))
    r0 = Fraction(5, 4)
    polar = polar_brick_jet(p, (r0, Fraction(0)), 6, EXACT)
    cart = brick_jet(p, (r0, Fraction(0)), 6, EXACT)
    for k in range(7):
        assert polar.coefficient((k, 0)) == cart.coefficient((k, 0))


def test_polar_sample_radii_shape():
    rng = random.Random(11)
    radii = polar_sample_radii(rng, 6)
    assert radii[0] == 0.0
    assert len(radii) == 6
    assert all(1e-4 <= r <= 10 for r in radii[1:])
