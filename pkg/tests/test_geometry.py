"""Disc primitives and the square-root disc transform.

The worked reference case throughout is D(1, 3/4): s = 1/4, output discs
D(+/-1, 1/2), all values computable by hand.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf, mpc, sqrt as msqrt

from swisscheese.geometry import (
    Disc,
    affine_disc,
    check_sqrt_inclusion,
    s_dist,
    sample_sqrt_points,
    sample_sqrt_points_rejection,
    sqrt_disc,
    sqrt_disc_inequalities,
)
from swisscheese.numeric import PreconditionError, rel_close


def test_disc_requires_positive_radius():
    with pytest.raises(PreconditionError):
        Disc(0, 0)
    with pytest.raises(PreconditionError):
        Disc(1, -0.5)


def test_disc_membership_is_open():
    d = Disc(mpc(1, 0), mpf("0.5"))
    assert d.contains(1.2)
    assert not d.contains(1.5)  # boundary point of the open disc
    assert d.closure_contains(1.5)


def test_disc_intersects_unit_disc():
    assert Disc(mpc("0.9"), mpf("0.2")).intersects_unit_disc()
    assert not Disc(mpc(3), mpf(1)).intersects_unit_disc()


def test_s_dist_outside_and_inside():
    d = Disc(2, 1)
    assert s_dist(d, 0) == 1
    assert s_dist(d, 2) == 1  # at the center, distance to the boundary is r
    assert s_dist(d, mpc(2, "0.5")) == mpf("0.5")


def test_sqrt_disc_reference_case():
    d = Disc(1, Fraction(3, 4))
    pair = sqrt_disc(d)
    assert pair.s == mpf("0.25")
    assert pair.delta1.center == mpc(1)
    assert pair.delta2.center == mpc(-1)
    assert pair.delta1.radius == mpf("0.5")
    assert pair.delta2.radius == mpf("0.5")


def test_sqrt_disc_boundary_distance_is_sqrt_s():
    d = Disc(mpc("0.3", "0.4"), mpf("0.2"))  # |center| = 0.5
    pair = sqrt_disc(d)
    assert pair.s == mpf("0.3")
    assert rel_close(s_dist(pair.delta1, 0), msqrt(pair.s))
    assert rel_close(s_dist(pair.delta2, 0), msqrt(pair.s))


def test_sqrt_disc_rejects_origin_in_closure():
    with pytest.raises(PreconditionError):
        sqrt_disc(Disc(mpc("0.5"), mpf("0.5")))  # r = |a|
    with pytest.raises(PreconditionError):
        sqrt_disc(Disc(mpc("0.3"), mpf("0.4")))


def test_sqrt_disc_inequalities_reference_margins():
    # radius bound: 1/2 < (3/4)/(2*(1/2)) = 3/4, margin 1/4
    d = Disc(1, Fraction(3, 4))
    pair = sqrt_disc(d)
    out = sqrt_disc_inequalities(d, pair, max_order=8)
    ok_b, margin_b = out["b"]
    assert ok_b and margin_b == mpf("0.25")
    # order 1: lhs = (1/2)/(1/2)^3 = 4 < rhs = (3/4)/(2*(1/4)^2) = 6
    ok_1, margin_1 = out["c"][1]
    assert ok_1 and margin_1 == 2
    assert all(out["c"][m][0] for m in range(1, 9))


@st.composite
def valid_discs(draw):
    mag = draw(st.floats(min_value=0.05, max_value=1.5))
    theta = draw(st.floats(min_value=0.0, max_value=6.28))
    ratio = draw(st.floats(min_value=0.01, max_value=0.95))
    center = mpf(mag) * mpc(np.cos(theta), np.sin(theta))
    return Disc(center, mpf(mag) * mpf(ratio))


@given(valid_discs())
@settings(max_examples=60, deadline=None)
def test_sqrt_disc_inequalities_hold_generically(d):
    pair = sqrt_disc(d)
    out = sqrt_disc_inequalities(d, pair)
    assert out["b"][0]
    assert all(ok for ok, _ in out["c"].values())


@given(valid_discs())
@settings(max_examples=30, deadline=None)
def test_sqrt_disc_radius_formula(d):
    pair = sqrt_disc(d)
    mag = abs(d.center)
    assert rel_close(pair.delta1.radius, d.radius / (msqrt(mag) + msqrt(pair.s)))


def test_sqrt_pair_centers_are_square_roots():
    d = Disc(mpc("-0.4", "0.3"), mpf("0.1"))
    pair = sqrt_disc(d)
    assert rel_close(pair.delta1.center**2, d.center)
    assert pair.delta2.center == -pair.delta1.center


def test_affine_disc():
    d = Disc(mpc(1, 1), 2)
    out = affine_disc(d, mpc(0, 1), Fraction(1, 2))
    assert out.center == mpc("0.5", "1.5")
    assert out.radius == 1
    with pytest.raises(PreconditionError):
        affine_disc(d, 0, 0)


def test_sampler_points_square_into_source():
    d = Disc(mpc("0.5", "0.2"), mpf("0.3"))
    rng = np.random.default_rng(3)
    for sampler in (sample_sqrt_points, sample_sqrt_points_rejection):
        w = sampler(d, 500, rng)
        assert len(w) == 500
        c, r = d.as_floats()
        # allow float-boundary slack; exact membership is re-checked elsewhere
        assert np.all(np.abs(w * w - c) <= r * (1 + 1e-12))


def test_check_sqrt_inclusion_no_violations():
    d = Disc(mpc("0.6", "-0.1"), mpf("0.35"))
    pair = sqrt_disc(d)
    checked, violations = check_sqrt_inclusion(d, pair, 20_000, seed=11)
    assert checked == 20_000 and violations == 0
    checked, violations = check_sqrt_inclusion(d, pair, 5_000, seed=11, rejection=True)
    assert checked == 5_000 and violations == 0


def test_check_sqrt_inclusion_flags_shrunken_cover():
    # shrink the covering discs; points must now escape
    d = Disc(1, Fraction(3, 4))
    pair = sqrt_disc(d)
    bad = type(pair)(
        delta1=Disc(pair.delta1.center, pair.delta1.radius / 4),
        delta2=Disc(pair.delta2.center, pair.delta2.radius / 4),
        s=pair.s,
    )
    _, violations = check_sqrt_inclusion(d, bad, 2_000, seed=5)
    assert violations > 0


def test_inclusion_thin_disc_near_precondition_boundary():
    # r/|a| = 0.97: output discs nearly touch the origin's circle sqrt(s)
    d = Disc(mpc("0.2"), mpf("0.194"))
    pair = sqrt_disc(d)
    checked, violations = check_sqrt_inclusion(d, pair, 20_000, seed=23)
    assert checked == 20_000 and violations == 0
