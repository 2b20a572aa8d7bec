"""Rational functions: Taylor functionals, descent, norms, witnesses."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf, mpc

from swisscheese.families import CheeseSpec, road_runner
from swisscheese.geometry import Disc
from swisscheese.numeric import PreconditionError, rel_close, rel_error, to_complex
from swisscheese.rational import (
    FunctionalSample,
    PoleEvaluationError,
    RationalFunction,
    browder_norm_experiment,
    check_poles_off_cheese,
    compose_square,
    delta_descent_check,
    descend_even,
    evaluate,
    even_part,
    is_even_function,
    poles,
    relation_delta_shift,
    road_runner_witness,
    sup_norm_estimate,
    taylor_coefficient_contour,
    taylor_functional,
)


def _random_float_rational(rng: random.Random, n_poles=3, deg_num=3) -> RationalFunction:
    from mpmath import cos, sin

    from swisscheese.rational import poly_mul

    num = tuple(mpc(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(deg_num + 1))
    den = (mpc(1),)
    for _ in range(n_poles):
        mag = mpf(rng.uniform(0.4, 1.8))
        th = mpf(rng.uniform(0, 6.28))
        p = mag * mpc(cos(th), sin(th))
        den = poly_mul(den, (-p, mpc(1)))
    return RationalFunction(num, den)


# --- construction and reduction ---------------------------------------------


def test_zero_denominator_rejected():
    with pytest.raises(PreconditionError):
        RationalFunction((1,), (0,))


def test_exact_reduction_cancels_common_factor():
    # (z^2 - 1)/(z - 1) reduces to z + 1
    f = RationalFunction((-1, 0, 1), (-1, 1))
    assert f.num == (Fraction(1), Fraction(1))
    assert len(f.den) == 1
    assert f.exact


def test_coprime_pair_untouched():
    f = RationalFunction((1,), (-Fraction(1, 2), 1))
    assert f.num == (1,)
    assert f.den == (-Fraction(1, 2), 1)


def test_json_round_trip():
    from swisscheese.rational import rational_from_json

    f = RationalFunction((mpc(1, 2), mpc(0, -1)), (mpc(3), mpc(0, 0), mpc(1)))
    back = rational_from_json(f.to_json())
    assert back.num == f.num
    assert back.den == f.den


# --- evaluation and poles ----------------------------------------------------


def test_evaluate_exact_and_float_paths():
    f = RationalFunction((Fraction(1, 8),), (-Fraction(1, 2), 1))
    assert evaluate(f, 0) == Fraction(-1, 4)
    assert rel_close(evaluate(f, mpf(0)), mpf("-0.25"))


def test_evaluate_at_pole_raises():
    f = RationalFunction((1,), (-Fraction(1, 2), 1))
    with pytest.raises(PoleEvaluationError):
        evaluate(f, Fraction(1, 2))
    with pytest.raises(PoleEvaluationError):
        evaluate(f, mpf("0.5"))


def test_poles_exact_degree_one():
    f = RationalFunction((1,), (-Fraction(1, 3), 1))
    assert poles(f) == (Fraction(1, 3),)


def test_poles_numeric_quadratic():
    f = RationalFunction((mpc(1),), (mpc(2), mpc(0), mpc(1)))  # z^2 + 2
    ps = poles(f)
    assert len(ps) == 2
    for p in ps:
        assert rel_close(p * p, -2)


# --- Taylor functionals ------------------------------------------------------


def test_geometric_series_coefficients_exact():
    f = RationalFunction((1,), (1, -1))  # 1/(1 - z)
    for m in range(8):
        assert taylor_functional(f, 0, m) == 1


def test_simple_pole_coefficients_exact():
    # r/(z - a): mth coefficient at 0 is -r / a^(m+1)
    a, r = Fraction(1, 3), Fraction(1, 7)
    f = RationalFunction((r,), (-a, 1))
    for m in range(5):
        assert taylor_functional(f, 0, m) == -r / a ** (m + 1)


def test_taylor_functional_at_shifted_point():
    f = RationalFunction((1,), (1, -1))  # 1/(1-z), expansion at a: 1/(1-a)^(m+1)
    a = Fraction(1, 4)
    for m in range(4):
        assert taylor_functional(f, a, m) == 1 / (1 - a) ** (m + 1)


def test_taylor_functional_pole_and_order_errors():
    f = RationalFunction((1,), (1, -1))
    with pytest.raises(PoleEvaluationError):
        taylor_functional(f, 1, 2)
    with pytest.raises(PreconditionError):
        taylor_functional(f, 0, -1)


def test_contour_oracle_agrees_with_series_division():
    rng = random.Random(12)
    for _ in range(10):
        f = _random_float_rational(rng)
        min_pole = min(abs(to_complex(p)) for p in poles(f))
        radius = min_pole / 2
        for m in (0, 1, 3):
            direct = taylor_functional(f, 0, m)
            contour = taylor_coefficient_contour(f, 0, m, radius)
            assert rel_error(direct, contour) < mpf(2) ** -40


def test_relation_delta_shift_exact_and_float():
    f = RationalFunction((1, 2, 1), (3, 0, 1))
    v = relation_delta_shift(f, 0, 1, 3)
    assert v.ok and v.lhs == v.rhs
    rng = random.Random(5)
    g = _random_float_rational(rng)
    v = relation_delta_shift(g, mpc("0.1", "0.05"), 2, 4)
    assert v.ok


# --- even part and descent ---------------------------------------------------


def test_even_part_kills_odd_coefficients_exactly():
    rng = random.Random(9)
    for _ in range(20):
        f = _random_float_rational(rng)
        g = even_part(f)
        assert all(x == 0 for x in g.num[1::2])
        assert all(x == 0 for x in g.den[1::2])
        z = mpc("0.17", "0.05")
        assert rel_close(evaluate(g, z), (evaluate(f, z) + evaluate(f, -z)) / 2)


def test_even_part_of_odd_function_is_zero():
    f = RationalFunction((0, 1), (1,))  # f(z) = z
    g = even_part(f)
    assert evaluate(g, Fraction(1, 3)) == 0
    assert taylor_functional(g, 0, 2) == 0


def test_is_even_function():
    assert is_even_function(RationalFunction((1, 0, 2), (1,)))
    assert not is_even_function(RationalFunction((1, 1), (1,)))
    assert is_even_function(RationalFunction((mpc(1), mpc(0), mpc(3)), (mpc(2),)))


def test_descend_compose_round_trip_exact():
    h = RationalFunction((1, Fraction(1, 2)), (2, 0, 1))
    g = compose_square(h)
    assert is_even_function(g)
    back = descend_even(g)
    z = Fraction(1, 5)
    assert evaluate(back, z) == evaluate(h, z)


def test_descend_even_rejects_non_even():
    with pytest.raises(PreconditionError):
        descend_even(RationalFunction((0, 1), (1,)))


def test_delta_descent_exact_simple_pole():
    # f = 1/(z - p): delta_{0,2m} = -1/p^(2m+1), and the descended value agrees
    p = Fraction(1, 2)
    f = RationalFunction((1,), (-p, 1))
    for m in (1, 2, 3):
        v = delta_descent_check(f, m)
        assert v.ok
        assert v.value_direct == -1 / p ** (2 * m + 1)
        assert v.value_descended == v.value_direct


def test_delta_descent_random_float_functions():
    rng = random.Random(21)
    for t in range(25):
        f = _random_float_rational(rng)
        v = delta_descent_check(f, 1 + t % 3)
        assert v.ok
        assert v.max_relative_error < mpf(2) ** -40


def test_delta_descent_odd_function_exact_zero():
    f = RationalFunction((0, 1, 0, Fraction(2, 3)), (1, 0, 2))  # odd/even
    v = delta_descent_check(f, 2)
    assert v.ok
    assert v.value_direct == 0 and v.value_descended == 0


@given(
    st.lists(st.fractions(min_value=-2, max_value=2), min_size=1, max_size=4),
    st.fractions(min_value=Fraction(1, 4), max_value=2),
    st.integers(min_value=1, max_value=3),
)
@settings(max_examples=40, deadline=None)
def test_descent_identity_exact_generic(num, p, m):
    # poles at +/- p only, bounded away from 0; all arithmetic in Fractions
    f = RationalFunction(tuple(num), (-p * p, 0, 1))
    v = delta_descent_check(f, m)
    assert v.ok
    assert v.value_direct == v.value_descended


# --- sup norms and the norm-bound experiment --------------------------------


def test_sup_norm_constant_function():
    cheese = CheeseSpec(road_runner(2))
    f = RationalFunction((Fraction(1),), (Fraction(1),))
    est = sup_norm_estimate(f, cheese, samples=200, depth=20)
    assert est == 1


def test_sup_norm_witness_close_to_one():
    cheese = CheeseSpec(road_runner(2))
    w = road_runner_witness(2, 3)
    est = sup_norm_estimate(w.function, cheese, samples=400, depth=30)
    assert est <= 1
    assert est > mpf("0.9")  # samples on the deleted boundary come close


def test_sup_norm_monotone_in_samples():
    cheese = CheeseSpec(road_runner(2))
    rng = random.Random(2)
    f = _random_float_rational(rng, n_poles=2)
    try:
        lo = sup_norm_estimate(f, cheese, samples=100, depth=20)
        hi = sup_norm_estimate(f, cheese, samples=1000, depth=20)
    except PreconditionError:
        pytest.skip("sampled function has a pole on the cheese")
    assert lo <= hi


def test_check_poles_off_cheese():
    cheese = CheeseSpec(road_runner(2))
    w = road_runner_witness(2, 1)  # pole at the deleted disc center
    check_poles_off_cheese(w.function, cheese, depth=10)
    bad = RationalFunction((1,), (-Fraction(1, 4), 1))  # pole at 1/4, in the cheese
    with pytest.raises(PreconditionError):
        check_poles_off_cheese(bad, cheese, depth=10)


def test_road_runner_witness_delta_growth():
    for m in (2, 3, 4):
        for n in (1, 2, 5, 20):
            w = road_runner_witness(m, n)
            assert w.norm_is_exact and w.norm_estimate == 1
            assert abs(taylor_functional(w.function, 0, m)) == Fraction(n)


def test_browder_norm_experiment_passes_on_witnesses():
    fam = road_runner(3)
    cheese = CheeseSpec(fam)
    witnesses = [road_runner_witness(3, n) for n in range(1, 30)]
    v = browder_norm_experiment(cheese, 0, 2, witnesses, depth=64)
    assert v.ok
    assert v.witness_count == 29
    assert v.max_ratio <= v.browder_upper
    # |delta_{0,2}(f_n)| = r_n / a_n^3 = 2^-n on road_runner(3); n = 1 dominates
    assert v.max_ratio == mpf("0.5")


def test_browder_norm_experiment_needs_certified_sum():
    cheese = CheeseSpec(road_runner(2))
    with pytest.raises(PreconditionError):
        browder_norm_experiment(cheese, 0, 2, [], depth=10)  # divergent order


def test_norm_experiment_inflates_sampled_norms():
    cheese = CheeseSpec(road_runner(3))
    f = RationalFunction((Fraction(1),), (Fraction(1),))
    est = sup_norm_estimate(f, cheese, samples=50, depth=20)
    sample = FunctionalSample(f, est, norm_is_exact=False)
    v = browder_norm_experiment(cheese, 0, 1, [sample], depth=40)
    assert v.ok and v.inflated_norms == 1
