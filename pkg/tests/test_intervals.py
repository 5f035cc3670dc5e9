import math
from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicrit.intervals import Ball, GreenValue, frac_down, frac_up, interval_mean, interval_sum, log_down, log_up

fracs = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)


def exact_distance_sq(ball: Ball, re: F, im: F) -> F:
    cr = F(gmpy2.mpq(ball.c.real))
    ci = F(gmpy2.mpq(ball.c.imag))
    return (cr - re) ** 2 + (ci - im) ** 2


def inside(ball: Ball, re: F, im: F) -> bool:
    r = F(gmpy2.mpq(ball.r))
    return exact_distance_sq(ball, re, im) <= r * r


@given(fracs)
def test_directed_rounding_brackets_rationals(q):
    assert F(frac_down(q)) <= q <= F(frac_up(q))


@given(st.fractions(min_value=F(1, 1000), max_value=10**9, max_denominator=1000))
def test_log_bounds_bracket_math_log(q):
    lo, hi = log_down(q), log_up(q)
    assert lo <= hi
    assert hi - lo <= 1e-14 * max(1.0, abs(lo))
    assert lo - 1e-15 <= math.log(q.numerator) - math.log(q.denominator) <= hi + 1e-15


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30))
def test_interval_sum_is_order_independent(xs):
    terms = [GreenValue(x, x + 1e-3) for x in xs]
    assert interval_sum(terms) == interval_sum(list(reversed(terms)))
    s = interval_sum(terms)
    assert F(s.lo) <= sum(F(x) for x in xs) <= F(s.hi)


def test_interval_mean_encloses():
    terms = [GreenValue(0.1, 0.2), GreenValue(0.3, 0.3), GreenValue(1.0, 1.5)]
    m = interval_mean(terms)
    assert F(m.lo) <= (F(0.1) + F(0.3) + F(1.0)) / 3
    assert (F(0.2) + F(0.3) + F(1.5)) / 3 <= F(m.hi)


def test_green_value_rejects_inverted():
    with pytest.raises(ValueError):
        GreenValue(1.0, 0.0)


def test_green_value_helpers():
    g = GreenValue(1.0, 3.0)
    assert g.width == 2.0 and g.mid == 2.0
    assert g.contains(2.5) and not g.contains(3.5)
    assert g.intersects(GreenValue(3.0, 4.0))
    assert not g.intersects(GreenValue(3.5, 4.0))
    assert g.scale(F(1, 2)) == GreenValue(0.5, 1.5)
    assert g.to_json() == {"lo": 1.0, "hi": 3.0, "certified": True}


@pytest.mark.parametrize("prec", [53, 128])
@given(a=fracs, b=fracs)
@settings(max_examples=60, deadline=None)
def test_ball_ops_enclose_exact_results(prec, a, b):
    A, B = Ball(a, 0, prec), Ball(b, 0, prec)
    zero = F(0)
    assert inside(A, a, zero)
    assert inside(A + B, a + b, zero)
    assert inside(A - B, a - b, zero)
    assert inside(A * B, a * b, zero)
    assert inside(A**3, a**3, zero)


@given(st.tuples(fracs, fracs), st.integers(1, 7))
@settings(max_examples=60, deadline=None)
def test_complex_ball_power_encloses(z, k):
    re, im = z
    with gmpy2.context(precision=200):
        c = gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(re)), gmpy2.mpfr(gmpy2.mpq(im)))
    # the 200-bit center is the exact input; the 64-bit ball absorbs the rounding
    exact_re, exact_im = F(gmpy2.mpq(c.real)), F(gmpy2.mpq(c.imag))
    ball = Ball(c, 0, 64)
    assert inside(ball, exact_re, exact_im)
    wr, wi = F(1), F(0)
    for _ in range(k):
        wr, wi = wr * exact_re - wi * exact_im, wr * exact_im + wi * exact_re
    assert inside(ball**k, wr, wi)


def test_magnitude_bounds():
    b = Ball(F(3), F(1, 2), 64)
    assert b.mag_lo() <= 2.5 and b.mag_hi() >= 3.5
    assert Ball(0, 1, 64).contains_zero()
    assert not b.contains_zero()
