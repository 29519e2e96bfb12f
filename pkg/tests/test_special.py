import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from arcdet.errors import InvalidArgument
from arcdet.special import (LN2, ONE, ZERO, ZETA_PRIME_MINUS_ONE, LogSigned, bessel_i0,
                            bessel_j, gauss_legendre, hankel_pq, log_product, make_rule,
                            widom_constant)


# --- quadrature -------------------------------------------------------------

def test_one_point_legendre():
    rule = make_rule("gauss_legendre", 1)
    assert rule.nodes.tolist() == [0.0]
    assert rule.weights.tolist() == [2.0]


def test_two_point_legendre():
    rule = make_rule("gauss_legendre", 2)
    np.testing.assert_allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(rule.weights, [1.0, 1.0], rtol=1e-15)


@pytest.mark.parametrize("m", [3, 10, 20])
def test_legendre_matches_numpy(m):
    x, w = np.polynomial.legendre.leggauss(m)
    rule = make_rule("gauss_legendre", m)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w, rtol=1e-13)


def test_legendre_high_order_against_mpmath():
    rule = make_rule("gauss_legendre", 100)
    with mpmath.workdps(40):
        for i in (0, 1, 17, 50):
            xi = mpmath.findroot(lambda t: mpmath.legendre(100, t), rule.nodes[i])
            dp = mpmath.diff(lambda t: mpmath.legendre(100, t), xi)
            wi = 2 / ((1 - xi ** 2) * dp ** 2)
            assert rule.nodes[i] == pytest.approx(float(xi), abs=1e-15)
            assert rule.weights[i] == pytest.approx(float(wi), rel=1e-12)


@pytest.mark.parametrize("m", [1, 5, 16])
def test_chebyshev_first_kind(m):
    rule = make_rule("gauss_chebyshev_1", m)
    j = np.arange(1, m + 1)
    np.testing.assert_allclose(np.sort(rule.nodes), np.sort(np.cos((2 * j - 1) * np.pi / (2 * m))),
                               atol=1e-15)
    np.testing.assert_allclose(rule.weights, np.pi / m)
    assert rule.weights.sum() == pytest.approx(math.pi, rel=1e-14)


def test_chebyshev_second_kind_mass():
    # int sqrt(1-x^2) dx = pi/2 and the rule is exact for x^2 sqrt(1-x^2) (= pi/8)
    rule = make_rule("gauss_chebyshev_2", 7)
    assert rule.weights.sum() == pytest.approx(math.pi / 2, rel=1e-14)
    assert rule.integrate(lambda x: x * x) == pytest.approx(math.pi / 8, rel=1e-14)


def test_rule_arrays_are_read_only():
    rule = make_rule("gauss_legendre", 4)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0


@pytest.mark.parametrize("bad", [("gauss_hermite", 4), ("gauss_legendre", 0), ("gauss_legendre", 2.5)])
def test_rule_rejects_bad_input(bad):
    with pytest.raises(InvalidArgument):
        make_rule(*bad)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_legendre_integrates_polynomials_exactly(m, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2 * m)
    exact = sum(c[k] * 2.0 / (k + 1) for k in range(0, 2 * m, 2))
    rule = make_rule("gauss_legendre", m)
    got = float(np.dot(rule.weights, np.polynomial.polynomial.polyval(rule.nodes, c)))
    assert abs(got - exact) <= 1e-12 * max(1.0, np.abs(c).sum())


def test_mapped_interval():
    x, w = gauss_legendre(1.0, 3.0, 12)
    assert np.dot(w, np.exp(x)) == pytest.approx(math.exp(3) - math.e, rel=1e-14)


# --- Bessel functions -----------------------------------------------------

def test_bessel_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0


def test_first_zero_of_j0():
    assert abs(bessel_j(0, 2.404825557695773)) <= 1e-10


GRID = np.concatenate([np.linspace(0.0, 40.0, 801), [7.99, 8.0, 8.01, 29.99, 30.0, 30.01, 75.0, 300.0]])


@pytest.mark.parametrize("order,ref", [(0, sc.j0), (1, sc.j1)])
def test_bessel_against_scipy(order, ref):
    got = bessel_j(order, GRID)
    np.testing.assert_allclose(got, ref(GRID), atol=1e-13, rtol=0)


@pytest.mark.parametrize("order", [0, 1])
def test_bessel_negative_argument_parity(order):
    x = np.linspace(0.1, 25.0, 50)
    np.testing.assert_allclose(bessel_j(order, -x), (-1) ** order * bessel_j(order, x), atol=1e-15)


def test_bessel_rejects_other_orders():
    with pytest.raises(InvalidArgument):
        bessel_j(2, 1.0)


@pytest.mark.parametrize("x", [8.0, 12.0, 30.0])
def test_bessel_regimes_agree_at_switch(x):
    # the series is still accurate here, so both sides of each switch must match mpmath
    for order in (0, 1):
        assert bessel_j(order, x) == pytest.approx(float(mpmath.besselj(order, x)), abs=1e-14)


def test_bessel_derivative_identity():
    # d/dx [x J1(x)] = x J0(x)
    rng = np.random.default_rng(7)
    x = rng.uniform(0.1, 20.0, 100)
    h = 1e-5
    lhs = ((x + h) * bessel_j(1, x + h) - (x - h) * bessel_j(1, x - h)) / (2 * h)
    np.testing.assert_allclose(lhs, x * bessel_j(0, x), atol=1e-6)


def test_hankel_pq_reproduces_j0():
    w = np.array([35.0, 60.0, 200.0])
    P, Q = hankel_pq(0, w)
    chi = w - 0.25 * math.pi
    j0 = np.sqrt(2 / (math.pi * w)) * (P * np.cos(chi) - Q * np.sin(chi))
    np.testing.assert_allclose(j0, sc.j0(w), atol=1e-15)


def test_i0_values():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i0(1.0) == pytest.approx(1.2660658777520, abs=1e-10)
    s = np.linspace(0, 30, 61)
    np.testing.assert_allclose(bessel_i0(s), sc.i0(s), rtol=1e-14)


@given(st.floats(0.0, 50.0))
def test_i0_lower_bound(s):
    assert bessel_i0(s) >= 1.0 + s * s / 4.0


# --- constants ------------------------------------------------------------

def test_zeta_prime_against_glaisher():
    # ln A = 1/12 - zeta'(-1), A from mpmath's Glaisher constant
    ref = 1.0 / 12.0 - float(mpmath.log(mpmath.glaisher))
    assert ZETA_PRIME_MINUS_ONE == pytest.approx(ref, abs=1e-15)


def test_zeta_prime_against_mpmath_zeta():
    assert ZETA_PRIME_MINUS_ONE == pytest.approx(float(mpmath.zeta(-1, derivative=1)), abs=1e-15)


def test_widom_constant():
    g = widom_constant()
    assert g == pytest.approx(0.6450024, abs=1e-6)
    assert math.log(g) == pytest.approx(LN2 / 12 + 3 * ZETA_PRIME_MINUS_ONE, abs=1e-15)


# --- LogSigned ------------------------------------------------------------

def test_empty_product():
    assert log_product([]) == ONE


def test_signed_product():
    out = log_product([LogSigned(1, math.log(2)), LogSigned(-1, math.log(3))])
    assert out.sign == -1
    assert out.logmag == pytest.approx(math.log(6), abs=1e-15)


def test_large_product_does_not_overflow():
    out = log_product([LogSigned(1, math.log(10))] * 1000)
    assert out.sign == 1
    assert out.logmag == pytest.approx(1000 * math.log(10), rel=1e-14)
    assert float(out) == math.inf


def test_zero_absorbs():
    assert log_product([LogSigned(1, 3.0), ZERO]) == ZERO
    assert float(ZERO) == 0.0
    assert LogSigned.from_float(0.0) == ZERO
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO ** -1
    assert ZERO ** 0 == ONE


def test_bad_sign_rejected():
    with pytest.raises(InvalidArgument):
        LogSigned(2, 0.0)
    with pytest.raises(InvalidArgument):
        LogSigned.from_float(math.nan)


finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda v: v != 0.0)


@given(st.floats(-1.0, 1.0))
def test_round_trip_one_ulp_near_unity(t):
    x = math.exp(t)
    assert abs(float(LogSigned.from_float(x)) - x) <= np.spacing(x)


@given(finite)
def test_round_trip_error_tracks_logmag(x):
    # a single double logmag carries ulp(logmag) absolute error
    a = LogSigned.from_float(x)
    assert float(a) == pytest.approx(x, rel=4.5e-16 * (1.0 + abs(a.logmag)))


@given(finite, finite)
def test_mul_div_match_floats(x, y):
    a, b = LogSigned.from_float(x), LogSigned.from_float(y)
    assert (a * b).sign == np.sign(x) * np.sign(y)
    assert (a * b).logmag == pytest.approx(math.log(abs(x)) + math.log(abs(y)), abs=1e-12)
    assert (a / b).logmag == pytest.approx(math.log(abs(x)) - math.log(abs(y)), abs=1e-12)
    assert (a / b).sign == np.sign(x) * np.sign(y)


@given(finite, st.integers(-5, 5))
def test_integer_power(x, k):
    a = LogSigned.from_float(x)
    p = a ** k
    assert p.sign == (np.sign(x) ** k if k % 2 else 1)
    assert p.logmag == pytest.approx(k * a.logmag, abs=1e-12)
    assert (a * a.inverse()).logmag == pytest.approx(0.0, abs=1e-12)


logs = st.builds(LogSigned, st.sampled_from([-1, 1]), st.floats(-700, 700))


@given(st.lists(logs, max_size=12), st.randoms())
def test_product_order_independent(factors, rnd):
    a = log_product(factors)
    shuffled = list(factors)
    rnd.shuffle(shuffled)
    b = log_product(shuffled)
    assert a.sign == b.sign
    assert a.logmag == pytest.approx(b.logmag, abs=1e-12)


@given(st.lists(logs, min_size=2, max_size=12), st.data())
def test_product_associative(factors, data):
    k = data.draw(st.integers(1, len(factors) - 1))
    split = log_product([log_product(factors[:k]), log_product(factors[k:])])
    whole = log_product(factors)
    assert split.sign == whole.sign
    assert split.logmag == pytest.approx(whole.logmag, abs=1e-12)
