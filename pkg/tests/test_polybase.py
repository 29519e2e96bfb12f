import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from arcdet import polybase as pb
from arcdet.errors import InvalidArgument
from arcdet.special import make_rule

FIXED = [pb.CHEBYSHEV1, pb.CHEBYSHEV2, pb.LEGENDRE]
ALL = FIXED + [pb.bernstein_szego(0.9, 1.0), pb.bernstein_szego(0.5, 0.5), pb.bernstein_szego(0.99, 2.0)]


def legendre_monic_mp(n, x):
    """Monic Legendre from the explicit binomial sum, in mpmath."""
    x = mpmath.mpf(x)
    tot = mpmath.mpf(0)
    for k in range(n // 2 + 1):
        tot += (-1) ** k * mpmath.binomial(n, k) * mpmath.binomial(2 * n - 2 * k, n) * x ** (n - 2 * k)
    return tot / mpmath.binomial(2 * n, n)


def chebyshev1_monic_mp(n, x):
    x = mpmath.mpf(x)
    if n == 0:
        return mpmath.mpf(1)
    if abs(x) <= 1:
        t = mpmath.cos(n * mpmath.acos(x))
    else:
        t = mpmath.sign(x) ** n * mpmath.cosh(n * mpmath.acosh(abs(x)))
    return t / mpmath.mpf(2) ** (n - 1)


def chebyshev2_monic_mp(n, x):
    x = mpmath.mpf(x)
    if abs(x) == 1:
        u = mpmath.sign(x) ** n * (n + 1)
    elif abs(x) < 1:
        t = mpmath.acos(x)
        u = mpmath.sin((n + 1) * t) / mpmath.sin(t)
    else:
        t = mpmath.acosh(abs(x))
        u = mpmath.sign(x) ** n * mpmath.sinh((n + 1) * t) / mpmath.sinh(t)
    return u / mpmath.mpf(2) ** n


# --- examples -------------------------------------------------------------

def test_low_degree_examples():
    assert pb.eval_monic(pb.CHEBYSHEV1, 2, 0.0) == pytest.approx(-0.5, abs=1e-16)
    assert pb.eval_monic(pb.LEGENDRE, 2, 0.0) == pytest.approx(-1.0 / 3.0, abs=1e-16)


def test_chebyshev1_near_inverse_gamma():
    n, s = 100, 1.0
    g = math.cos(s / n)
    val = pb.monic_log(pb.CHEBYSHEV1, n, 1.0 / g)
    ratio = math.exp(val.logmag + (n - 1) * math.log(2)) / math.cosh(s)
    assert abs(ratio - 1.0) < 5.0 / n ** 2


def test_norm_examples():
    assert pb.norm_h(pb.LEGENDRE, 0) == pytest.approx(2.0, rel=1e-15)
    assert pb.norm_h(pb.CHEBYSHEV2, 0) == pytest.approx(math.pi / 2, rel=1e-15)
    fam = pb.bernstein_szego(0.9, 1.0)
    assert pb.norm_h(fam, 3) == pytest.approx(math.pi / (2 * 4 ** 3 * (1 - fam.a) ** 2), rel=1e-14)


def test_orthonormality_examples():
    assert pb.orthonormality_defect(pb.CHEBYSHEV1, 10, make_rule("gauss_chebyshev_1", 64)) <= 1e-12
    fam = pb.bernstein_szego(0.9, 1.0)
    assert pb.orthonormality_defect(fam, 8, make_rule("gauss_chebyshev_2", 128)) <= 1e-10
    for m in (1, 2, 20):
        assert pb.orthonormality_defect(pb.LEGENDRE, 0, make_rule("gauss_legendre", m)) <= 1e-14


def test_too_small_rule_warns(caplog):
    pb.orthonormality_defect(pb.LEGENDRE, 10, make_rule("gauss_legendre", 4))
    assert "exceeds the exactness" in caplog.text


# --- oracles --------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 5, 13, 40])
def test_legendre_against_binomial_sum(n):
    xs = [-0.97, -0.3, 0.0, 0.41, 0.999, 1.0, 1.0005, 1.3]
    with mpmath.workdps(60):
        for x in xs:
            ref = float(legendre_monic_mp(n, x))
            assert pb.eval_monic(pb.LEGENDRE, n, x) == pytest.approx(ref, rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("n", [1, 3, 50, 400, 1000])
def test_legendre_log_value_outside_interval(n):
    x = 1.0 / math.cos(1.0 / n)
    with mpmath.workdps(50):
        ref = float(mpmath.log(mpmath.legenp(n, 0, x) / mpmath.binomial(2 * n, n) * mpmath.mpf(2) ** n))
    assert pb.monic_log(pb.LEGENDRE, n, x).logmag == pytest.approx(ref, abs=1e-11 * max(1.0, abs(ref)))


@pytest.mark.parametrize("n", [1, 4, 31, 200, 2000])
def test_chebyshev_families_against_mpmath(n):
    xs = [-1.0, -0.45, 0.2, 0.999, 1.0, 1.0 + 10.0 / n ** 2]
    with mpmath.workdps(40):
        for x in xs:
            for fam, ref in ((pb.CHEBYSHEV1, chebyshev1_monic_mp), (pb.CHEBYSHEV2, chebyshev2_monic_mp)):
                r = ref(n, x)
                got = pb.monic_log(fam, n, x)
                if r == 0:
                    continue
                assert got.sign == int(mpmath.sign(r))
                assert got.logmag == pytest.approx(float(mpmath.log(abs(r))), abs=1e-11)


def test_chebyshev_against_scipy_moderate_degree():
    x = np.linspace(-1, 1, 41)
    for n in range(1, 15):
        np.testing.assert_allclose(pb.eval_monic(pb.CHEBYSHEV1, n, x), sc.eval_chebyt(n, x) / 2 ** (n - 1),
                                   atol=1e-14)
        np.testing.assert_allclose(pb.eval_monic(pb.CHEBYSHEV2, n, x), sc.eval_chebyu(n, x) / 2 ** n,
                                   atol=1e-14)


@pytest.mark.parametrize("gamma,r", [(0.5, 1.0), (0.9, 0.5), (0.99, 2.0), (0.8, 0.0)])
def test_bernstein_szego_gram_by_adaptive_quadrature(gamma, r):
    """Orthogonality checked by mpmath quadrature in psi, independent of any Gauss rule."""
    fam = pb.bernstein_szego(gamma, r)
    q = mpmath.mpf(gamma) ** (2 * r * r)
    for n in range(4):
        for k in range(n, 4):
            def f(psi):
                x = float(mpmath.cos(psi))
                w = mpmath.sin(psi) ** 2 / (1 - q * mpmath.cos(psi) ** 2) if q < 1 else mpmath.mpf(1)
                return w * pb.eval_monic(fam, n, x) * pb.eval_monic(fam, k, x)
            val = float(mpmath.quad(f, [0, mpmath.pi / 2, mpmath.pi]))
            expect = pb.norm_h(fam, n) if n == k else 0.0
            assert val == pytest.approx(expect, abs=1e-11)


# --- degenerations ------------------------------------------------------------

def test_bernstein_szego_r0_is_chebyshev1():
    fam = pb.bernstein_szego(0.9, 0.0)
    assert fam.a == 0.5
    x = np.linspace(-1, 1, 33)
    for n in range(0, 12):
        np.testing.assert_allclose(pb.eval_monic(fam, n, x), pb.eval_monic(pb.CHEBYSHEV1, n, x), atol=1e-15)
        assert pb.norm_h(fam, n) == pytest.approx(pb.norm_h(pb.CHEBYSHEV1, n), rel=1e-14)
    assert fam.matched_rule_kind() == "gauss_chebyshev_1"


@pytest.mark.xfail(strict=True, reason="at r = 0 the weight is 1/sqrt(1-x^2), the Chebyshev-1 weight")
def test_bernstein_szego_r0_literal_chebyshev2_claim():
    fam = pb.bernstein_szego(0.9, 0.0)
    x = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(pb.eval_monic(fam, 3, x), pb.eval_monic(pb.CHEBYSHEV2, 3, x), atol=1e-12)


def test_bernstein_szego_large_r_tends_to_chebyshev2():
    gamma = 0.5
    r = math.sqrt(math.log(1e-12) / (2 * math.log(gamma)))
    fam = pb.bernstein_szego(gamma, r)
    assert fam.q == pytest.approx(1e-12, rel=1e-9)
    x = np.linspace(-1, 1, 21)
    for n in range(1, 10):
        np.testing.assert_allclose(pb.eval_monic(fam, n, x), pb.eval_monic(pb.CHEBYSHEV2, n, x), atol=1e-12)


# --- properties -------------------------------------------------------------

@pytest.mark.parametrize("fam", ALL, ids=lambda f: f"{f.family}-{f.gamma}-{f.r}")
def test_monic_leading_coefficient(fam):
    # Chebyshev fit of degree n: the x^n coefficient must be exactly 1
    for n in range(0, 51, 7):
        nodes = np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
        vals = pb.eval_monic(fam, n, nodes)
        cheb = np.polynomial.chebyshev.chebfit(nodes, vals, n)
        lead = cheb[-1] * (2.0 ** (n - 1) if n > 0 else 1.0)
        assert lead == pytest.approx(1.0, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(fam=st.sampled_from(ALL), n=st.integers(0, 300), x=st.floats(-1.2, 1.2))
def test_parity(fam, n, x):
    if x == 0.0:
        return
    a = pb.monic_log(fam, n, x)
    b = pb.monic_log(fam, n, -x)
    if a.sign == 0 or b.sign == 0:
        return
    assert b.sign == a.sign * (-1) ** n
    assert b.logmag == pytest.approx(a.logmag, abs=1e-12 * max(1.0, abs(a.logmag)))


@settings(max_examples=30, deadline=None)
@given(fam=st.sampled_from(ALL), n=st.integers(1, 60))
def test_three_term_recurrence(fam, n):
    """P_{n+1} = x P_n - b_n P_{n-1} with b_n = h_n / h_{n-1} for a symmetric weight."""
    x = np.linspace(-1.0, 1.0, 15)
    b = pb.norm_h(fam, n) / pb.norm_h(fam, n - 1)
    lhs = pb.eval_monic(fam, n + 1, x)
    rhs = x * pb.eval_monic(fam, n, x) - b * pb.eval_monic(fam, n - 1, x)
    scale = np.max(np.abs(pb.eval_monic(fam, n, x)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@pytest.mark.parametrize("fam", FIXED, ids=lambda f: f.family)
def test_matched_rule_orthonormality(fam):
    assert pb.orthonormality_defect(fam, 30, pb.matched_rule(fam, 30)) <= 1e-12


def test_legendre_log_norm_without_overflow():
    # C(2n, n) overflows a double near n = 514
    val = pb.log_norm_h(pb.LEGENDRE, 1000)
    ref = float(mpmath.log(mpmath.mpf(2) ** 2001 / (2001 * mpmath.binomial(2000, 1000) ** 2)))
    assert val == pytest.approx(ref, rel=1e-13)


def test_parameter_validation():
    with pytest.raises(InvalidArgument):
        pb.PolyFamily("hermite")
    with pytest.raises(InvalidArgument):
        pb.PolyFamily("bernstein_szego", 0.5)
    with pytest.raises(InvalidArgument):
        pb.bernstein_szego(1.5, 1.0)
    with pytest.raises(InvalidArgument):
        pb.bernstein_szego(0.5, -1.0)
    with pytest.raises(InvalidArgument):
        pb.PolyFamily("legendre", 0.5, 1.0)
    with pytest.raises(InvalidArgument):
        pb.eval_monic(pb.LEGENDRE, -1, 0.0)
