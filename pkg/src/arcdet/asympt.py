"""Exact and asymptotic Toeplitz determinants for sin(theta/2)^(+-1) on the arc
alpha = 2s/n, together with the integral F(s) and ratio diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arcmap as am
from . import polybase as pb
from .errors import InvalidArgument
from .special import (LN2, LNPI, LogSigned, bessel_i0, bessel_j, gauss_legendre,
                      hankel_pq, widom_constant)

FAMILIES = ("f1", "f2")


@dataclass(frozen=True)
class AsymptoticReport:
    family: str
    n: int
    s: float
    exact_logdet: LogSigned
    asymptotic_logdet: LogSigned

    @property
    def ratio(self) -> float:
        return math.exp(self.exact_logdet.logmag - self.asymptotic_logdet.logmag)


# ---------------------------------------------------------------------------
# A_n
# ---------------------------------------------------------------------------

def a_n_product(n: int) -> LogSigned:
    """A_n = prod_{j<n} 4^j / ((j + 1/2) C(2j, j)^2)."""
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    terms = []
    lc = 0.0  # ln C(2j, j), advanced by C(2j+2, j+1) = C(2j, j) * 2(2j+1)/(j+1)
    for j in range(n):
        terms.append(2 * j * LN2 - math.log(j + 0.5) - 2.0 * lc)
        lc += math.log(2.0 * (2 * j + 1) / (j + 1))
    return LogSigned(1, math.fsum(terms))


def a_n_asymptotic(n: int) -> LogSigned:
    """G n^(-1/4) (2 pi)^n 2^(-n^2) with G = 2^(1/12) e^(3 zeta'(-1))."""
    return LogSigned(1, math.log(widom_constant()) - 0.25 * math.log(n)
                     + n * (LN2 + LNPI) - n * n * LN2)


def a_n_ratio(n: int) -> float:
    return math.exp(a_n_product(n).logmag - a_n_asymptotic(n).logmag)


# ---------------------------------------------------------------------------
# exact determinants
# ---------------------------------------------------------------------------

def _check(n: int, s: float) -> float:
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    if s <= 0:
        raise InvalidArgument("s must be positive")
    if 2.0 * s / n >= math.pi:
        raise InvalidArgument("alpha = 2s/n must stay below pi")
    return math.cos(s / n)


def dn_exact(family: str, n: int, s: float) -> LogSigned:
    """D_{n-1}(f) at alpha = 2s/n for f = sin(theta/2) (``f1``) or its
    reciprocal (``f2``), from the Legendre closed forms."""
    g = _check(n, s)
    lg = math.log(g)
    if family == "f1":
        ln = pb.monic_log(pb.LEGENDRE, n, 1.0 / g)
        terms = [(n * n - n) * LN2, (n * n + n) * lg, -n * LNPI,
                 a_n_product(n).logmag, ln.logmag]
        return LogSigned(ln.sign, math.fsum(terms))
    if family == "f2":
        fw = am.inv_sine_half(2.0 * s / n)
        k = n - 1
        t = am.t_coeff_log(fw, k)
        a = a_n_product(k).logmag if k >= 1 else 0.0
        terms = [k * (k + 1) * (LN2 + lg), t.logmag, -k * LNPI, a]
        return LogSigned(t.sign, math.fsum(terms))
    raise InvalidArgument(f"family must be one of {FAMILIES}")


# ---------------------------------------------------------------------------
# F(s)
# ---------------------------------------------------------------------------

def _f_cap_integral(s: float, span: float, panel: int) -> float:
    """(2/pi) int_s^inf cos(u)/u J0(sqrt(u^2 - s^2)) du."""
    U = s + span
    # finite part, panels of a quarter period
    edges = np.append(np.arange(s, U, 0.5 * math.pi), U)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        u, w = gauss_legendre(a, b, panel)
        total += float(np.dot(w, np.cos(u) / u * bessel_j(0, np.sqrt((u - s) * (u + s)))))
    # beyond U:  cos u J0(w) = (1/2) sqrt(2/(pi w)) [P cos(u - w + pi/4) + Q sin(u - w + pi/4)
    #                                               + P cos(u + w - pi/4) - Q sin(u + w - pi/4)]
    # u - w = s^2/(u + w) varies slowly; u + w oscillates and is rotated off the axis.
    tau, wt = gauss_legendre(0.0, 1.0, panel)
    u = U / (tau * tau)
    du = 2.0 * U / tau ** 3 * wt
    w = np.sqrt((u - s) * (u + s))
    d = s * s / (u + w)
    P, Q = hankel_pq(0, w)
    amp = 0.5 * np.sqrt(2.0 / (math.pi * w)) / u
    total += float(np.dot(du, amp * (P * np.cos(d + 0.25 * math.pi) + Q * np.sin(d + 0.25 * math.pi))))
    vs, vw = [], []
    for a, b in ((0.0, 1.0), (1.0, 4.0), (4.0, 16.0), (16.0, 40.0)):
        x, wq = gauss_legendre(a, b, panel)
        vs.append(x)
        vw.append(wq)
    v = np.concatenate(vs)
    dv = np.concatenate(vw)
    uc = U + 1j * v
    wc = np.sqrt(uc - s) * np.sqrt(uc + s)
    P, Q = hankel_pq(0, wc)
    fast = 0.5 * np.sqrt(2.0 / (math.pi * wc)) / uc * (P + 1j * Q) * np.exp(1j * (uc + wc - 0.25 * math.pi))
    total += float(np.real(1j * np.dot(dv, fast)))
    return 2.0 / math.pi * total


@lru_cache(maxsize=256)
def f_cap(s: float, span: float = 60.0, panel: int = 24) -> float:
    """F(s) = (1/pi) int_0^inf cos(sqrt(x + s^2))/(x + s^2) J0(sqrt x) dx, s > 0."""
    if not s > 0:
        raise InvalidArgument("F(s) needs s > 0")
    return _f_cap_integral(float(s), float(span), int(panel))


# ---------------------------------------------------------------------------
# asymptotics and ratios
# ---------------------------------------------------------------------------

def dn_asymptotic(family: str, n: int, s: float) -> LogSigned:
    """Leading large-n form of D_{n-1}(f) at alpha = 2s/n."""
    if s <= 0:
        raise InvalidArgument("s must be positive")
    common = 0.25 * math.log(n) + 0.5 * LNPI + math.log(widom_constant()) - 0.5 * s * s
    if family == "f1":
        return LogSigned(1, -n * LN2 + common + math.log(bessel_i0(s)))
    if family == "f2":
        F = f_cap(s)
        if F <= 0:
            raise ArithmeticError("F(s) is not positive")
        return LogSigned(1, (n - 1) * LN2 + common + math.log(F))
    raise InvalidArgument(f"family must be one of {FAMILIES}")


def hilb_ratio(n: int, s: float) -> float:
    """2^n L_n(1/gamma) / sqrt(pi n) divided by I0(s), gamma = cos(s/n)."""
    g = _check(n, s)
    ln = pb.monic_log(pb.LEGENDRE, n, 1.0 / g)
    return math.exp(n * LN2 + ln.logmag - 0.5 * math.log(math.pi * n)) / bessel_i0(s)


def t_ratio(n: int, s: float) -> float:
    """2^n t_n / sqrt(pi n) for the reciprocal sine weight, divided by F(s)."""
    _check(n, s)
    t = am.t_coeff_log(am.inv_sine_half(2.0 * s / n), n)
    return t.sign * math.exp(n * LN2 + t.logmag - 0.5 * math.log(math.pi * n)) / f_cap(s)


def asymptotic_report(family: str, s: float, n_list) -> list[AsymptoticReport]:
    return [AsymptoticReport(family, n, s, dn_exact(family, n, s), dn_asymptotic(family, n, s))
            for n in sorted(n_list)]


__all__ = [
    "AsymptoticReport", "FAMILIES", "a_n_asymptotic", "a_n_product", "a_n_ratio",
    "asymptotic_report", "dn_asymptotic", "dn_exact", "f_cap", "hilb_ratio", "t_ratio",
]
