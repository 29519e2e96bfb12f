"""Monic orthogonal polynomials on [-1, 1] and their norms.

Four symmetric families are supported: Chebyshev of the first and second
kind, Legendre, and the Bernstein-Szego family with weight
sqrt(1-x^2)/(1 - q x^2), q = gamma^(2 r^2).

Values are produced in a scaled form ``(v, ls)`` with P_n(x) = v * exp(ls)
so that degrees in the thousands and arguments slightly outside [-1, 1]
neither underflow nor overflow.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .special import LN2, LogSigned, QuadratureRule, make_rule

log = logging.getLogger(__name__)

FAMILIES = ("chebyshev1", "chebyshev2", "legendre", "bernstein_szego")


@dataclass(frozen=True)
class PolyFamily:
    family: str
    gamma: float | None = None
    r: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgument(f"unknown polynomial family {self.family!r}")
        if self.family == "bernstein_szego":
            if self.gamma is None or self.r is None:
                raise InvalidArgument("bernstein_szego needs gamma and r")
            if not 0.0 < self.gamma <= 1.0:
                raise InvalidArgument(f"gamma must lie in (0, 1], got {self.gamma}")
            if self.r < 0:
                raise InvalidArgument(f"r must be nonnegative, got {self.r}")
            object.__setattr__(self, "gamma", float(self.gamma))
            object.__setattr__(self, "r", float(self.r))
        elif self.gamma is not None or self.r is not None:
            raise InvalidArgument(f"{self.family} takes no parameters")

    @property
    def q(self) -> float:
        """gamma^(2 r^2); the pole of the weight sits at 1/sqrt(q)."""
        if self.family != "bernstein_szego":
            return 0.0
        return self.gamma ** (2.0 * self.r * self.r)

    @property
    def a(self) -> float:
        """(1 - sqrt(1 - q)) / 2, written to avoid cancellation for small q."""
        q = self.q
        return 0.5 * q / (1.0 + math.sqrt(1.0 - q))

    def weight(self, x, one_minus_x2=None):
        x = np.asarray(x, dtype=float)
        omx2 = 1.0 - x * x if one_minus_x2 is None else np.asarray(one_minus_x2, dtype=float)
        if self.family == "chebyshev1":
            return 1.0 / np.sqrt(omx2)
        if self.family == "chebyshev2":
            return np.sqrt(omx2)
        if self.family == "legendre":
            return np.ones_like(x)
        return np.sqrt(omx2) / (1.0 - self.q * x * x)

    def psi_density(self, psi):
        """w(cos psi) sin psi: the weight seen by d(psi), smooth on [0, pi]."""
        psi = np.asarray(psi, dtype=float)
        s = np.sin(psi)
        if self.family == "chebyshev1":
            return np.ones_like(psi)
        if self.family == "chebyshev2":
            return s * s
        if self.family == "legendre":
            return s
        c = np.cos(psi)
        return s * s / (s * s + self.one_minus_q * c * c)

    @property
    def one_minus_q(self) -> float:
        if self.family != "bernstein_szego":
            return 1.0
        return -math.expm1(2.0 * self.r * self.r * math.log(self.gamma))

    def pole(self) -> float | None:
        """arccosh of the real pole 1/sqrt(q) of the weight, or None."""
        if self.family != "bernstein_szego" or self.one_minus_q == 0.0:
            return None
        return math.asinh(math.sqrt(self.one_minus_q / self.q))

    def matched_rule_kind(self) -> str:
        if self.family == "bernstein_szego" and self.one_minus_q == 0.0:
            # q = 1: the weight is exactly the Chebyshev-1 weight
            return "gauss_chebyshev_1"
        return {
            "chebyshev1": "gauss_chebyshev_1",
            "chebyshev2": "gauss_chebyshev_2",
            "legendre": "gauss_legendre",
            "bernstein_szego": "gauss_chebyshev_2",
        }[self.family]


CHEBYSHEV1 = PolyFamily("chebyshev1")
CHEBYSHEV2 = PolyFamily("chebyshev2")
LEGENDRE = PolyFamily("legendre")


def bernstein_szego(gamma: float, r: float) -> PolyFamily:
    return PolyFamily("bernstein_szego", gamma, r)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _cheb_pieces(n: int, x: np.ndarray):
    """U_n(x) and T_{n+1}(x) (classical normalisation) as (u, t, ls).

    For |x| <= 1 the factor exp(ls) is 1; for x > 1 both are scaled by
    exp(-n arccosh x).  Negative x must be handled by the caller.
    """
    u = np.empty_like(x)
    t = np.empty_like(x)
    ls = np.zeros_like(x)
    inner = x <= 1.0
    if np.any(inner):
        xi = x[inner]
        psi = np.arccos(xi)
        sp = np.sin(psi)
        with np.errstate(invalid="ignore", divide="ignore"):
            ui = np.sin((n + 1) * psi) / sp
        ui = np.where(sp == 0.0, n + 1.0, ui)
        u[inner] = ui
        t[inner] = np.cos((n + 1) * psi)
    outer = ~inner
    if np.any(outer):
        th = np.arccosh(x[outer])
        # U_n = e^{n th} (1 - e^{-2(n+1)th}) / (1 - e^{-2 th})
        with np.errstate(invalid="ignore", divide="ignore"):
            uo = np.expm1(-2.0 * (n + 1) * th) / np.expm1(-2.0 * th)
        u[outer] = np.where(th == 0.0, n + 1.0, uo)
        # T_{n+1} e^{-n th} = e^{th} (1 + e^{-2(n+1) th}) / 2
        t[outer] = 0.5 * np.exp(th) * (1.0 + np.exp(-2.0 * (n + 1) * th))
        ls[outer] = n * th
    return u, t, ls


def _t_classical(n: int, x: np.ndarray):
    """T_n(x) for x >= 0 as (v, ls)."""
    v = np.empty_like(x)
    ls = np.zeros_like(x)
    inner = x <= 1.0
    v[inner] = np.cos(n * np.arccos(x[inner]))
    outer = ~inner
    if np.any(outer):
        th = np.arccosh(x[outer])
        v[outer] = 0.5 * (1.0 + np.exp(-2.0 * n * th))
        ls[outer] = n * th
    return v, ls


def _legendre_scaled(n: int, x: np.ndarray):
    # p_k = 2^k L_k(x):  p_{k+1} = 2x p_k - 4k^2/(4k^2-1) p_{k-1}
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = 2.0 * x
    ls = np.zeros_like(x)
    for k in range(1, n):
        p0, p1 = p1, 2.0 * x * p1 - (4.0 * k * k / (4.0 * k * k - 1.0)) * p0
        big = np.abs(p1) > 1e200
        if np.any(big):
            sc = np.where(big, 1e-200, 1.0)
            p0, p1 = p0 * sc, p1 * sc
            ls = ls - np.log(sc)
    return p1, ls - n * LN2


def eval_scaled(fam: PolyFamily, n: int, x):
    """Monic P_n(x) as arrays (v, ls) with P_n(x) = v * exp(ls)."""
    if n < 0 or int(n) != n:
        raise InvalidArgument(f"degree must be a nonnegative integer, got {n!r}")
    n = int(n)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if n == 0:
        return np.ones_like(x), np.zeros_like(x)
    if fam.family == "legendre":
        return _legendre_scaled(n, x)
    sgn = np.where((x < 0) & (n % 2 == 1), -1.0, 1.0)
    ax = np.abs(x)
    if fam.family == "chebyshev1":
        v, ls = _t_classical(n, ax)
        return sgn * v, ls + (1 - n) * LN2
    u, t, ls = _cheb_pieces(n, ax)
    if fam.family == "chebyshev2":
        return sgn * u, ls - n * LN2
    a = fam.a
    # monic P_n = [(1 - 2a x^2) U_n + 2a x T_{n+1}] / (2^n (1 - a))
    v = (1.0 - 2.0 * a * ax * ax) * u + 2.0 * a * ax * t
    return sgn * v, ls - n * LN2 - math.log1p(-a)


def eval_monic(fam: PolyFamily, n: int, x):
    """Monic P_n(x); scalar in, scalar out.  May underflow for n >~ 1000."""
    v, ls = eval_scaled(fam, n, x)
    out = v * np.exp(ls)
    return float(out[0]) if np.ndim(x) == 0 else out


def monic_log(fam: PolyFamily, n: int, x: float) -> LogSigned:
    v, ls = eval_scaled(fam, n, float(x))
    v, ls = float(v[0]), float(ls[0])
    if v == 0.0:
        return LogSigned(0, -math.inf)
    return LogSigned(1 if v > 0 else -1, math.log(abs(v)) + ls)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def log_central_binomial(n: int) -> float:
    """ln C(2n, n)."""
    return math.lgamma(2 * n + 1) - 2.0 * math.lgamma(n + 1)


def log_norm_h(fam: PolyFamily, n: int) -> float:
    """ln h_n, h_n = integral of P_n^2 w over [-1, 1]."""
    if n < 0:
        raise InvalidArgument("degree must be nonnegative")
    if fam.family == "chebyshev1":
        return math.log(math.pi) if n == 0 else math.log(math.pi) - (2 * n - 1) * LN2
    if fam.family == "chebyshev2":
        return math.log(math.pi) - (2 * n + 1) * LN2
    if fam.family == "legendre":
        return (2 * n + 1) * LN2 - math.log(2 * n + 1) - 2.0 * log_central_binomial(n)
    # h = kappa^-2: kappa_0^2 = 2(1-a)/pi, kappa_n^2 = (2/pi) 4^n (1-a)^2
    l1a = math.log1p(-fam.a)
    if n == 0:
        return math.log(math.pi) - LN2 - l1a
    return math.log(math.pi) - LN2 - 2 * n * LN2 - 2.0 * l1a


def norm_h(fam: PolyFamily, n: int) -> float:
    return math.exp(log_norm_h(fam, n))


def recurrence_b(fam: PolyFamily, k: int) -> float:
    """b_k in P_{k+1} = x P_k - b_k P_{k-1}, k >= 1 (equal to h_k / h_{k-1})."""
    if k < 1:
        raise InvalidArgument("recurrence coefficients start at k = 1")
    if fam.family == "legendre":
        return k * k / (4.0 * k * k - 1.0)
    if k >= 2 or fam.family == "chebyshev2":
        return 0.25
    if fam.family == "chebyshev1":
        return 0.5
    return 0.25 / (1.0 - fam.a)


def second_kind_ratios(fam: PolyFamily, kmax: int, z: float) -> np.ndarray:
    """Ratios q_k(z) / q_{k-1}(z), k = 1..kmax, for z > 1, where
    q_k(z) = int P_k(x) w(x) / (z - x) dx.

    q_k is the minimal solution of the three-term recurrence, so the ratios
    come from the backward continued fraction r_k = b_k / (z - r_{k+1}),
    started from the limit of constant coefficients 1/4.
    """
    if not z > 1.0:
        raise InvalidArgument("second-kind ratios need z > 1")
    root = math.sqrt((z - 1.0) * (z + 1.0))
    rho = z + root
    # each backward step damps the start-up error by about rho^-2
    top = kmax + int(math.ceil(20.0 / math.log(rho))) + 10
    r = 0.5 / rho
    out = np.empty(kmax)
    for k in range(top, 0, -1):
        r = recurrence_b(fam, k) / (z - r)
        if k <= kmax:
            out[k - 1] = r
    return out


def matched_rule(fam: PolyFamily, nmax: int) -> QuadratureRule:
    """Family-matched Gauss rule large enough for degree 2 nmax; for
    Bernstein-Szego the size also grows as the pole 1/sqrt(q) nears 1."""
    m = nmax + 8
    d = fam.pole()
    if d is not None:
        m += int(math.ceil(20.0 / d))
    return make_rule(fam.matched_rule_kind(), m)


def orthonormality_defect(fam: PolyFamily, nmax: int, rule: QuadratureRule) -> float:
    """max |<P_n, P_m>_w / sqrt(h_n h_m) - delta_nm| over n, m <= nmax.

    The family weight is divided by the rule's own weight function, so any
    rule can be used; matched rules make the integrand polynomial (or, for
    Bernstein-Szego, polynomial times a smooth rational factor).
    """
    x = rule.nodes
    wq = rule.weights * fam.weight(x) / rule.weight_function(x)
    if 2 * nmax + 1 > 2 * rule.m - 1:
        log.warning("degree %d exceeds the exactness of a %d-node rule", 2 * nmax, rule.m)
    rows = []
    for n in range(nmax + 1):
        v, ls = eval_scaled(fam, n, x)
        rows.append(v * np.exp(ls - 0.5 * log_norm_h(fam, n)))
    V = np.array(rows)
    gram = (V * wq) @ V.T
    return float(np.max(np.abs(gram - np.eye(nmax + 1))))
