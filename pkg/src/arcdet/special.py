"""Quadrature rules, Bessel functions, log-domain arithmetic and constants.

Everything here is a pure function of its inputs.  Arrays handed out by
:func:`make_rule` are read-only and shared through a cache.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import InvalidArgument

RULE_KINDS = ("gauss_legendre", "gauss_chebyshev_1", "gauss_chebyshev_2")

# zeta'(-1) = 1/12 - ln(A), A the Glaisher-Kinkelin constant
# (A = 1.28242712910062263687534256886979...).
ZETA_PRIME_MINUS_ONE = -0.16542114370045092

LN2 = math.log(2.0)
LNPI = math.log(math.pi)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights of an m-point Gauss rule on (-1, 1).

    The rule integrates against its own weight function: 1 for
    Gauss-Legendre, (1-x^2)^(-1/2) for Chebyshev 1st kind and
    (1-x^2)^(1/2) for Chebyshev 2nd kind.
    """

    kind: str
    m: int
    nodes: np.ndarray
    weights: np.ndarray

    def weight_function(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "gauss_legendre":
            return np.ones_like(x)
        if self.kind == "gauss_chebyshev_1":
            return 1.0 / np.sqrt(1.0 - x * x)
        return np.sqrt(1.0 - x * x)

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Affine image of the rule on [a, b] (meaningful for Gauss-Legendre)."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre_newton(m: int) -> tuple[np.ndarray, np.ndarray]:
    # Chebyshev-like initial guesses, descending
    j = np.arange(1, m + 1)
    x = np.cos(np.pi * (j - 0.25) / (m + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, m + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        if m == 1:
            p0, p1 = np.ones_like(x), x
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # one more evaluation at the converged nodes for the weights
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if m == 1:
        p0, p1 = np.ones_like(x), x
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x[::-1].copy(), w[::-1].copy()


@lru_cache(maxsize=256)
def make_rule(kind: str, m: int) -> QuadratureRule:
    """Return the m-point Gauss rule of the given kind, nodes ascending."""
    if kind not in RULE_KINDS:
        raise InvalidArgument(f"unknown quadrature kind {kind!r}")
    if int(m) != m or m < 1:
        raise InvalidArgument(f"node count must be a positive integer, got {m!r}")
    m = int(m)
    if kind == "gauss_legendre":
        if m == 1:
            x, w = np.array([0.0]), np.array([2.0])
        else:
            x, w = _legendre_newton(m)
            # symmetrize: removes last-bit asymmetry from the iteration
            x = 0.5 * (x - x[::-1])
            w = 0.5 * (w + w[::-1])
    elif kind == "gauss_chebyshev_1":
        j = np.arange(m, 0, -1)
        x = np.cos((2 * j - 1) * np.pi / (2 * m))
        w = np.full(m, np.pi / m)
    else:
        j = np.arange(m, 0, -1)
        t = j * np.pi / (m + 1)
        x = np.cos(t)
        w = np.pi / (m + 1) * np.sin(t) ** 2
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(kind, m, x, w)


def gauss_legendre(a: float, b: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    return make_rule("gauss_legendre", m).mapped(a, b)


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

_SERIES_MAX = 8.0
_MILLER_MAX = 30.0


def _bessel_series(order: int, x: np.ndarray) -> np.ndarray:
    h = 0.5 * x
    q = -h * h
    term = np.ones_like(x) if order == 0 else h.copy()
    total = term.copy()
    for k in range(1, 80):
        term = term * q / (k * (k + order))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _bessel_miller(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # backward recurrence normalised by J0 + 2 sum J_2k = 1
    xmax = float(np.max(x))
    start = int(xmax + 30 + 10 * math.sqrt(xmax))
    start += start % 2
    jp1 = np.zeros_like(x)
    jk = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    j0 = j1 = None
    for k in range(start, 0, -1):
        jm1 = (2.0 * k / x) * jk - jp1
        if k % 2 == 0:
            norm = norm + 2.0 * jk
        jp1, jk = jk, jm1
        if k == 1:
            j1, j0 = jp1, jk
        big = np.abs(jk) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            jk, jp1, norm = jk * scale, jp1 * scale, norm * scale
    norm = norm + j0
    return j0 / norm, j1 / norm


def hankel_pq(order: int, w):
    """Large-argument P and Q functions of J_order (accepts complex ``w``).

    J_order(w) = sqrt(2/(pi w)) (P cos(chi) - Q sin(chi)),
    chi = w - (order/2 + 1/4) pi.
    """
    w = np.asarray(w)
    mu = 4.0 * order * order
    p = np.ones_like(w, dtype=np.result_type(w, float))
    q = np.zeros_like(p)
    ak = 1.0
    inv = 1.0 / w
    power = np.ones_like(p)
    for k in range(1, 40):
        ak *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
        power = power * inv
        term = ak * power
        if k % 2 == 0:
            p = p + (-1) ** (k // 2) * term
        else:
            q = q + (-1) ** ((k - 1) // 2) * term
        if np.all(np.abs(term) < 1e-18):
            break
    return p, q


def _bessel_asymptotic(order: int, x: np.ndarray) -> np.ndarray:
    p, q = hankel_pq(order, x)
    chi = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j(order: int, x):
    """J0 or J1 of a real argument (scalar or array).

    Power series for |x| <= 8, normalised backward recurrence up to 30 and
    the Hankel asymptotic expansion beyond.
    """
    if order not in (0, 1):
        raise InvalidArgument(f"bessel_j supports orders 0 and 1, got {order!r}")
    xa = np.asarray(x, dtype=float)
    ax = np.abs(xa)
    out = np.empty_like(ax)
    small = ax <= _SERIES_MAX
    mid = (ax > _SERIES_MAX) & (ax <= _MILLER_MAX)
    large = ax > _MILLER_MAX
    if np.any(small):
        out[small] = _bessel_series(order, ax[small])
    if np.any(mid):
        j0, j1 = _bessel_miller(ax[mid])
        out[mid] = j0 if order == 0 else j1
    if np.any(large):
        out[large] = _bessel_asymptotic(order, ax[large])
    if order == 1:
        out = np.where(xa < 0, -out, out)
    return out if out.ndim else float(out)


def bessel_i0(s):
    """Modified Bessel function I0(s) = J0(i s) by its power series."""
    s = np.abs(np.asarray(s, dtype=float))
    h2 = 0.25 * s * s
    term = np.ones_like(s)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * h2 / (k * k)
        total = total + term
        if np.all(term <= 1e-17 * total) or k > 2000:
            break
    return total if total.ndim else float(total)


def widom_constant() -> float:
    """2^(1/12) exp(3 zeta'(-1))."""
    return math.exp(LN2 / 12.0 + 3.0 * ZETA_PRIME_MINUS_ONE)


# ---------------------------------------------------------------------------
# log-domain reals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogSigned:
    """A real number stored as sign and natural log of its magnitude."""

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InvalidArgument(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "LogSigned":
        x = float(x)
        if x == 0.0:
            return cls(0, -math.inf)
        if not math.isfinite(x):
            raise InvalidArgument("cannot take the log of a non-finite value")
        # frexp keeps the exponent exact
        mant, exp = math.frexp(abs(x))
        return cls(1 if x > 0 else -1, math.log(mant) + exp * LN2)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogSigned":
        return cls(sign, float(logmag))

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        k = round(self.logmag / LN2)
        rem = self.logmag - k * LN2
        try:
            return self.sign * math.ldexp(math.exp(rem), k)
        except OverflowError:
            return self.sign * math.inf

    value = __float__

    def __mul__(self, other: "LogSigned") -> "LogSigned":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return LogSigned(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "LogSigned") -> "LogSigned":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogSigned")
        if self.sign == 0:
            return ZERO
        return LogSigned(self.sign * other.sign, self.logmag - other.logmag)

    def __pow__(self, k: int) -> "LogSigned":
        if self.sign == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of a zero LogSigned")
            return ZERO if k > 0 else ONE
        return LogSigned(self.sign ** (k % 2) if self.sign < 0 else 1, k * self.logmag)

    def inverse(self) -> "LogSigned":
        return ONE / self


ONE = LogSigned(1, 0.0)
ZERO = LogSigned(0, -math.inf)


def log_product(factors: Iterable[LogSigned]) -> LogSigned:
    """Product of LogSigned factors; the empty product is (+1, 0)."""
    sign = 1
    terms = []
    for f in factors:
        if f.sign == 0:
            return ZERO
        sign *= f.sign
        terms.append(f.logmag)
    return LogSigned(sign, math.fsum(terms))
