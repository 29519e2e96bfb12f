"""Toeplitz determinants of arc weights, by direct elimination and by the
product of circle-polynomial norms."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import arcmap as am
from . import polybase as pb
from .arcmap import ArcWeight
from .errors import InvalidArgument
from .special import LN2, LNPI, LogSigned, log_product

MAX_DIRECT = 2001


@dataclass(frozen=True, eq=False)
class FourierCoeffs:
    """I_0..I_kmax of an arc weight; I_{-k} = I_k."""

    fw: ArcWeight
    m: int | None
    values: np.ndarray

    def __getitem__(self, k: int) -> float:
        return float(self.values[abs(int(k))])

    @property
    def kmax(self) -> int:
        return len(self.values) - 1


def _indicator_coeffs(alpha: float, kmax: int) -> np.ndarray:
    k = np.arange(1, kmax + 1)
    out = np.empty(kmax + 1)
    out[0] = 1.0 - alpha / math.pi
    out[1:] = -np.sin(k * alpha) / (math.pi * k)
    return out


def _quadrature_coeffs(fw: ArcWeight, kmax: int, m: int) -> np.ndarray:
    th, W = am.arc_measure(fw, m)
    out = np.empty(kmax + 1)
    for lo in range(0, kmax + 1, 256):
        k = np.arange(lo, min(lo + 256, kmax + 1))
        out[k] = np.cos(np.outer(k, th)) @ W
    return out


_lock = threading.Lock()


@lru_cache(maxsize=512)
def _coeffs_cached(fw: ArcWeight, kmax: int, m: int | None) -> FourierCoeffs:
    if fw.form == "indicator" and m is None:
        vals = _indicator_coeffs(fw.alpha, kmax)
    else:
        mm = am.node_count(fw, 2 * kmax) if m is None else m
        vals = _quadrature_coeffs(fw, kmax, mm)
    vals.setflags(write=False)
    return FourierCoeffs(fw, m, vals)


def fourier_coeffs(fw: ArcWeight, kmax: int, m: int | None = None) -> FourierCoeffs:
    """I_k = (1/2pi) int e^{-ik theta} f(theta) d theta for 0 <= k <= kmax.

    ``m=None`` picks the Gauss-Legendre size in psi from the oscillation and
    the nearest complex singularity; the indicator then uses its closed form.
    """
    if kmax < 0:
        raise InvalidArgument("kmax must be nonnegative")
    with _lock:
        return _coeffs_cached(fw, int(kmax), m)


def fourier_coeff(fw: ArcWeight, k: int, m: int | None = None) -> float:
    return fourier_coeffs(fw, abs(int(k)), m)[k]


def toeplitz_matrix(fw: ArcWeight, n: int, m: int | None = None) -> np.ndarray:
    """(n+1) x (n+1) matrix with entries I_{j-k}."""
    return scipy.linalg.toeplitz(fourier_coeffs(fw, n, m).values[: n + 1])


def toeplitz_logdet_direct(fw: ArcWeight, n: int, m: int | None = None,
                           method: str = "lu") -> LogSigned:
    """log det T_n(f) by pivoted LU (or symmetric eigenvalues)."""
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    if n + 1 > MAX_DIRECT:
        raise InvalidArgument(f"matrix size {n + 1} exceeds the dense budget {MAX_DIRECT}")
    T = toeplitz_matrix(fw, n, m)
    if method == "lu":
        sign, lg = np.linalg.slogdet(T)
        sign = int(round(sign))
    elif method == "eigh":
        ev = np.linalg.eigvalsh(T)
        if np.any(ev == 0.0):
            return LogSigned(0, -math.inf)
        sign = int(np.prod(np.sign(ev)))
        lg = math.fsum(np.log(np.abs(ev)))
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    if sign == 0:
        return LogSigned(0, -math.inf)
    return LogSigned(sign, float(lg))


def toeplitz_logdet_product(fw: ArcWeight, n: int, path: str = "telescoped") -> LogSigned:
    """D_n(f) as the product of chi_j^(-2), j = 0..n.

    ``telescoped`` uses the collapsed closed forms; ``factors`` multiplies the
    individual norms.  Both must agree.
    """
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    if fw.form == "indicator":
        raise InvalidArgument("the indicator weight has no product formula here")
    if path == "factors":
        return log_product(am.chi_sq_inv(fw, j) for j in range(n + 1))
    if path != "telescoped":
        raise InvalidArgument(f"unknown path {path!r}")
    lg = math.log(fw.gamma)
    if fw.form == "P":
        p = am._p_at_inv_gamma(fw, n + 1)
        hs = [pb.log_norm_h(fw.base, j) for j in range(n + 1)]
        terms = [n * (n + 1) * LN2, (n * n + 3 * n + 2) * lg, -(n + 1) * LNPI, p.logmag] + hs
        return LogSigned(p.sign, math.fsum(terms))
    t = am._t_nonzero(fw, n)
    hs = [pb.log_norm_h(fw.base, j) for j in range(n)]
    terms = [n * (n + 1) * (LN2 + lg), t.logmag, -n * LNPI] + hs
    return LogSigned(t.sign, math.fsum(terms))


# ---------------------------------------------------------------------------
# the alpha = 2s/n scaling
# ---------------------------------------------------------------------------

FAMILY_KEYS = ("chebyshev1", "chebyshev2", "legendre", "bs", "chebyshev2_q", "f1", "f2", "f0")


def make_arc(key: str, alpha: float, r: float | None = None) -> ArcWeight:
    """Named arc weights used by the scaling studies and the CLI."""
    if key == "chebyshev1":
        return am.chebyshev_arc(alpha)
    if key == "chebyshev2":
        return ArcWeight(alpha, pb.CHEBYSHEV2, "P", "chebyshev2")
    if key in ("legendre", "f1"):
        return am.sine_half(alpha)
    if key == "f2":
        return am.inv_sine_half(alpha)
    if key == "bs":
        if r is None:
            raise InvalidArgument("the bs family needs r")
        return am.bernstein_szego_arc(alpha, r)
    if key == "chebyshev2_q":
        return am.chebyshev2_q_arc(alpha)
    if key == "f0":
        return am.indicator(alpha)
    raise InvalidArgument(f"unknown family {key!r}; expected one of {FAMILY_KEYS}")


def closed_form_limit(key: str, s: float, r: float | None = None) -> float | None:
    """Limit of D_n as n grows with alpha = 2s/n, where one is known."""
    if key == "chebyshev1":
        r = 0.0
    elif key == "chebyshev2_q":
        r = 1.0
    elif key != "bs":
        return None
    return math.exp(-0.5 * s * s - 2.0 * r * s) * (math.cosh(s) + r * math.sinh(s))


def scaled_logdet(key: str, s: float, n: int, r: float | None = None) -> LogSigned:
    fw = make_arc(key, 2.0 * s / n, r)
    if fw.form == "indicator":
        return toeplitz_logdet_direct(fw, n)
    return toeplitz_logdet_product(fw, n)


def scaling_sequence(key: str, s: float, n_list, r: float | None = None) -> list[dict]:
    """D_n at alpha = 2s/n for each n, with the deviation from the limit."""
    n_list = list(n_list)
    if n_list != sorted(n_list):
        raise InvalidArgument("n_list must be ascending")
    limit = closed_form_limit(key, s, r)
    rows = []
    for n in n_list:
        ld = scaled_logdet(key, s, n, r)
        val = float(ld)
        rows.append({
            "n": n,
            "logdet": ld.logmag,
            "value": val,
            "closed_form": limit,
            "deviation": None if limit is None else abs(val - limit),
        })
    return rows


__all__ = [
    "FourierCoeffs", "fourier_coeff", "fourier_coeffs", "toeplitz_matrix",
    "toeplitz_logdet_direct", "toeplitz_logdet_product", "make_arc",
    "closed_form_limit", "scaled_logdet", "scaling_sequence", "FAMILY_KEYS",
]
