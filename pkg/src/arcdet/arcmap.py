"""Orthogonal polynomials on the arc [alpha, 2 pi - alpha] built from
polynomials on [-1, 1].

With gamma = cos(alpha/2) and x = cos(theta/2)/gamma, an interval weight w
gives the arc weight f(theta) = w(x) sin(theta/2).  Two constructions of the
circle polynomials are available:

* ``P`` form: P_n monic orthogonal for w itself;
* ``Q`` form: Q_n monic orthogonal for v(x) = w(x)(1 - gamma^2 x^2), in which
  case f = v(x) / sin(theta/2) because 1 - gamma^2 x^2 = sin^2(theta/2).

Integrals over the arc are done in psi with x = cos(psi), theta/2 =
arccos(gamma cos psi); this removes the endpoint square-root behaviour of f.
The branch z^(1/2) = exp(i theta/2), theta in [0, 2 pi), is used throughout.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import polybase as pb
from .errors import DegenerateFamilyError, InvalidArgument
from .polybase import PolyFamily
from .special import LNPI, LogSigned, gauss_legendre

FORMS = ("P", "Q", "indicator")


@dataclass(frozen=True)
class ArcWeight:
    alpha: float
    base: PolyFamily | None
    form: str
    name: str = ""

    def __post_init__(self):
        if self.form not in FORMS:
            raise InvalidArgument(f"form must be one of {FORMS}, got {self.form!r}")
        a = float(self.alpha)
        object.__setattr__(self, "alpha", a)
        if self.form == "indicator":
            if not 0.0 <= a <= math.pi:
                raise InvalidArgument(f"alpha must lie in [0, pi], got {a}")
            return
        if self.base is None:
            raise InvalidArgument(f"{self.form} form needs a polynomial family")
        if not 0.0 <= a < math.pi:
            raise InvalidArgument(f"alpha must lie in [0, pi), got {a}")
        if self.form == "Q" and a == 0.0:
            raise InvalidArgument("the Q form needs alpha > 0")

    @property
    def gamma(self) -> float:
        return math.cos(0.5 * self.alpha)

    @property
    def eps(self) -> float:
        """sin(alpha/2), so that 1 - gamma^2 cos^2 psi = sin^2 psi + eps^2 cos^2 psi."""
        return math.sin(0.5 * self.alpha)

    def pole_distance(self) -> float | None:
        """Distance from the real psi axis of the nearest singularity of the
        psi-density, or None when the density is entire."""
        cands = []
        if self.form in ("Q", "indicator") and self.alpha > 0:
            cands.append(math.asinh(self.eps / self.gamma) if self.gamma > 0 else math.inf)
        if self.base is not None and self.base.pole() is not None:
            cands.append(self.base.pole())
        return min(cands) if cands else None


def sine_half(alpha: float) -> ArcWeight:
    """sin(theta/2) on the arc: the Legendre P form."""
    return ArcWeight(alpha, pb.LEGENDRE, "P", "f1")


def inv_sine_half(alpha: float) -> ArcWeight:
    """1/sin(theta/2) on the arc: the Legendre Q form."""
    return ArcWeight(alpha, pb.LEGENDRE, "Q", "f2")


def indicator(alpha: float) -> ArcWeight:
    """The arc indicator; it has no polynomial construction here."""
    return ArcWeight(alpha, None, "indicator", "f0")


def chebyshev_arc(alpha: float) -> ArcWeight:
    return ArcWeight(alpha, pb.CHEBYSHEV1, "P", "chebyshev1")


def bernstein_szego_arc(alpha: float, r: float) -> ArcWeight:
    return ArcWeight(alpha, pb.bernstein_szego(math.cos(0.5 * alpha), r), "P", "bernstein_szego")


def chebyshev2_q_arc(alpha: float) -> ArcWeight:
    """Q form with Chebyshev-2 polynomials; the same weight as
    ``bernstein_szego_arc(alpha, 1)``."""
    return ArcWeight(alpha, pb.CHEBYSHEV2, "Q", "chebyshev2_q")


# ---------------------------------------------------------------------------
# weight evaluation
# ---------------------------------------------------------------------------

def arc_weight_eval(fw: ArcWeight, theta):
    """f(theta); zero off the arc, theta reduced mod 2 pi."""
    th = np.mod(np.asarray(theta, dtype=float), 2.0 * math.pi)
    a = fw.alpha
    on = (th >= a) & (th <= 2.0 * math.pi - a)
    out = np.zeros_like(th)
    if np.any(on):
        t = th[on]
        sh = np.sin(0.5 * t)
        if fw.form == "indicator":
            out[on] = 1.0
        else:
            g = fw.gamma
            x = np.cos(0.5 * t) / g
            # 1 - x^2 without cancellation near the arc endpoints
            omx2 = np.sin(0.5 * (t - a)) * np.sin(0.5 * (t + a)) / (g * g)
            omx2 = np.maximum(omx2, 0.0)
            with np.errstate(divide="ignore"):
                wv = fw.base.weight(x, omx2)
            out[on] = wv * sh if fw.form == "P" else wv / sh
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# the arc measure in psi
# ---------------------------------------------------------------------------

def half_angle(fw: ArcWeight, psi):
    """theta/2 = arccos(gamma cos psi) and sin^2(theta/2), both accurate."""
    c = np.cos(psi)
    s = np.sin(psi)
    s2 = s * s + (fw.eps * c) ** 2
    return np.arctan2(np.sqrt(s2), fw.gamma * c), s2


def psi_density(fw: ArcWeight, psi):
    """rho(psi) with (1/2pi) int g f dtheta = (gamma/pi) int_0^pi g rho dpsi."""
    psi = np.asarray(psi, dtype=float)
    _, s2 = half_angle(fw, psi)
    if fw.form == "indicator":
        return np.sin(psi) / np.sqrt(s2)
    d = fw.base.psi_density(psi)
    return d if fw.form == "P" else d / s2


def node_count(fw: ArcWeight, freq: int) -> int:
    """Gauss-Legendre size for (gamma/pi) int cos(freq * theta/2)... rho dpsi."""
    m = 2 * int(freq) + 64
    d = fw.pole_distance()
    if d is not None and math.isfinite(d):
        m += int(math.ceil(18.0 / math.sqrt(d)))
    return m


def arc_measure(fw: ArcWeight, m: int):
    """(theta_j, weights_j): sum_j W_j g(theta_j) ~ (1/2pi) int g f dtheta."""
    psi, w = gauss_legendre(0.0, math.pi, m)
    ha, _ = half_angle(fw, psi)
    return 2.0 * ha, (fw.gamma / math.pi) * w * psi_density(fw, psi)


# ---------------------------------------------------------------------------
# t_k
# ---------------------------------------------------------------------------

_t_lock = threading.Lock()

T_METHODS = ("auto", "quadrature", "recurrence")
# relative cancellation in the psi quadrature above which auto switches route
_T_COND_MAX = 1e3


def _t_quadrature(fw: ArcWeight, k: int, m: int) -> tuple[int, float, float]:
    """(sign, log|t_k|, cancellation factor) from the psi quadrature."""
    psi, w = gauss_legendre(0.0, math.pi, m)
    ha, _ = half_angle(fw, psi)
    v, ls = pb.eval_scaled(fw.base, k, np.cos(psi))
    shift = float(np.max(ls))
    terms = w * np.cos(k * ha) * v * np.exp(ls - shift) * psi_density(fw, psi)
    total = math.fsum(terms)
    if total == 0.0:
        return 0, -math.inf, math.inf
    cond = float(np.sum(np.abs(terms))) / abs(total)
    return (1 if total > 0 else -1), math.log(abs(total) * fw.gamma / math.pi) + shift, cond


def _t_recurrence(fw: ArcWeight, k: int) -> tuple[int, float]:
    # t_k = q_k(1/gamma) / pi with q_k the second-kind function of the base
    # family: cos(k theta/2) = T_k(gamma x) differs from a function linear in x
    # by a multiple of 1 - gamma^2 x^2, and Q_k kills the polynomial quotient.
    # t_0 has a positive integrand, so its quadrature is always well conditioned.
    sign, l0, _ = _t_quadrature(fw, 0, node_count(fw, 0))
    if k == 0:
        return sign, l0
    ratios = pb.second_kind_ratios(fw.base, k, 1.0 / fw.gamma)
    return sign, l0 + math.fsum(np.log(ratios))


@lru_cache(maxsize=4096)
def _t_log_cached(fw: ArcWeight, k: int, m: int, method: str) -> tuple[int, float]:
    if method == "recurrence":
        return _t_recurrence(fw, k)
    sign, lg, cond = _t_quadrature(fw, k, m)
    if method == "auto" and k > 0 and cond > _T_COND_MAX:
        return _t_recurrence(fw, k)
    return sign, lg


def t_coeff_log(fw: ArcWeight, k: int, m: int | None = None, method: str = "auto") -> LogSigned:
    """t_k = (1/2pi) int z^(k/2) Q_k(x) f dtheta for a Q-form weight.

    ``quadrature`` integrates in psi with m nodes; ``recurrence`` uses the
    second-kind function of the base family; ``auto`` takes the quadrature
    unless its terms cancel by more than three digits.
    """
    if fw.form != "Q":
        raise InvalidArgument("t_k is defined for Q-form weights")
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    if method not in T_METHODS:
        raise InvalidArgument(f"method must be one of {T_METHODS}")
    if m is None:
        m = node_count(fw, k)
    with _t_lock:
        sign, lg = _t_log_cached(fw, int(k), int(m), method)
    return LogSigned(sign, lg)


def t_coeff(fw: ArcWeight, k: int, m: int | None = None, method: str = "auto") -> float:
    return float(t_coeff_log(fw, k, m, method))


def _t_nonzero(fw: ArcWeight, k: int) -> LogSigned:
    t = t_coeff_log(fw, k)
    if t.sign == 0:
        raise DegenerateFamilyError(f"t_{k} vanishes")
    return t


# ---------------------------------------------------------------------------
# ratios, Verblunsky coefficients and norms
# ---------------------------------------------------------------------------

def _p_at_inv_gamma(fw: ArcWeight, n: int) -> LogSigned:
    val = pb.monic_log(fw.base, n, 1.0 / fw.gamma)
    if val.sign == 0:
        raise DegenerateFamilyError(f"P_{n}(1/gamma) vanishes")
    return val


def p_ratio(fw: ArcWeight, n: int) -> float:
    """P_{n+1}(1/gamma) / P_n(1/gamma)."""
    return float(_p_at_inv_gamma(fw, n + 1) / _p_at_inv_gamma(fw, n))


def verblunsky(fw: ArcWeight, n: int) -> float:
    """a_{n-1} = -Phi_n(0), n >= 1 (a_{-1} = -1 is not returned here)."""
    if n < 1:
        raise InvalidArgument("n must be at least 1")
    if fw.form == "P":
        return 1.0 - 2.0 * fw.gamma * p_ratio(fw, n)
    if fw.form == "Q":
        ratio = float(_t_nonzero(fw, n) / _t_nonzero(fw, n - 1))
        return 2.0 * fw.gamma * ratio - 1.0
    raise InvalidArgument("no closed construction for the indicator weight")


def chi_sq_inv(fw: ArcWeight, n: int) -> LogSigned:
    """chi_n^(-2) = ||Phi_n||^2 in the normalised arc measure."""
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    g = fw.gamma
    if fw.form == "P":
        rho = _p_at_inv_gamma(fw, n + 1) / _p_at_inv_gamma(fw, n)
        lg = 2 * n * math.log(2 * g) + 2 * math.log(g) - LNPI + rho.logmag + pb.log_norm_h(fw.base, n)
        return LogSigned(rho.sign, lg)
    if fw.form == "Q":
        if n == 0:
            return _t_nonzero(fw, 0)
        ratio = _t_nonzero(fw, n) / _t_nonzero(fw, n - 1)
        lg = 2 * n * math.log(2 * g) + ratio.logmag - LNPI + pb.log_norm_h(fw.base, n - 1)
        return LogSigned(ratio.sign, lg)
    raise InvalidArgument("no closed construction for the indicator weight")


# ---------------------------------------------------------------------------
# circle polynomials
# ---------------------------------------------------------------------------

_Z1_TOL = 1e-6
_Z1_STEP = 1e-3


def _theta_of(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.mod(np.angle(z), 2.0 * math.pi)


def _phi_P_theta(fw: ArcWeight, n: int, th: np.ndarray) -> np.ndarray:
    g = fw.gamma
    zh = np.exp(0.5j * th)
    x = np.cos(0.5 * th) / g
    rho = p_ratio(fw, n)
    v1, l1 = pb.eval_scaled(fw.base, n + 1, x)
    v0, l0 = pb.eval_scaled(fw.base, n, x)
    lpre = (n + 1) * math.log(2 * g)
    num = zh * v1 * np.exp(l1 + lpre) - rho * v0 * np.exp(l0 + lpre)
    with np.errstate(invalid="ignore", divide="ignore"):
        return zh ** n * num / (np.exp(1j * th) - 1.0)


def _phi_P_at_one(fw: ArcWeight, n: int) -> float:
    # limit of the removable singularity: gamma (2 gamma)^n P_{n+1}(1/gamma)
    p = _p_at_inv_gamma(fw, n + 1)
    return p.sign * math.exp(p.logmag + math.log(fw.gamma) + n * math.log(2 * fw.gamma))


def phi_from_P(fw: ArcWeight, n: int, z):
    """Phi_n(z) from the interval polynomials P_n of the weight w."""
    if fw.form != "P":
        raise InvalidArgument("phi_from_P needs a P-form weight")
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    scalar = np.ndim(z) == 0
    th = np.atleast_1d(_theta_of(z))
    if n == 0:
        out = np.ones_like(th, dtype=complex)
        return complex(out[0]) if scalar else out
    d = np.minimum(th, 2.0 * math.pi - th)  # angular distance to z = 1
    near = d < _Z1_TOL
    out = np.empty_like(th, dtype=complex)
    far = ~near
    if np.any(far):
        out[far] = _phi_P_theta(fw, n, th[far])
    if np.any(near):
        # two-point symmetric expansion around z = 1 with the exact centre value
        c = _phi_P_at_one(fw, n)
        h = _Z1_STEP
        fp, fm = _phi_P_theta(fw, n, np.array([h, 2.0 * math.pi - h]))
        d1 = (fp - fm) / (2.0 * h)
        d2 = (fp + fm - 2.0 * c) / (h * h)
        dt = np.where(th[near] > math.pi, th[near] - 2.0 * math.pi, th[near])
        out[near] = c + d1 * dt + 0.5 * d2 * dt * dt
    return complex(out[0]) if scalar else out


def phi_from_Q(fw: ArcWeight, n: int, z):
    """Phi_n(z) from the polynomials Q_n of w(x)(1 - gamma^2 x^2)."""
    if fw.form != "Q":
        raise InvalidArgument("phi_from_Q needs a Q-form weight")
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    scalar = np.ndim(z) == 0
    th = np.atleast_1d(_theta_of(z))
    if n == 0:
        out = np.ones_like(th, dtype=complex)
        return complex(out[0]) if scalar else out
    g = fw.gamma
    zh = np.exp(0.5j * th)
    x = np.cos(0.5 * th) / g
    ratio = float(_t_nonzero(fw, n) / _t_nonzero(fw, n - 1))
    v1, l1 = pb.eval_scaled(fw.base, n, x)
    v0, l0 = pb.eval_scaled(fw.base, n - 1, x)
    lpre = n * math.log(2 * g)
    out = zh ** n * (v1 * np.exp(l1 + lpre) - ratio * v0 * np.exp(l0 + lpre) / zh)
    return complex(out[0]) if scalar else out


def phi(fw: ArcWeight, n: int, z):
    return phi_from_P(fw, n, z) if fw.form == "P" else phi_from_Q(fw, n, z)


def phi_star(fw: ArcWeight, n: int, z):
    """Phi_n^*(z) = z^n conj(Phi_n(1/conj z)) for z on the unit circle."""
    z = np.asarray(z, dtype=complex)
    return z ** n * np.conj(phi(fw, n, z))


@dataclass(frozen=True)
class CirclePoly:
    n: int
    coefficients: np.ndarray
    chi_sq_inv: LogSigned

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coefficients)


def circle_poly(fw: ArcWeight, n: int, imag_tol: float = 1e-10) -> CirclePoly:
    """Coefficients c_0..c_n of Phi_n from its values at 2(n+1) roots of unity."""
    npts = 2 * (n + 1)
    z = np.exp(2j * math.pi * np.arange(npts) / npts)
    vals = phi(fw, n, z)
    c = np.fft.fft(vals) / npts
    scale = max(1.0, float(np.max(np.abs(c[: n + 1]))))
    if np.max(np.abs(c.imag)) > imag_tol * scale:
        raise ArithmeticError("circle polynomial has non-real coefficients")
    if np.max(np.abs(c[n + 1:])) > imag_tol * scale:
        raise ArithmeticError("circle polynomial exceeds its degree")
    coef = c.real[: n + 1].copy()
    if abs(coef[n] - 1.0) > imag_tol * scale:
        raise ArithmeticError(f"leading coefficient {coef[n]} is not 1")
    coef[n] = 1.0
    coef.setflags(write=False)
    return CirclePoly(n, coef, chi_sq_inv(fw, n))


def gram_defect(fw: ArcWeight, nmax: int, m: int = 400) -> float:
    """max |<Phi_n, Phi_k>_f - delta_nk chi_n^(-2)| / chi_n^(-1) chi_k^(-1)."""
    th, W = arc_measure(fw, m)
    z = np.exp(1j * th)
    V = np.array([phi(fw, n, z) for n in range(nmax + 1)])
    G = (V * W) @ V.conj().T
    norms = np.array([math.sqrt(float(chi_sq_inv(fw, n))) for n in range(nmax + 1)])
    expect = np.diag(norms ** 2)
    return float(np.max(np.abs(G - expect) / np.outer(norms, norms)))


def interval_from_circle(fw: ArcWeight, n: int, x):
    """P_n(x) rebuilt as (Phi_n + Phi_n^*) / ((2 gamma)^n (1 - a_{n-1}) z^(n/2))."""
    x = np.asarray(x, dtype=float)
    th = 2.0 * np.arccos(fw.gamma * x)
    z = np.exp(1j * th)
    a = -1.0 if n == 0 else verblunsky(fw, n)
    num = phi(fw, n, z) + phi_star(fw, n, z)
    return (num / ((2 * fw.gamma) ** n * (1.0 - a) * np.exp(0.5j * n * th))).real


__all__ = [
    "ArcWeight", "CirclePoly", "arc_measure", "arc_weight_eval", "bernstein_szego_arc",
    "chebyshev2_q_arc", "chebyshev_arc", "chi_sq_inv", "circle_poly", "gram_defect",
    "half_angle", "indicator", "interval_from_circle", "inv_sine_half", "node_count",
    "phi", "phi_from_P", "phi_from_Q", "phi_star", "psi_density", "sine_half",
    "T_METHODS", "t_coeff", "t_coeff_log", "verblunsky",
]
