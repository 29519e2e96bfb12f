"""Convolution kernels K(z) of the Wiener-Hopf operators and their symbol.

The Bernstein-Szego kernel

    K_BS(r, z) = sin z/(pi z) - (1/pi) int_1^inf cos(z u) g(u) du,
    g(u) = u sqrt(u^2-1)/(u^2-1+r^2) - 1          (u = cosh t)

is evaluated three ways:

``cosh_form``   the integral above, rotated onto u = 1 + i v;
``sine_form``   the integrated-by-parts form (r > 0), rotated the same way;
``bessel_form`` r = 1 only: (1/2)(1 - int_0^|z| J1(t)/t dt).

On the rotated path e^{i z u} becomes e^{i z} e^{-z v}, so the slowly
decaying oscillatory integral turns into an exponentially damped one.  With
v = w^2 the square-root branch point at u = 1 is removed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .errors import InvalidArgument
from .special import bessel_j, make_rule

KINDS = ("sine", "chebyshev_kc", "bernstein_szego", "zero")
REPRESENTATIONS = ("cosh_form", "sine_form", "bessel_form", "auto")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    r: float = 0.0
    representation: str = "auto"
    panel_nodes: int = 30

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown kernel kind {self.kind!r}")
        if self.representation not in REPRESENTATIONS:
            raise InvalidArgument(f"unknown representation {self.representation!r}")
        if self.r < 0:
            raise InvalidArgument("r must be nonnegative")
        object.__setattr__(self, "r", float(self.r))
        rep = self.representation
        if self.kind == "bernstein_szego":
            if rep == "sine_form" and self.r == 0.0:
                raise InvalidArgument("sine_form needs r > 0")
            if rep == "bessel_form" and self.r != 1.0:
                raise InvalidArgument("bessel_form needs r = 1")
        elif self.kind == "chebyshev_kc":
            if rep == "sine_form":
                raise InvalidArgument("chebyshev_kc has no sine_form")
        elif rep not in ("auto", "cosh_form"):
            raise InvalidArgument(f"{self.kind} kernel has a single representation")


def sine_kernel() -> KernelSpec:
    return KernelSpec("sine")


def chebyshev_kernel(representation: str = "cosh_form") -> KernelSpec:
    return KernelSpec("chebyshev_kc", 0.0, representation)


def bs_kernel(r: float, representation: str = "auto") -> KernelSpec:
    return KernelSpec("bernstein_szego", r, representation)


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def sinc_over_pi(z):
    """sin z / (pi z) with the removable point filled."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-8
    zz = np.where(small, 1.0, z)
    return np.where(small, (1.0 - z * z / 6.0) / math.pi, np.sin(zz) / (math.pi * zz))


@lru_cache(maxsize=16)
def _w_rule(nper: int, wmin: float = 1e-4, wmax: float = 32.0, ntail: int = 40):
    """Nodes in w (v = w^2) with weights dv = 2 w dw folded in."""
    rule = make_rule("gauss_legendre", nper)
    edges = [0.0]
    e = wmin
    while e < wmax:
        edges.append(e)
        e *= 2.0
    edges.append(wmax)
    ws, wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, wq = rule.mapped(a, b)
        ws.append(x)
        wts.append(wq)
    tail = make_rule("gauss_legendre", ntail)
    tau, wt = tail.mapped(0.0, 1.0)
    ws.append(wmax / tau)
    wts.append(wt * wmax / (tau * tau))
    w = np.concatenate(ws)
    dw = np.concatenate(wts)
    return w * w, 2.0 * w * dw


def _rotated_u(v):
    # u = 1 + i v with sqrt(u - 1) sqrt(u + 1) on the principal branches
    u = 1.0 + 1j * v
    root = np.sqrt(1j * v) * np.sqrt(2.0 + 1j * v)
    return u, root


def _g_rotated(r: float, v):
    """g(u) = u sqrt(u^2-1)/(u^2-1+r^2) - 1 in a cancellation-free form."""
    u, root = _rotated_u(v)
    p = u * u - 1.0
    r2 = r * r
    return (p * (1.0 - 2.0 * r2) - r2 * r2) / ((p + r2) * (u * root + p + r2))


def _phi_rotated(r: float, v):
    """(r^2 u^2 + (r^2-1)(u^2-1)) / (sqrt(u^2-1) (u^2-1+r^2)^2)."""
    u, root = _rotated_u(v)
    p = u * u - 1.0
    r2 = r * r
    return (r2 * u * u + (r2 - 1.0) * p) / (root * (p + r2) ** 2)


@lru_cache(maxsize=64)
def _cosh_table(r: float, nper: int):
    v, dv = _w_rule(nper)
    return v, dv * _g_rotated(r, v)


@lru_cache(maxsize=64)
def _sine_table(r: float, nper: int):
    v, dv = _w_rule(nper)
    return v, dv * _phi_rotated(r, v)


def _chunks(z: np.ndarray, size: int = 512):
    for lo in range(0, z.size, size):
        yield slice(lo, min(lo + size, z.size))


def _bs_cosh(r: float, z: np.ndarray, nper: int) -> np.ndarray:
    v, gw = _cosh_table(r, nper)
    az = np.abs(z)
    out = np.empty_like(az)
    for sl in _chunks(az):
        J = np.exp(-np.outer(az[sl], v)) @ gw
        out[sl] = np.real(1j * np.exp(1j * az[sl]) * J)
    return sinc_over_pi(az) - out / math.pi


def _bs_sine(r: float, z: np.ndarray, nper: int) -> np.ndarray:
    v, pw = _sine_table(r, nper)
    az = np.abs(z)
    out = np.empty_like(az)
    for sl in _chunks(az):
        zz = az[sl]
        zs = np.where(zz == 0.0, 1.0, zz)
        E = np.exp(-np.outer(zz, v))
        # the real part of the undamped integral vanishes, so only
        # (e^{-zv} - 1)/z enters and the 1/z is harmless
        D = np.where(zz[:, None] == 0.0, -v[None, :], np.expm1(-np.outer(zz, v)) / zs[:, None])
        a_over_z = D @ pw.real
        im_j = E @ pw.imag
        sinc = np.where(zz == 0.0, 1.0, np.sin(zs) / zs)
        out[sl] = np.cos(zz) * a_over_z - sinc * im_j
    return out / math.pi


def _bs_bessel(z: np.ndarray) -> np.ndarray:
    az = np.abs(z)
    out = np.empty_like(az)
    rule = make_rule("gauss_legendre", 24)
    for i, zi in enumerate(az):
        if zi == 0.0:
            out[i] = 0.5
            continue
        npan = max(1, int(math.ceil(zi / 2.0)))
        edges = np.linspace(0.0, zi, npan + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            t, w = rule.mapped(a, b)
            total += float(np.dot(w, bessel_j(1, t) / t))
        out[i] = 0.5 * (1.0 - total)
    return out


def _kc_angle(z: np.ndarray) -> np.ndarray:
    """sin z/(pi z) - (1/pi) int_0^inf cos(z cosh t) e^{-t} dt, the integral
    taken as int_0^{pi/2} sin(phi - |z| cos phi) d phi."""
    az = np.abs(z)
    out = np.empty_like(az)
    rule = make_rule("gauss_legendre", 32)
    for i, zi in enumerate(az):
        npan = max(1, int(math.ceil(zi / 4.0)))
        edges = np.linspace(0.0, 0.5 * math.pi, npan + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            p, w = rule.mapped(a, b)
            total += float(np.dot(w, np.sin(p - zi * np.cos(p))))
        out[i] = total
    return sinc_over_pi(az) - out / math.pi


def _resolve(spec: KernelSpec, az: np.ndarray) -> np.ndarray:
    """Per-point representation for ``auto``."""
    if spec.representation != "auto":
        return np.full(az.shape, spec.representation, dtype=object)
    if spec.kind == "bernstein_szego" and spec.r >= 0.1:
        return np.where(az >= 1.0, "sine_form", "cosh_form").astype(object)
    return np.full(az.shape, "cosh_form", dtype=object)


def kernel_eval(spec: KernelSpec, z):
    """K(z) for a scalar or array z."""
    z = np.asarray(z, dtype=float)
    shape = z.shape
    zf = np.abs(z.ravel())
    if spec.kind == "zero":
        out = np.zeros_like(zf)
    elif spec.kind == "sine":
        out = sinc_over_pi(zf)
    elif spec.kind == "chebyshev_kc":
        if spec.representation == "bessel_form":
            out = 0.5 * bessel_j(1, zf)
        else:
            out = _kc_angle(zf)
    else:
        out = np.empty_like(zf)
        reps = _resolve(spec, zf)
        for rep in ("cosh_form", "sine_form", "bessel_form"):
            mask = reps == rep
            if not np.any(mask):
                continue
            if rep == "cosh_form":
                out[mask] = _bs_cosh(spec.r, zf[mask], spec.panel_nodes)
            elif rep == "sine_form":
                out[mask] = _bs_sine(spec.r, zf[mask], spec.panel_nodes)
            else:
                out[mask] = _bs_bessel(zf[mask])
    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def compatible_representations(kind: str, r: float) -> tuple[str, ...]:
    if kind == "bernstein_szego":
        reps = ["cosh_form"]
        if r > 0:
            reps.append("sine_form")
        if r == 1.0:
            reps.append("bessel_form")
        return tuple(reps)
    if kind == "chebyshev_kc":
        return ("cosh_form", "bessel_form")
    return ("cosh_form",)


# ---------------------------------------------------------------------------
# symbol and Fourier inversion
# ---------------------------------------------------------------------------

def symbol_sigma(r: float, xi):
    """sigma(r, xi): 0 for |xi| <= 1, |xi| sqrt(xi^2-1)/(xi^2-1+r^2) beyond."""
    xi = np.abs(np.asarray(xi, dtype=float))
    out = np.zeros_like(xi)
    big = xi > 1.0
    x = xi[big]
    p = (x - 1.0) * (x + 1.0)
    with np.errstate(divide="ignore"):
        out[big] = x * np.sqrt(p) / (p + r * r)
    return out if out.ndim else float(out)


def symbol_tail_coeffs(r: float) -> tuple[float, float]:
    """c2, c4 with 1 - sigma = c2/xi^2 + c4/xi^4 + O(xi^-6)."""
    b = r * r - 1.0
    return b + 0.5, -(b * b + 0.5 * b - 0.125)


def _cos_over_sq_tail(z: np.ndarray, X: float) -> np.ndarray:
    """int_X^inf cos(z xi)/xi^2 d xi."""
    az = np.abs(z)
    si, _ = sici(az * X)
    return np.cos(az * X) / X - az * (0.5 * math.pi - si)


@lru_cache(maxsize=32)
def _symbol_nodes(r: float, X: float, nper: int):
    rule = make_rule("gauss_legendre", nper)
    xs, ws = [], []
    # xi = cosh t on [1, 2]; graded panels towards t = 0 where 1 - sigma
    # has its square-root behaviour
    tmax = math.acosh(2.0)
    edges = [0.0]
    e = 1e-4
    while e < tmax:
        edges.append(e)
        e *= 2.0
    edges.append(tmax)
    for a, b in zip(edges[:-1], edges[1:]):
        t, w = rule.mapped(a, b)
        sh = np.sinh(t)
        ch = np.cosh(t)
        # (1 - sigma) dxi = (sinh t - cosh t sinh^2 t / (sinh^2 t + r^2)) dt
        dens = sh - ch * sh * sh / (sh * sh + r * r) if r > 0 else sh - ch
        xs.append(ch)
        ws.append(w * dens)
    # [2, X]: unit panels
    for a in np.arange(2.0, X, 1.0):
        x, w = rule.mapped(a, min(a + 1.0, X))
        xs.append(x)
        ws.append(w * (1.0 - symbol_sigma(r, x)))
    return np.concatenate(xs), np.concatenate(ws)


def kernel_from_symbol(r: float, z, cutoff: float = 400.0, panel_nodes: int = 20):
    """(1/pi) int_0^inf (1 - sigma(r, xi)) cos(xi z) d xi by real-axis
    quadrature, with the xi^-2 asymptote integrated exactly past ``cutoff``."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z.ravel())
    xs, ws = _symbol_nodes(float(r), float(cutoff), panel_nodes)
    c2, _ = symbol_tail_coeffs(r)
    body = np.cos(np.outer(az, xs)) @ ws
    out = (sinc_over_pi(az) * math.pi + body + c2 * _cos_over_sq_tail(az, cutoff)) / math.pi
    out = out.reshape(z.shape)
    return float(out) if out.ndim == 0 else out


__all__ = [
    "KernelSpec", "KINDS", "REPRESENTATIONS", "bs_kernel", "chebyshev_kernel",
    "compatible_representations", "kernel_eval", "kernel_from_symbol", "sine_kernel",
    "sinc_over_pi", "symbol_sigma", "symbol_tail_coeffs",
]
