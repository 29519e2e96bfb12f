"""The acceptance checks, one function per criterion.

Each check returns a :class:`CheckResult` with the largest observed
deviation and the tolerance it was held to.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import arcmap as am
from . import asympt as asy
from . import polybase as pb
from . import toeplitz as tp
from .fredholm import closed_form_bs, fredholm_det
from .kernels import (KernelSpec, bs_kernel, chebyshev_kernel, compatible_representations,
                      kernel_eval, kernel_from_symbol, sine_kernel)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} -- {self.detail} ({self.seconds:.1f}s)"


Z_GRID = np.round(np.arange(-10.0, 10.0 + 1e-9, 0.25), 10)

# weight families exercised by the product/direct and OPUC checks
ARC_FAMILIES = (
    ("chebyshev1", None),
    ("chebyshev2", None),
    ("legendre", None),
    ("bs", 0.5),
    ("bs", 2.0),
    ("f2", None),
    ("chebyshev2_q", None),
)


def _timed(fn):
    def run() -> CheckResult:
        t0 = time.perf_counter()
        res = fn()
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def criterion_1() -> CheckResult:
    """Bernstein-Szego Fredholm determinant against its closed form."""
    worst = 0.0
    for r in (0.0, 0.5, 1.0, 2.0):
        for s in (0.5, 1.0, 2.0):
            err = abs(fredholm_det(bs_kernel(r), s, 48) - closed_form_bs(r, s))
            worst = max(worst, err)
    return CheckResult(1, "K_BS determinant closed form", worst <= 1e-8,
                       f"max abs err {worst:.2e} <= 1e-8", values={"max_err": worst})


@_timed
def criterion_2() -> CheckResult:
    """Chebyshev kernel: determinant and pointwise agreement with K_BS(0)."""
    det_err = max(abs(fredholm_det(chebyshev_kernel(), s, 48) - closed_form_bs(0.0, s))
                  for s in (0.5, 1.0, 2.0))
    kc = kernel_eval(chebyshev_kernel(), Z_GRID)
    kb = kernel_eval(KernelSpec("bernstein_szego", 0.0, "cosh_form"), Z_GRID)
    pt = float(np.max(np.abs(kc - kb)))
    ok = det_err <= 1e-8 and pt <= 1e-10
    return CheckResult(2, "K_C determinant and r = 0 reduction", ok,
                       f"det err {det_err:.2e} <= 1e-8, pointwise {pt:.2e} <= 1e-10",
                       values={"det_err": det_err, "pointwise": pt})


@_timed
def criterion_3() -> CheckResult:
    """Pairwise agreement of the kernel representations."""
    worst = 0.0
    for r in (0.3, 1.0, 2.0):
        reps = compatible_representations("bernstein_szego", r)
        vals = [kernel_eval(KernelSpec("bernstein_szego", r, rep), Z_GRID) for rep in reps]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                worst = max(worst, float(np.max(np.abs(vals[i] - vals[j]))))
    return CheckResult(3, "kernel representation equivalence", worst <= 1e-8,
                       f"max pairwise diff {worst:.2e} <= 1e-8", values={"max_diff": worst})


@_timed
def criterion_4() -> CheckResult:
    """Fourier inversion of 1 - sigma against the kernel."""
    worst = 0.0
    for r in (0.0, 1.0, 2.0):
        spec = chebyshev_kernel() if r == 0.0 else bs_kernel(r)
        diff = np.abs(kernel_from_symbol(r, Z_GRID) - kernel_eval(spec, Z_GRID))
        worst = max(worst, float(np.max(diff)))
    return CheckResult(4, "symbol consistency", worst <= 1e-5,
                       f"max diff {worst:.2e} <= 1e-5", values={"max_diff": worst})


def product_direct_gap(nmax: int = 30, s_values=(0.5, 1.0, 2.0)) -> float:
    worst = 0.0
    for key, r in ARC_FAMILIES:
        for s in s_values:
            for n in range(nmax + 1):
                for alpha in (2.0 * s / max(n, 1), 2.0 * s / nmax):
                    if alpha >= math.pi:
                        continue
                    fw = tp.make_arc(key, alpha, r)
                    direct = tp.toeplitz_logdet_direct(fw, n)
                    for path in ("telescoped", "factors"):
                        prod = tp.toeplitz_logdet_product(fw, n, path)
                        if prod.sign != direct.sign:
                            return math.inf
                        worst = max(worst, abs(prod.logmag - direct.logmag))
    return worst


@_timed
def criterion_5() -> CheckResult:
    """Product formula against direct elimination."""
    worst = product_direct_gap()
    return CheckResult(5, "product vs direct Toeplitz log-determinant", worst <= 1e-7,
                       f"max |diff| {worst:.2e} <= 1e-7", values={"max_diff": worst})


@_timed
def criterion_6() -> CheckResult:
    """alpha = 2s/n scaling limit."""
    ok = True
    parts = []
    for r, s in ((0.0, 1.0), (1.0, 1.0), (2.0, 0.5)):
        rows = tp.scaling_sequence("bs", s, [50, 100, 200, 400], r)
        devs = [row["deviation"] for row in rows]
        rel = devs[-1] / rows[-1]["closed_form"]
        mono = all(b < a for a, b in zip(devs, devs[1:]))
        ok = ok and mono and rel <= 0.02
        parts.append(f"(r={r:g},s={s:g}) rel {rel:.2%}{'' if mono else ' non-monotone'}")
    return CheckResult(6, "Toeplitz scaling limit", ok, "; ".join(parts))


@_timed
def criterion_7() -> CheckResult:
    """Arc indicator at n = 400 against the sine-kernel determinant."""
    toe = tp.scaling_sequence("f0", 1.0, [400])[0]["value"]
    fred = fredholm_det(sine_kernel(), 1.0, 64)
    rel = abs(toe - fred) / fred
    return CheckResult(7, "sine-kernel cross-check", rel <= 0.02,
                       f"D_400 = {toe:.6f}, Nystrom = {fred:.6f}, rel {rel:.2%} <= 2%",
                       values={"toeplitz": toe, "fredholm": fred})


@_timed
def criterion_8() -> CheckResult:
    """Ratio bands of the large-n asymptotics."""
    ok = True
    parts = []
    for s in (0.5, 1.0, 2.0):
        r1 = asy.asymptotic_report("f1", s, [400])[0].ratio
        r2 = asy.asymptotic_report("f2", s, [400])[0].ratio
        hb = asy.hilb_ratio(400, s)
        ok = ok and 0.98 <= r1 <= 1.02 and 0.95 <= r2 <= 1.05 and abs(hb - 1.0) <= 0.01
        parts.append(f"s={s:g}: f1 {r1:.4f}, f2 {r2:.4f}, hilb {hb:.4f}")
    an = asy.a_n_ratio(200)
    ok = ok and abs(an - 1.0) <= 0.01
    parts.append(f"A_200 {an:.6f}")
    return CheckResult(8, "determinant asymptotics", ok, "; ".join(parts))


def opuc_defects(alphas=(0.3, 1.0, 2.0), nmax: int = 12, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    z = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, 20))
    x = rng.uniform(-1.0, 1.0, 20)
    out = {"orthogonality": 0.0, "recurrence": 0.0, "max_abs_a": 0.0, "reconstruction": 0.0}
    for key, r in ARC_FAMILIES:
        for alpha in alphas:
            fw = tp.make_arc(key, alpha, r)
            out["orthogonality"] = max(out["orthogonality"], am.gram_defect(fw, nmax, 400))
            for n in range(nmax + 1):
                a = am.verblunsky(fw, n + 1)
                out["max_abs_a"] = max(out["max_abs_a"], abs(a))
                nxt = am.phi(fw, n + 1, z)
                rhs = z * am.phi(fw, n, z) - a * am.phi_star(fw, n, z)
                res = np.max(np.abs(nxt - rhs)) / np.max(np.abs(nxt))
                out["recurrence"] = max(out["recurrence"], float(res))
                if fw.form == "P":
                    ref = pb.eval_monic(fw.base, n, x)
                    rec = am.interval_from_circle(fw, n, x)
                    res = np.max(np.abs(rec - ref)) / np.max(np.abs(ref))
                    out["reconstruction"] = max(out["reconstruction"], float(res))
    return out


def bs_orthonormality(kmax: int = 8) -> float:
    worst = 0.0
    for g in (0.5, 0.9, 0.99, 0.999):
        for r in (0.0, 0.5, 1.0, 2.0):
            fam = pb.bernstein_szego(g, r)
            worst = max(worst, pb.orthonormality_defect(fam, kmax, pb.matched_rule(fam, kmax)))
    return worst


@_timed
def criterion_9() -> CheckResult:
    """Circle-polynomial property suite."""
    d = opuc_defects()
    bs = bs_orthonormality()
    ok = (d["orthogonality"] <= 1e-8 and d["recurrence"] <= 1e-9 and d["max_abs_a"] < 1.0
          and d["reconstruction"] <= 1e-9 and bs <= 1e-10)
    detail = (f"orth {d['orthogonality']:.1e}, recurrence {d['recurrence']:.1e}, "
              f"max|a| {d['max_abs_a']:.4f}, reconstruction {d['reconstruction']:.1e}, "
              f"BS orthonormality {bs:.1e}")
    return CheckResult(9, "OPUC property suite", ok, detail, values={**d, "bs": bs})


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all(numbers=None) -> list[CheckResult]:
    numbers = sorted(CRITERIA) if numbers is None else sorted(numbers)
    return [CRITERIA[k]() for k in numbers]
