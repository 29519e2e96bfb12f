"""Command-line runner: ``arcdet <command> [flags]``.

Every command prints a table (CSV by default, JSON with ``--format json``).
Exit status: 0 on success, 1 when ``verify-all`` finds a failing criterion,
2 for invalid flags or arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import asympt as asy
from . import toeplitz as tp
from .errors import InvalidArgument
from .fredholm import closed_form_bs, convergence_report, fredholm_det
from .kernels import (KernelSpec, chebyshev_kernel, compatible_representations, kernel_eval,
                      kernel_from_symbol, sine_kernel)

COLUMNS = {
    "fredholm": ["r", "s", "m", "nystrom", "closed_form", "abs_err"],
    "toeplitz": ["family", "r", "s", "n", "logdet_product", "logdet_direct",
                 "closed_form_limit", "deviation"],
    "kernels": ["r", "z", "rep1", "rep2", "rep3", "max_pairwise_diff",
                "from_symbol", "symbol_diff"],
    "asympt": ["family", "n", "s", "exact_logdet", "asymptotic_logdet", "ratio"],
    "converge": ["table", "family", "r", "s", "size", "value", "reference", "abs_err"],
}

PRESETS = {
    "fredholm": {"r": "0,0.5,1,2", "s": "0.5,1,2", "nodes": "48"},
    "toeplitz": {"family": "bs", "r": "0,1,2", "s": "0.5,1", "n": "50,100,200,400"},
    "kernels": {"r": "0,0.3,1,2", "z": "-10:10:0.25"},
    "asympt": {"family": "f1,f2", "s": "0.5,1,2", "n": "400"},
    "converge": {"r": "0,1", "s": "1", "n": "50,100,200,400", "nodes": "8,16,32,64"},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values such as -10:10:0.25 or -1,2 through as arguments
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# flag parsing
# ---------------------------------------------------------------------------

def _floats(text: str | None) -> list[float]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi, step = (float(p) for p in part.split(":"))
            if step <= 0:
                raise UsageError(f"range step must be positive: {part!r}")
            cnt = int(math.floor((hi - lo) / step + 1e-9)) + 1
            out.extend(round(lo + i * step, 12) for i in range(cnt))
        else:
            out.append(float(part))
    return out


def _ints(text: str | None) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _words(text: str | None) -> list[str]:
    return [w.strip() for w in text.split(",") if w.strip()] if text else []


def _threads() -> int:
    raw = os.environ.get("ARCDET_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"ARCDET_THREADS must be an integer, got {raw!r}") from None
    return max(1, val)


def _pmap(fn, items):
    items = list(items)
    workers = min(_threads(), max(1, len(items)))
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _fredholm_rows(args) -> list[dict]:
    rs, ss, ms = _floats(args.r), _floats(args.s), _ints(args.nodes or "48")
    if not rs or not ss:
        raise UsageError("fredholm needs --r and --s")
    grid = [(r, s, m) for r in rs for s in ss for m in ms]

    def one(p):
        r, s, m = p
        spec = KernelSpec("bernstein_szego", r)
        det = fredholm_det(spec, s, m, args.method)
        cf = closed_form_bs(r, s)
        return {"r": r, "s": s, "m": m, "nystrom": det, "closed_form": cf, "abs_err": abs(det - cf)}
    return _pmap(one, grid)


def _toeplitz_rows(args) -> list[dict]:
    fams = _words(args.family) or ["bs"]
    rs = _floats(args.r)
    ss, ns = _floats(args.s), _ints(args.n)
    if not ss or not ns:
        raise UsageError("toeplitz needs --s and --n")
    grid = []
    for fam in fams:
        if fam not in tp.FAMILY_KEYS:
            raise UsageError(f"unknown family {fam!r}; expected one of {', '.join(tp.FAMILY_KEYS)}")
        for r in (rs or [None]) if fam == "bs" else [None]:
            if fam == "bs" and r is None:
                raise UsageError("family bs needs --r")
            grid.extend((fam, r, s, n) for s in ss for n in ns)

    def one(p):
        fam, r, s, n = p
        fw = tp.make_arc(fam, 2.0 * s / n, r)
        prod = None if fw.form == "indicator" else tp.toeplitz_logdet_product(fw, n)
        direct = None
        if args.direct or prod is None:
            direct = tp.toeplitz_logdet_direct(fw, n)
        lim = tp.closed_form_limit(fam, s, r)
        val = float(prod if prod is not None else direct)
        return {
            "family": fam, "r": r, "s": s, "n": n,
            "logdet_product": None if prod is None else prod.logmag,
            "logdet_direct": None if direct is None else direct.logmag,
            "closed_form_limit": lim,
            "deviation": None if lim is None else abs(val - lim),
        }
    return _pmap(one, grid)


def _kernel_rows(args) -> list[dict]:
    rs = _floats(args.r)
    zs = _floats(args.z or "-10:10:0.25")
    if not rs:
        raise UsageError("kernels needs --r")
    rows = []
    for r in rs:
        z = np.array(zs)
        reps = compatible_representations("bernstein_szego", r)
        vals = {rep: kernel_eval(KernelSpec("bernstein_szego", r, rep), z) for rep in reps}
        if r == 0.0:
            # the separately coded Chebyshev kernel stands in as the second form
            vals["sine_form"] = kernel_eval(chebyshev_kernel(), z)
        sym = kernel_from_symbol(r, z)
        stack = np.array(list(vals.values()))
        spread = stack.max(axis=0) - stack.min(axis=0)
        for i, zi in enumerate(zs):
            rows.append({
                "r": r, "z": zi,
                "rep1": vals["cosh_form"][i],
                "rep2": vals["sine_form"][i] if "sine_form" in vals else None,
                "rep3": vals["bessel_form"][i] if "bessel_form" in vals else None,
                "max_pairwise_diff": spread[i],
                "from_symbol": sym[i],
                "symbol_diff": abs(sym[i] - vals["cosh_form"][i]),
            })
    return rows


def _asympt_rows(args) -> list[dict]:
    fams = _words(args.family) or ["f1", "f2"]
    ss, ns = _floats(args.s), _ints(args.n)
    if not ss or not ns:
        raise UsageError("asympt needs --s and --n")
    for fam in fams:
        if fam not in asy.FAMILIES:
            raise UsageError(f"asympt family must be f1 or f2, got {fam!r}")
    grid = [(f, n, s) for f in fams for s in ss for n in ns]

    def one(p):
        f, n, s = p
        rep = asy.asymptotic_report(f, s, [n])[0]
        return {"family": f, "n": n, "s": s, "exact_logdet": rep.exact_logdet.logmag,
                "asymptotic_logdet": rep.asymptotic_logdet.logmag, "ratio": rep.ratio}
    return _pmap(one, grid)


def _converge_rows(args) -> list[dict]:
    rs, ss = _floats(args.r), _floats(args.s)
    ns, ms = _ints(args.n), _ints(args.nodes)
    if not ss:
        raise UsageError("converge needs --s")
    rows = []
    for s in ss:
        for r in rs:
            if ns:
                for row in tp.scaling_sequence("bs", s, sorted(ns), r):
                    rows.append({"table": "scaling", "family": "bs", "r": r, "s": s,
                                 "size": row["n"], "value": row["value"],
                                 "reference": row["closed_form"], "abs_err": row["deviation"]})
            if ms:
                spec = KernelSpec("bernstein_szego", r)
                for row in convergence_report(spec, s, sorted(ms), args.method):
                    rows.append({"table": "nystrom", "family": "bs", "r": r, "s": s,
                                 "size": row["m"], "value": row["det"],
                                 "reference": closed_form_bs(r, s), "abs_err": row["abs_err"]})
        if ms:
            rep = convergence_report(sine_kernel(), s, sorted(ms), args.method)
            for row in rep:
                rows.append({"table": "nystrom", "family": "sine", "r": None, "s": s,
                             "size": row["m"], "value": row["det"],
                             "reference": rep[-1]["det"], "abs_err": row["abs_err"]})
    return rows


def _sort_key(row: dict, cols: list[str]):
    key = []
    for c in cols[:4]:
        v = row.get(c)
        key.append((0, "") if v is None else (1, v) if isinstance(v, str) else (2, v))
    return key


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def _json_value(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    f = float(v)
    return float(format(f, ".15g")) if math.isfinite(f) else None


def render(rows: list[dict], cols: list[str], fmt: str, meta: str) -> str:
    if fmt == "json":
        return json.dumps([{c: _json_value(r.get(c)) for c in cols} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# {meta}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def _meta(args) -> str:
    items = [f"arcdet {__version__}", f"command={args.command}"]
    for k in ("family", "r", "s", "n", "z", "nodes", "method", "preset", "direct"):
        v = getattr(args, k, None)
        if v not in (None, False, ""):
            items.append(f"{k}={v}")
    return " ".join(items)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arcdet", description="Arc Toeplitz and Wiener-Hopf determinant experiments.")
    p.add_argument("--version", action="version", version=f"arcdet {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *flags):
        for f in flags:
            sp.add_argument(f"--{f}", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default=None, help="write the table here instead of stdout")
        sp.add_argument("--preset", choices=("paper",), default=None,
                        help="fill unset flags with the acceptance grid")

    sp = sub.add_parser("fredholm", help="Nystrom determinants of K_BS against the closed form")
    common(sp, "r", "s", "nodes")
    sp.add_argument("--method", choices=("corrected", "symmetric"), default="corrected")
    sp = sub.add_parser("toeplitz", help="Toeplitz determinants along alpha = 2s/n")
    common(sp, "family", "r", "s", "n")
    sp.add_argument("--direct", action="store_true", help="also run dense elimination")
    sp = sub.add_parser("kernels", help="kernel representations and symbol inversion")
    common(sp, "r", "z")
    sp = sub.add_parser("asympt", help="exact against asymptotic determinants")
    common(sp, "family", "s", "n")
    sp = sub.add_parser("converge", help="scaling and Nystrom convergence tables")
    common(sp, "r", "s", "n", "nodes")
    sp.add_argument("--method", choices=("corrected", "symmetric"), default="corrected")
    sp = sub.add_parser("verify-all", help="run the acceptance criteria")
    sp.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-all":
            from .verify import CRITERIA, run_all
            nums = _ints(args.only) if args.only else None
            if nums and any(k not in CRITERIA for k in nums):
                raise UsageError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
            ok = True
            for res in run_all(nums):
                print(res.line(), flush=True)
                ok = ok and res.passed
            print("all criteria passed" if ok else "some criteria FAILED")
            return 0 if ok else 1
        if args.preset == "paper":
            for k, v in PRESETS[args.command].items():
                if getattr(args, k, None) in (None, ""):
                    setattr(args, k, v)
        if args.command == "converge" and not args.r:
            args.r = "0"
        handler = {
            "fredholm": _fredholm_rows, "toeplitz": _toeplitz_rows, "kernels": _kernel_rows,
            "asympt": _asympt_rows, "converge": _converge_rows,
        }[args.command]
        cols = COLUMNS[args.command]
        rows = sorted(handler(args), key=lambda r: _sort_key(r, cols))
        text = render(rows, cols, args.format, _meta(args))
        if args.format == "json":
            print(f"# {_meta(args)}", file=sys.stderr)
        _emit(text, args.output)
        return 0
    except (UsageError, InvalidArgument, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"arcdet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
