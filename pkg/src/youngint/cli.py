"""Command-line interface.

Every subcommand reads ``t,value`` CSV files, writes one JSON report (to
``--out`` or stdout) echoing the effective parameters, and exits with

    0 success, 2 usage, 3 domain error, 4 precondition failure, 5 budget / non-convergence.

Nothing is written unless the whole computation succeeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bounds, integrate, ode, pvar, signals, truncvar
from .errors import BudgetError, DomainError, PreconditionError
from .paths import INTERPS, SampledPath, format_csv, read_csv

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PRECONDITION, EXIT_BUDGET = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


# -- output --------------------------------------------------------------------


def _clean(obj):
    """Plain JSON types; non-finite floats become the strings ``inf``, ``-inf``, ``nan``."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    x = _clean(x)
    return x if isinstance(x, str) else repr(x)


def _write_atomic(dest: str, text: str) -> None:
    dest = Path(dest)
    fd, tmp = tempfile.mkstemp(dir=dest.parent or ".", prefix=f".{dest.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, dest)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(outputs: list[tuple[str | None, str]], stdout) -> None:
    for dest, text in outputs:
        if dest is None or dest == "-":
            stdout.write(text)
        else:
            _write_atomic(dest, text)


# -- inputs --------------------------------------------------------------------


def _load(path: str, interp: str) -> SampledPath:
    if path == "-":
        return read_csv(sys.stdin, interp)
    if not os.path.isfile(path):
        raise UsageError(f"no such file: {path}")
    return read_csv(path, interp)


def _parse_floats(text: str, name: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name}: cannot parse {text!r} as a comma-separated list of numbers") from None


def _parse_signal(text: str) -> signals.SignalRecipe:
    """``family[:key=value,...]``; ``n`` and ``seed`` may appear among the keys."""
    family, _, rest = text.partition(":")
    params, n, seed = {}, 257, 0
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"signal {text!r}: expected key=value, got {item!r}")
        try:
            num = float(val)
        except ValueError:
            raise UsageError(f"signal {text!r}: cannot parse {val!r}") from None
        if key == "n":
            n = int(num)
        elif key == "seed":
            seed = int(num)
        else:
            params[key.strip()] = num
    return signals.SignalRecipe(family.strip(), params, n, seed)


# -- subcommands ---------------------------------------------------------------


def cmd_ttv(args):
    f = _load(args.path, args.interp)
    params = {"delta": args.delta, "interp": args.interp, "method": args.method, "path": args.path}
    res = truncvar.ttv_dp(f, None, args.delta)
    if args.method == "sweep" and args.delta > 0:
        value = truncvar.ttv_sweep(f, None, args.delta)
    else:
        value = res.value
    result = {"value": value, "maximizer": list(res.maximizer), "total_variation": truncvar.ttv(f, None, 0.0)}
    outputs = []
    if args.emit_approximant:
        g = truncvar.optimal_approximant(f, None, args.delta)
        result["approximant_tv"] = truncvar.ttv(g, None, 0.0)
        outputs.append((args.emit_approximant, format_csv(g)))
        params["emit_approximant"] = args.emit_approximant
    return {"command": "ttv", "params": params, "result": result}, outputs


def cmd_pvar(args):
    f = _load(args.path, args.interp)
    res = pvar.pvar_dp(f, None, args.p)
    params = {"p": args.p, "interp": args.interp, "path": args.path}
    result = {"value": res.value, "norm": res.norm, "full_norm": abs(float(f.values[0])) + res.norm,
              "maximizer": list(res.maximizer)}
    return {"command": "pvar", "params": params, "result": result}, []


def _pair(args):
    return _load(args.f, args.interp_f), _load(args.g, args.interp_g)


def cmd_integrate(args):
    f, g = _pair(args)
    alpha = bounds.default_alpha(args.p, args.q) if args.alpha is None else args.alpha
    rep = integrate.adaptive_integrate(f, g, args.p, args.q, args.tol, tags=args.tags, alpha=alpha,
                                       max_level=args.max_level)
    params = {"p": args.p, "q": args.q, "alpha": alpha, "tol": args.tol, "tags": args.tags,
              "max_level": args.max_level, "interp_f": args.interp_f, "interp_g": args.interp_g,
              "f": args.f, "g": args.g}
    result = {"value": rep.value, "error_bound": rep.error_bound, "mesh": rep.mesh,
              "refinements": rep.refinements, "cells": rep.cells, "exact": integrate.exact_integral(f, g)}
    outputs = []
    if args.emit_indefinite:
        outputs.append((args.emit_indefinite, format_csv(integrate.indefinite_integral(f, g))))
        params["emit_indefinite"] = args.emit_indefinite
    return {"command": "integrate", "params": params, "result": result}, outputs


def cmd_bound(args):
    f, g = _pair(args)
    rep = bounds.bound_report(f, g, args.p, args.q, args.alpha)
    params = {"p": args.p, "q": args.q, "alpha": rep.alpha, "interp_f": args.interp_f,
              "interp_g": args.interp_g, "f": args.f, "g": args.g}
    result = rep.to_json()
    result["exact_deviation"] = _deviation(f, g)
    return {"command": "bound", "params": params, "result": result}, []


def _deviation(f, g):
    return abs(integrate.exact_integral(f, g) - f.values[0] * (g.values[-1] - g.values[0]))


def cmd_solve_ode(args):
    x = _load(args.driver, "linear")
    F = ode.LipschitzField.parse(args.f, args.alpha)
    prob = ode.OdeProblem(args.y0, F, x, args.p, args.tol, args.max_iter)
    sol = ode.split_solve(prob) if args.split else ode.solve(prob)
    A, B = ode.ab_constants(prob)
    params = {"f": F.describe(), "alpha": F.alpha, "p": args.p, "y0": args.y0, "tol": args.tol,
              "max_iter": args.max_iter, "split": args.split, "driver": args.driver}
    result = {"y_end": float(sol.path.values[-1]), "residual": sol.residual, "iterations": sol.iterations,
              "pvar_norm": sol.pvar_norm, "radius": sol.radius, "A": A, "B": B,
              "K": F.K_global, "F0": F.F0, "pieces": [list(pc) for pc in sol.pieces]}
    outputs = []
    if args.solution:
        outputs.append((args.solution, format_csv(sol.path)))
        params["solution"] = args.solution
    return {"command": "solve-ode", "params": params, "result": result}, outputs


def cmd_gen_signal(args):
    params = {}
    for item in args.param or []:
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            params[key] = float(val)
        except ValueError:
            raise UsageError(f"--param {item!r}: cannot parse value") from None
    recipe = signals.SignalRecipe(args.family, params, args.n, args.seed)
    path = signals.generate(recipe, (args.lo, args.hi))
    sidecar = {"command": "gen-signal", "params": {**recipe.to_json(), "lo": args.lo, "hi": args.hi,
                                                   "out": args.out}}
    outputs = [(args.out, format_csv(path))]
    if args.out not in (None, "-"):
        outputs.append((args.out + ".json", dumps(sidecar)))
    return None, outputs


SWEEP_COLUMNS = ["f_signal", "g_signal", "p", "q", "alpha", "exact", "improved_ly", "classical_ly",
                 "S", "S_tilde", "ratio_improved", "ratio_classical", "ratio_S", "ratio_S_tilde", "error"]


def _ratio(bound, exact):
    # a zero bound on a zero deviation is tight
    if exact == 0.0:
        return 1.0 if bound == 0.0 else math.inf
    return bound / exact


def sweep_row(f_text, g_text, p, q, alpha):
    row = {"f_signal": f_text, "g_signal": g_text, "p": p, "q": q, "alpha": alpha}
    try:
        f = signals.generate(_parse_signal(f_text))
        g = signals.generate(_parse_signal(g_text))
        al = bounds.default_alpha(p, q) if alpha is None else alpha
        row["alpha"] = al
        rep = bounds.bound_report(f, g, p, q, al)
        exact = _deviation(f, g)
        row.update(exact=exact, improved_ly=rep.improved_ly, classical_ly=rep.classical_ly, S=rep.s,
                   S_tilde=rep.s_tilde)
        for name, key in (("ratio_improved", "improved_ly"), ("ratio_classical", "classical_ly"),
                          ("ratio_S", "S"), ("ratio_S_tilde", "S_tilde")):
            row[name] = _ratio(row[key], exact)
        row["error"] = ""
    except (DomainError, PreconditionError, BudgetError, UsageError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_sweep(args):
    fs = args.f_signal or []
    gs = args.g_signal or fs
    if not fs:
        raise UsageError("sweep needs at least one --f-signal")
    ps = _parse_floats(args.p, "p")
    qs = _parse_floats(args.q, "q")
    alphas = _parse_floats(args.alpha, "alpha") if args.alpha else [None]
    if not ps or not qs:
        raise UsageError("sweep needs non-empty --p and --q grids")
    for text in itertools.chain(fs, gs):
        _parse_signal(text)
    grid = list(itertools.product(fs, gs, ps, qs, alphas))
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(lambda cell: sweep_row(*cell), grid))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row.get(c, "")) if c not in ("f_signal", "g_signal", "error") else row.get(c, "")
                    for c in SWEEP_COLUMNS])
    params = {"f_signal": fs, "g_signal": gs, "p": ps, "q": qs, "alpha": alphas, "workers": args.workers,
              "out": args.out}
    errors = sum(1 for r in rows if r["error"])
    report = {"command": "sweep", "params": params, "result": {"rows": len(rows), "failed_rows": errors}}
    outputs = [(args.out, buf.getvalue())]
    if args.out not in (None, "-"):
        outputs.append((args.out + ".json", dumps(report)))
    return None, outputs


# -- parser --------------------------------------------------------------------


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return x


def _nonneg(text):
    x = float(text)
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="youngint", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", "-o", default=None, help="report destination (default stdout)")

    sp = sub.add_parser("ttv", help="truncated variation of a path")
    sp.add_argument("path")
    sp.add_argument("--delta", type=_nonneg, required=True)
    sp.add_argument("--interp", choices=INTERPS, default="linear")
    sp.add_argument("--method", choices=("sweep", "dp"), default="sweep")
    sp.add_argument("--emit-approximant", default=None, metavar="CSV")
    out(sp)
    sp.set_defaults(run=cmd_ttv)

    sp = sub.add_parser("pvar", help="p-variation of a path")
    sp.add_argument("path")
    sp.add_argument("--p", type=_positive, required=True)
    sp.add_argument("--interp", choices=INTERPS, default="linear")
    out(sp)
    sp.set_defaults(run=cmd_pvar)

    def pair(sp):
        sp.add_argument("f")
        sp.add_argument("g")
        sp.add_argument("--p", type=_positive, required=True)
        sp.add_argument("--q", type=_positive, required=True)
        sp.add_argument("--alpha", type=_positive, default=None)
        sp.add_argument("--interp-f", choices=INTERPS, default="linear")
        sp.add_argument("--interp-g", choices=INTERPS, default="linear")
        out(sp)

    sp = sub.add_parser("integrate", help="certified Riemann-Stieltjes integral")
    pair(sp)
    sp.add_argument("--tol", type=_positive, default=1e-6)
    sp.add_argument("--tags", choices=("left", "mid", "right", "auto"), default="left")
    sp.add_argument("--max-level", type=int, default=30)
    sp.add_argument("--emit-indefinite", default=None, metavar="CSV")
    sp.set_defaults(run=cmd_integrate)

    sp = sub.add_parser("bound", help="series and Loeve-Young bounds for a pair")
    pair(sp)
    sp.set_defaults(run=cmd_bound)

    sp = sub.add_parser("solve-ode", help="solve y = y0 + int F(y) dx on the driver grid")
    sp.add_argument("driver")
    sp.add_argument("--f", required=True, help="family:params, e.g. linear:1 or sine:1,2")
    sp.add_argument("--alpha", type=_positive, default=1.0)
    sp.add_argument("--p", type=_positive, required=True)
    sp.add_argument("--y0", type=float, default=0.0)
    sp.add_argument("--tol", type=_positive, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=500)
    sp.add_argument("--split", action="store_true", help="solve piecewise (needs alpha = 1)")
    sp.add_argument("--solution", default=None, metavar="CSV")
    out(sp)
    sp.set_defaults(run=cmd_solve_ode)

    sp = sub.add_parser("gen-signal", help="write a synthetic signal as CSV")
    sp.add_argument("--family", choices=tuple(signals.DEFAULTS), required=True)
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")
    sp.add_argument("--n", type=int, default=257)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=1.0)
    out(sp)
    sp.set_defaults(run=cmd_gen_signal)

    sp = sub.add_parser("sweep", help="bound tightness table over signals and exponents")
    sp.add_argument("--f-signal", action="append", metavar="FAMILY[:K=V,...]")
    sp.add_argument("--g-signal", action="append", metavar="FAMILY[:K=V,...]")
    sp.add_argument("--p", required=True, help="comma-separated p grid")
    sp.add_argument("--q", required=True, help="comma-separated q grid")
    sp.add_argument("--alpha", default=None, help="comma-separated alpha grid (default midpoint)")
    sp.add_argument("--workers", type=int, default=4)
    out(sp)
    sp.set_defaults(run=cmd_sweep)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        report, outputs = args.run(args)
        if report is not None:
            dest = getattr(args, "out", None)
            outputs = [(dest, dumps(report))] + [o for o in outputs if o[0] not in (None, "-")]
        _emit(outputs, stdout)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=stderr)
        return EXIT_PRECONDITION
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
