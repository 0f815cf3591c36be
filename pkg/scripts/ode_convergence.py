"""Grid refinement study for y = y0 + int F(y) dx with a Weierstrass driver.

For F(y) = lam * y the solution is y0 * exp(lam * (x(t) - x(0))), so the
error at each grid size is known exactly. Also reports how y(1) moves between
successive grids for a nonlinear F.

    python3 scripts/ode_convergence.py --max-log2 13
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from youngint.ode import LipschitzField, OdeProblem, solve
from youngint.signals import SignalRecipe, generate


@dataclass
class Config:
    a: float = 0.6
    b: float = 3.0
    m: int = 10
    lam: float = 0.5
    p: float = 1.5
    min_log2: int = 6
    max_log2: int = 13


def run(cfg: Config):
    print(f"{'n':>7}  {'linear err':>11}  {'iters':>5}  {'sine y(1)':>12}  {'change':>9}")
    prev = None
    for k in range(cfg.min_log2, cfg.max_log2 + 1):
        n = 2 ** k + 1
        x = generate(SignalRecipe("weierstrass", {"a": cfg.a, "b": cfg.b, "m": cfg.m}, n))
        lin = solve(OdeProblem(1.0, LipschitzField("linear", (cfg.lam,)), x, cfg.p, tol=1e-12))
        closed = np.exp(cfg.lam * (x.values - x.values[0]))
        err = float(np.max(np.abs(lin.path.values - closed)))
        sine = solve(OdeProblem(0.3, LipschitzField("sine", (0.5, 1.0)), x, cfg.p, tol=1e-12))
        end = float(sine.path.values[-1])
        change = "-" if prev is None else f"{abs(end - prev):.2e}"
        print(f"{n:>7}  {err:>11.3e}  {lin.iterations:>5}  {end:>12.8f}  {change:>9}")
        prev = end


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-log2", type=int, default=Config.max_log2)
    ap.add_argument("--lam", type=float, default=Config.lam)
    args = ap.parse_args()
    run(Config(max_log2=args.max_log2, lam=args.lam))


if __name__ == "__main__":
    main()
