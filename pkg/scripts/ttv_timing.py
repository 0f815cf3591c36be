"""Time the linear sweep for truncated variation against the quadratic chain DP.

    python3 scripts/ttv_timing.py --max-log2 12
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from youngint.paths import SampledPath
from youngint.truncvar import ttv_dp, ttv_sweep


@dataclass
class Config:
    min_log2: int = 6
    max_log2: int = 12
    dp_max_log2: int = 11   # the DP is O(n^2); stop early
    delta: float = 0.5
    seed: int = 0


def best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'n':>8}  {'sweep [s]':>10}  {'dp [s]':>10}  {'|diff|':>9}")
    for k in range(cfg.min_log2, cfg.max_log2 + 1):
        n = 2 ** k
        v = np.cumsum(rng.normal(size=n))
        f = SampledPath(np.arange(n, dtype=float), v)
        t_sweep, a = best_of(lambda: ttv_sweep(f, None, cfg.delta))
        if k <= cfg.dp_max_log2:
            t_dp, b = best_of(lambda: ttv_dp(f, None, cfg.delta).value, repeats=1)
            print(f"{n:>8}  {t_sweep:>10.4g}  {t_dp:>10.4g}  {abs(a - b):>9.2g}")
        else:
            print(f"{n:>8}  {t_sweep:>10.4g}  {'-':>10}  {'-':>9}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-log2", type=int, default=Config.max_log2)
    ap.add_argument("--dp-max-log2", type=int, default=Config.dp_max_log2)
    ap.add_argument("--delta", type=float, default=Config.delta)
    args = ap.parse_args()
    run(Config(max_log2=args.max_log2, dp_max_log2=args.dp_max_log2, delta=args.delta))


if __name__ == "__main__":
    main()
