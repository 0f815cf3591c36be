"""Truncated variation of sampled paths.

For ``delta >= 0`` the truncated variation is

    TTV(f, [a; b], delta) = sup over partitions of  sum_i max(|f(t_i) - f(t_{i-1})| - delta, 0)

which is also the least total variation of any function within uniform
distance ``delta / 2`` of ``f``. On a sampled path the supremum is attained on
a subsequence of the node values, so it is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._chain import best_chain
from .errors import DomainError
from .paths import SampledPath, nodes, node_values


@dataclass(frozen=True)
class TtvResult:
    value: float
    delta: float
    maximizer: tuple[int, ...]


def _check_delta(delta, strict):
    if not np.isfinite(delta) or delta < 0 or (strict and delta == 0):
        need = "> 0" if strict else ">= 0"
        raise DomainError(f"truncation parameter must be {need}, got {delta!r}")


def ttv_dp(path: SampledPath, iv=None, delta: float = 0.0) -> TtvResult:
    """Exact TTV by dynamic programming over node subsequences, O(n^2).

    ``maximizer`` holds node indices (sample indices on the full span).
    """
    _check_delta(delta, strict=False)
    v = node_values(path, iv)
    value, chain = best_chain(v, lambda a, b: np.maximum(np.abs(b - a) - delta, 0.0))
    return TtvResult(value, float(delta), tuple(chain))


def ttv_sweep_values(v: np.ndarray, delta: float) -> float:
    # best[j] = max(best so far, v_j - delta + max_i(best_i - v_i), -v_j - delta + max_i(best_i + v_i));
    # the two inner maxima are carried as argmax indices so each candidate
    # is the value of an actual chain.
    n = len(v)
    if n < 2:
        return 0.0
    best = [0.0] * n
    running = 0.0
    i_lo = i_hi = 0
    key_lo, key_hi = -v[0], v[0]
    for j in range(1, n):
        vj = v[j]
        c_up = best[i_lo] + max(abs(vj - v[i_lo]) - delta, 0.0)
        c_dn = best[i_hi] + max(abs(vj - v[i_hi]) - delta, 0.0)
        bj = running
        if c_up > bj:
            bj = c_up
        if c_dn > bj:
            bj = c_dn
        best[j] = bj
        if bj > running:
            running = bj
        if bj - vj > key_lo:
            key_lo, i_lo = bj - vj, j
        if bj + vj > key_hi:
            key_hi, i_hi = bj + vj, j
    return running


def ttv_sweep(path: SampledPath, iv=None, delta: float = 1.0) -> float:
    """Exact TTV in a single O(n) pass (requires ``delta > 0``).

    Only two running extrema are tracked: the best chain value that could
    still be extended by an upward move, and by a downward move.
    """
    _check_delta(delta, strict=True)
    return ttv_sweep_values(node_values(path, iv).tolist(), float(delta))


def ttv(path: SampledPath, iv=None, delta: float = 0.0) -> float:
    """TTV value, using the linear sweep when ``delta > 0``."""
    _check_delta(delta, strict=False)
    if delta == 0:
        v = node_values(path, iv)
        return float(np.sum(np.abs(np.diff(v))))
    return ttv_sweep(path, iv, delta)


def optimal_approximant(path: SampledPath, iv=None, delta: float = 1.0) -> SampledPath:
    """A path ``g`` with ``|f - g| <= delta/2`` on the nodes and ``TV(g) = TTV(f, delta)``.

    The DP maximiser alternates between up- and down-moves larger than
    ``delta``. Each chosen extremum is pulled inward by ``delta/2``; between
    them ``g`` follows ``f`` lazily (clipped into the band), which is monotone
    on every stretch because no reversal larger than ``delta`` occurs there.
    """
    _check_delta(delta, strict=True)
    times, v = nodes(path, iv)
    res = ttv_dp(path, iv, delta)
    half = delta / 2.0
    chain = list(res.maximizer)
    if res.value == 0.0 or len(chain) < 2:
        mid = 0.5 * (v.max() + v.min())
        return SampledPath(times, np.full(v.size, mid), path.interp)

    target = {}
    for k, i in enumerate(chain):
        if k + 1 < len(chain):
            up = v[chain[k + 1]] > v[i]     # i starts an upward move, so it is a low point
            target[i] = v[i] + half if up else v[i] - half
        else:
            up = v[i] > v[chain[k - 1]]
            target[i] = v[i] - half if up else v[i] + half

    g = np.empty_like(v)
    i0 = chain[0]
    g[: i0 + 1] = target[i0]
    for j in range(i0 + 1, v.size):
        g[j] = target[j] if j in target else min(max(g[j - 1], v[j] - half), v[j] + half)
    return SampledPath(times, g, path.interp)


def lazy_approximant(path: SampledPath, delta: float) -> SampledPath:
    """One-pass band follower started at ``f(a)``; an upper-bound witness for TTV."""
    _check_delta(delta, strict=True)
    v = path.values
    half = delta / 2.0
    g = np.empty_like(v)
    g[0] = v[0]
    for i in range(1, v.size):
        d = v[i] - g[i - 1]
        if abs(d) <= half:
            g[i] = g[i - 1]
        else:
            g[i] = v[i] - np.sign(d) * half
    return path.with_values(g)
