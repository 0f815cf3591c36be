"""Exact maximisation of additive functionals over index subsequences.

Both truncated variation and p-variation of a finite sequence are of the form

    sup over i_0 < i_1 < ... < i_m of  sum_k gain(v[i_{k-1}], v[i_k])

This module solves that problem exactly in O(n^2) and returns a maximiser
chosen deterministically: largest value, then fewest points, then the
lexicographically smallest index set.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

Gain = Callable[[float, np.ndarray], np.ndarray]


def best_chain(values: np.ndarray, gain: Gain) -> tuple[float, list[int]]:
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 0:
        return 0.0, []
    best = np.zeros(n)     # best chain value starting at i
    count = np.ones(n, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        tot = gain(v[i], v[i + 1 :]) + best[i + 1 :]
        m = tot.max()
        if m <= 0.0:
            continue  # the singleton chain {i} wins on point count
        cand = np.flatnonzero(tot == m)
        if cand.size > 1:
            c = count[i + 1 + cand]
            cand = cand[c == c.min()]
        j = i + 1 + int(cand[0])
        best[i] = m
        count[i] = count[j] + 1
        nxt[i] = j
    m = best.max()
    cand = np.flatnonzero(best == m)
    if cand.size > 1:
        c = count[cand]
        cand = cand[c == c.min()]
    i = int(cand[0])
    chain = [i]
    while nxt[chain[-1]] >= 0:
        chain.append(int(nxt[chain[-1]]))
    return float(m), chain


def chain_value(values: np.ndarray, chain, gain: Gain) -> float:
    v = np.asarray(values, dtype=float)
    total = 0.0
    for a, b in zip(chain[:-1], chain[1:]):
        total += float(gain(v[a], np.array([v[b]]))[0])
    return total
