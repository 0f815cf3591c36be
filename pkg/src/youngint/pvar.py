"""p-variation of sampled paths.

``V^p(f) = sup over partitions of sum |f(t_i) - f(t_{i-1})|^p``. For ``p >= 1``
intermediate points of a monotone stretch never help, so the supremum is a
maximum over node subsequences and the DP below is exact for every
interpolation rule. For ``p < 1`` the result is the p-variation of the node
sequence only.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from ._chain import best_chain
from .errors import DomainError
from .paths import SampledPath, node_values

EXHAUSTIVE_MAX = 14


@dataclass(frozen=True)
class PvarResult:
    value: float
    p: float
    maximizer: tuple[int, ...]
    norm: float  # value ** (1/p), computed without overflow


def _check_p(p):
    if not (np.isfinite(p) and p > 0):
        raise DomainError(f"p must be a positive finite number, got {p!r}")


def pvar_values(v: np.ndarray, p: float) -> PvarResult:
    _check_p(p)
    v = np.asarray(v, dtype=float)
    if v.size < 2:
        return PvarResult(0.0, float(p), (0,) if v.size else (), 0.0)
    osc = float(v.max() - v.min())
    if osc == 0.0:
        return PvarResult(0.0, float(p), (0,), 0.0)
    # rescale when osc^p (times up to n terms) could leave the float range
    if abs(p * math.log(osc)) < 600.0:
        value, chain = best_chain(v, lambda a, b: np.abs(b - a) ** p)
        return PvarResult(value, float(p), tuple(chain), value ** (1.0 / p))
    # rescale by the oscillation; the value is reassembled in log space
    value_s, chain = best_chain(v / osc, lambda a, b: np.abs(b - a) ** p)
    log_value = p * math.log(osc) + math.log(value_s)
    value = math.exp(log_value) if log_value < 709.0 else math.inf
    return PvarResult(value, float(p), tuple(chain), osc * value_s ** (1.0 / p))


def pvar_dp(path: SampledPath, iv=None, p: float = 1.0) -> PvarResult:
    return pvar_values(node_values(path, iv), p)


@functools.lru_cache(maxsize=None)
def _subset_pairs(n: int) -> np.ndarray:
    # row m: indicator of consecutive pairs (i, j) of the subset encoded by bitmask m
    mat = np.zeros((1 << n, n * n))
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        for a, b in zip(idx[:-1], idx[1:]):
            mat[mask, a * n + b] = 1.0
    return mat


def pvar_exhaustive(path: SampledPath, iv=None, p: float = 1.0) -> float:
    """Brute-force V^p over all 2^n node subsequences (reference oracle)."""
    _check_p(p)
    v = node_values(path, iv)
    n = v.size
    if n > EXHAUSTIVE_MAX:
        raise DomainError(f"exhaustive p-variation refuses {n} > {EXHAUSTIVE_MAX} samples")
    if n < 2:
        return 0.0
    gains = np.abs(v[None, :] - v[:, None]) ** p
    return float((_subset_pairs(n) @ gains.ravel()).max())


def pvar_norm(path: SampledPath, iv=None, p: float = 1.0) -> float:
    if not p >= 1:
        raise DomainError(f"the p-variation norm needs p >= 1, got {p!r}")
    return pvar_dp(path, iv, p).norm


def full_pvar_norm(path: SampledPath, p: float) -> float:
    """``|f(a)| + ||f||_{p-var}``, the Banach norm used for integral equations."""
    return abs(float(path.values[0])) + pvar_norm(path, None, p)


def pvar_prefix(v: np.ndarray, p: float, limit: float = math.inf) -> np.ndarray:
    """``out[j] = V^p(v[0..j])`` for each prefix, stopping once a value exceeds ``limit``.

    The returned array is truncated after the first prefix exceeding ``limit``.
    """
    _check_p(p)
    v = np.asarray(v, dtype=float)
    n = v.size
    end = np.zeros(n)   # best chain value ending exactly at j
    out = np.zeros(n)
    for j in range(1, n):
        end[j] = np.max(end[:j] + np.abs(v[j] - v[:j]) ** p)
        out[j] = max(out[j - 1], end[j])
        if out[j] > limit:
            return out[: j + 1]
    return out
