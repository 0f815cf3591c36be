"""Random path generators shared by the test modules."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from youngint.paths import SampledPath


def random_times(rng, n, lo=0.0, hi=1.0):
    if n == 1:
        return np.array([lo])
    while True:
        inner = np.unique(rng.uniform(lo, hi, size=n - 2))
        if inner.size == n - 2 and (n == 2 or (inner[0] > lo and inner[-1] < hi)):
            return np.concatenate(([lo], inner, [hi]))


def random_path(rng, n, interp="linear", scale=1.0, kind="walk"):
    t = random_times(rng, n)
    if kind == "walk":
        v = np.cumsum(rng.normal(scale=scale, size=n))
    else:
        v = rng.uniform(-2.0, 2.0, size=n)
    return SampledPath(t, v, interp)


def random_pair(rng, n_max=64, n_min=2):
    """Two linear paths on [0, 1] with independent grids."""
    f = random_path(rng, int(rng.integers(n_min, n_max + 1)))
    g = random_path(rng, int(rng.integers(n_min, n_max + 1)))
    return f, g


def random_partition(rng, lo, hi, m):
    pts = np.unique(np.concatenate(([lo, hi], rng.uniform(lo, hi, size=m - 1))))
    tags = pts[:-1] + rng.uniform(size=pts.size - 1) * np.diff(pts)
    return pts, np.minimum(np.maximum(tags, pts[:-1]), pts[1:])


values_st = st.lists(st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False), min_size=1, max_size=24)


@st.composite
def paths(draw, min_size=1, max_size=24, interps=("linear", "left-step", "right-step")):
    v = draw(st.lists(st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False, width=32),
                      min_size=min_size, max_size=max_size))
    gaps = draw(st.lists(st.floats(0.01, 1.0), min_size=len(v), max_size=len(v)))
    t = np.cumsum(gaps) - gaps[0]
    return SampledPath(t, v, draw(st.sampled_from(interps)))
