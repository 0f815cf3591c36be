"""Sampled paths: finite samples plus an interpolation rule.

A :class:`SampledPath` is the concrete model of a regulated function on
``[times[0], times[-1]]``. Three interpolation rules are supported:

``linear``
    affine between consecutive samples (continuous).
``left-step``
    the value of the last sample at or before ``t`` (right-continuous,
    jumps at sample times).
``right-step``
    the value of the first sample at or after ``t`` (left-continuous,
    jumps just after sample times).

Every functional in this package (oscillation, total/truncated/p-variation)
is evaluated exactly on the *node sequence* of an interval, i.e. the
ordered list of values the path actually attains at the points where it can
change. For ``p >= 1`` the supremum over arbitrary partitions is attained on
subsequences of these nodes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DomainError

INTERPS = ("linear", "left-step", "right-step")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class SampledPath:
    times: np.ndarray
    values: np.ndarray
    interp: str = "linear"

    def __post_init__(self):
        t = np.array(self.times, dtype=float).ravel()
        v = np.array(self.values, dtype=float).ravel()
        if t.size < 1:
            raise DomainError("a path needs at least one sample")
        if t.size != v.size:
            raise DomainError(f"{t.size} times but {v.size} values")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise DomainError("times and values must be finite")
        if np.any(np.diff(t) <= 0):
            raise DomainError("sample times must be strictly increasing")
        if self.interp not in INTERPS:
            raise DomainError(f"unknown interpolation {self.interp!r}; expected one of {INTERPS}")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, SampledPath):
            return NotImplemented
        return (
            self.interp == other.interp
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def span(self) -> Interval:
        return Interval(float(self.times[0]), float(self.times[-1]))

    @property
    def is_continuous(self) -> bool:
        return self.interp == "linear" or len(self) == 1 or bool(np.all(np.diff(self.values) == 0))

    def with_values(self, values) -> "SampledPath":
        return SampledPath(self.times, values, self.interp)

    def __call__(self, t):
        return evaluate(self, t)


def as_interval(path: SampledPath, iv=None) -> Interval:
    """Normalise ``iv`` (None, tuple or Interval) and check it lies in the span."""
    if iv is None:
        return path.span
    if not isinstance(iv, Interval):
        iv = Interval(float(iv[0]), float(iv[1]))
    span = path.span
    if iv.lo < span.lo or iv.hi > span.hi:
        raise DomainError(f"interval [{iv.lo}, {iv.hi}] leaves the path span [{span.lo}, {span.hi}]")
    return iv


def evaluate(path: SampledPath, t):
    """Evaluate the path at ``t`` (scalar or array) per its interpolation rule."""
    arr = np.asarray(t, dtype=float)
    lo, hi = path.times[0], path.times[-1]
    if np.any(arr < lo) or np.any(arr > hi) or np.any(np.isnan(arr)):
        raise DomainError(f"evaluation point outside the span [{lo}, {hi}]")
    if path.interp == "linear":
        out = np.interp(arr, path.times, path.values)
    elif path.interp == "left-step":
        idx = np.searchsorted(path.times, arr, side="right") - 1
        out = path.values[idx]
    else:
        idx = np.searchsorted(path.times, arr, side="left")
        out = path.values[idx]
    if np.ndim(out) == 0:
        return float(out)
    return out


def nodes(path: SampledPath, iv=None) -> tuple[np.ndarray, np.ndarray]:
    """Times and values of the node sequence of ``path`` on ``iv``.

    On the full span this is exactly the sample sequence. On a sub-interval
    the (interpolated) end values are included.
    """
    iv = as_interval(path, iv)
    t = path.times
    if iv.lo == iv.hi:
        return np.array([iv.lo]), np.array([evaluate(path, iv.lo)])
    inner = t[(t > iv.lo) & (t < iv.hi)]
    times = np.concatenate(([iv.lo], inner, [iv.hi]))
    return times, np.atleast_1d(evaluate(path, times)).astype(float)


def left_limit(path: SampledPath, t):
    """``f(t-)``; at the first sample time this is ``f(t)``."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.atleast_1d(evaluate(path, arr)).astype(float)
    if path.interp == "left-step":
        idx = np.searchsorted(path.times, arr, side="left") - 1
        ok = idx >= 0
        out[ok] = path.values[idx[ok]]
    return out if np.ndim(t) else float(out[0])


def right_limit(path: SampledPath, t):
    """``f(t+)``; at the last sample time this is ``f(t)``."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.atleast_1d(evaluate(path, arr)).astype(float)
    if path.interp == "right-step":
        idx = np.searchsorted(path.times, arr, side="right")
        ok = idx < path.times.size
        out[ok] = path.values[idx[ok]]
    return out if np.ndim(t) else float(out[0])


def node_values(path: SampledPath, iv=None) -> np.ndarray:
    return nodes(path, iv)[1]


def osc_norm(path: SampledPath, iv=None) -> float:
    v = node_values(path, iv)
    return float(v.max() - v.min())


def sup_dev_from_start(path: SampledPath, iv=None) -> float:
    v = node_values(path, iv)
    return float(np.max(np.abs(v - v[0])))


def sup_dev_to_end(path: SampledPath, iv=None) -> float:
    """``sup |f(hi) - f(t)|`` over the interval (the mirror image of the above)."""
    v = node_values(path, iv)
    return float(np.max(np.abs(v[-1] - v)))


def sup_norm(path: SampledPath, iv=None) -> float:
    return float(np.max(np.abs(node_values(path, iv))))


def total_variation(path: SampledPath, iv=None) -> float:
    v = node_values(path, iv)
    return float(np.sum(np.abs(np.diff(v))))


def jump_times(path: SampledPath) -> np.ndarray:
    """Sample times at which the path is discontinuous (endpoints included)."""
    t, v = path.times, path.values
    if path.interp == "linear" or t.size < 2:
        return np.array([], dtype=float)
    changed = np.diff(v) != 0
    if path.interp == "left-step":
        return t[1:][changed]
    return t[:-1][changed]


def common_discontinuities(f: SampledPath, g: SampledPath) -> set[float]:
    if f.span != g.span:
        raise DomainError(f"paths have different spans {f.span} and {g.span}")
    return set(jump_times(f).tolist()) & set(jump_times(g).tolist())


def restrict(path: SampledPath, iv) -> SampledPath:
    """The node-sequence path on ``iv`` with the same interpolation rule."""
    times, values = nodes(path, iv)
    return SampledPath(times, values, path.interp)


def merged_grid(paths: Iterable[SampledPath], iv: Interval) -> np.ndarray:
    pts = [np.array([iv.lo, iv.hi])]
    for p in paths:
        pts.append(p.times[(p.times > iv.lo) & (p.times < iv.hi)])
    return np.unique(np.concatenate(pts))


# -- CSV I/O -----------------------------------------------------------------


class PathFormatError(DomainError):
    pass


def read_csv(source, interp: str = "linear") -> SampledPath:
    """Read a ``t,value`` CSV (header required) from a path or text stream."""
    name = str(source)
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        name = getattr(source, "name", "<stream>")
        text = source.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
        raise PathFormatError(f"{name}: row 1: expected header 't,value'")
    times, values = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise PathFormatError(f"{name}: row {r}: expected 2 columns, got {len(row)}")
        parsed = []
        for c, cell in enumerate(row, start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise PathFormatError(f"{name}: row {r}, column {c}: cannot parse {cell!r} as a number") from None
        if times and parsed[0] <= times[-1]:
            raise PathFormatError(f"{name}: row {r}, column 1: time {parsed[0]!r} is not increasing")
        times.append(parsed[0])
        values.append(parsed[1])
    if not times:
        raise PathFormatError(f"{name}: no samples")
    return SampledPath(times, values, interp)


def format_csv(path: SampledPath) -> str:
    lines = ["t,value"]
    lines.extend(f"{t!r},{v!r}" for t, v in zip(path.times.tolist(), path.values.tolist()))
    return "\n".join(lines) + "\n"


def write_csv(path: SampledPath, dest) -> None:
    Path(dest).write_text(format_csv(path))
