"""Riemann-Stieltjes integrals of sampled paths.

On the merged grid of both paths every open cell sees ``f`` and ``g`` as
affine or constant, so the integral splits exactly into

* a continuous part, ``f(midpoint) * (g(s_k) - g(s_{k-1}))`` per cell when ``g``
  is linear (``f`` affine or constant on the open cell), and
* a jump part, ``f(s) * (g(s+) - g(s-))`` at grid points when ``g`` is a step
  path, which needs ``f`` continuous at ``s``.

A shared discontinuity makes the integral fail to exist and raises
:class:`PreconditionError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import BudgetError, DomainError, PreconditionError
from .paths import (
    Interval,
    SampledPath,
    as_interval,
    evaluate,
    left_limit,
    merged_grid,
    nodes,
    right_limit,
)
from .pvar import pvar_values


@dataclass(frozen=True)
class TaggedPartition:
    points: np.ndarray
    tags: np.ndarray

    def __post_init__(self):
        t, xi = bounds._check_tagged(self.points, self.tags)
        object.__setattr__(self, "points", t)
        object.__setattr__(self, "tags", xi)

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.points)))

    @classmethod
    def from_points(cls, points, tag="left") -> "TaggedPartition":
        """Tags at a relative position in each cell: ``left`` (0), ``mid`` (0.5), ``right`` (1) or a float."""
        t = np.asarray(points, dtype=float)
        w = {"left": 0.0, "mid": 0.5, "right": 1.0}.get(tag, tag)
        w = float(w)
        if not 0.0 <= w <= 1.0:
            raise DomainError(f"relative tag position must lie in [0, 1], got {tag!r}")
        xi = t[:-1] + w * (t[1:] - t[:-1])
        xi = np.minimum(np.maximum(xi, t[:-1]), t[1:])
        return cls(t, xi)

    @classmethod
    def uniform(cls, iv: Interval, cells: int, tag="left") -> "TaggedPartition":
        return cls.from_points(np.linspace(iv.lo, iv.hi, cells + 1), tag)

    @classmethod
    def dyadic(cls, iv: Interval, level: int, tag="left") -> "TaggedPartition":
        return cls.uniform(iv, 2 ** level, tag)


@dataclass(frozen=True)
class IntegralReport:
    value: float
    error_bound: float
    mesh: float
    refinements: int
    cells: int = 0


def _same_span(f, g):
    if f.span != g.span:
        raise DomainError(f"paths have different spans {f.span} and {g.span}")


def rs_sum(f: SampledPath, g: SampledPath, tp: TaggedPartition) -> float:
    """``sum f(xi_i) [g(t_i) - g(t_{i-1})]``."""
    _same_span(f, g)
    span = f.span
    if tp.points[0] < span.lo or tp.points[-1] > span.hi:
        raise DomainError("partition leaves the common span")
    return float(np.dot(evaluate(f, tp.tags), np.diff(evaluate(g, tp.points))))


# -- exact integral --------------------------------------------------------------


def _one_sided_jumps(path, s, iv):
    """(left jump, right jump) of ``path`` at points ``s`` restricted to ``iv``."""
    val = np.atleast_1d(evaluate(path, s)).astype(float)
    jm = val - left_limit(path, s)
    jp = right_limit(path, s) - val
    jm[s <= iv.lo] = 0.0
    jp[s >= iv.hi] = 0.0
    return jm, jp


def _check_no_common_jump(f, g, s, iv):
    if f.interp == "linear" or g.interp == "linear":
        return
    fm, fp = _one_sided_jumps(f, s, iv)
    gm, gp = _one_sided_jumps(g, s, iv)
    bad = ((fm != 0) | (fp != 0)) & ((gm != 0) | (gp != 0))
    if np.any(bad):
        raise PreconditionError(
            f"f and g share discontinuities at {s[bad].tolist()}; the Riemann-Stieltjes integral does not exist"
        )


def _pieces(f, g, iv):
    """Grid, per-cell continuous contributions and per-point jump contributions."""
    s = merged_grid([f, g], iv)
    _check_no_common_jump(f, g, s, iv)
    if s.size < 2:
        return s, np.zeros(0), np.zeros(s.size)
    fs = np.atleast_1d(evaluate(f, s)).astype(float)
    if g.interp == "linear":
        if f.interp == "linear":
            fmid = 0.5 * (fs[:-1] + fs[1:])
        else:
            fmid = np.atleast_1d(evaluate(f, 0.5 * (s[:-1] + s[1:])))
        gs = np.atleast_1d(evaluate(g, s))
        return s, fmid * np.diff(gs), np.zeros(s.size)
    gm, gp = _one_sided_jumps(g, s, iv)
    return s, np.zeros(s.size - 1), (fs * gm, fs * gp)


def exact_integral(f: SampledPath, g: SampledPath, iv=None) -> float:
    """``int_iv f dg`` exactly for the interpolated paths."""
    _same_span(f, g)
    iv = as_interval(f, iv)
    s, cont, jumps = _pieces(f, g, iv)
    total = math.fsum(cont.tolist())
    if isinstance(jumps, tuple):
        total += math.fsum(jumps[0].tolist()) + math.fsum(jumps[1].tolist())
    return float(total)


def indefinite_integral(f: SampledPath, g: SampledPath) -> SampledPath:
    """``t -> int_a^t f dg`` on the merged grid (values exact at grid points).

    The result inherits ``g``'s interpolation rule: it jumps exactly where
    ``g`` does and is continuous when ``g`` is.
    """
    _same_span(f, g)
    iv = f.span
    s, cont, jumps = _pieces(f, g, iv)
    if s.size < 2:
        return SampledPath(s, np.zeros(s.size), g.interp)
    inc = cont.copy()
    if isinstance(jumps, tuple):
        jm, jp = jumps
        # a left jump at s_k belongs to [a, s_k]; a right jump at s_{k-1} to (s_{k-1}, s_k]
        inc = inc + jm[1:] + jp[:-1]
    vals = np.concatenate(([0.0], np.cumsum(inc)))
    return SampledPath(s, vals, g.interp)


# -- adaptive certified integration ---------------------------------------------


def _cell_bound_complex(f, g, lo, hi, p, q, c, zeta_pq):
    # min of the localised improved LY, classical LY and the bounded-times-TV bound
    _, fv = nodes(f, (lo, hi))
    _, gv = nodes(g, (lo, hi))
    vp = pvar_values(fv, p).value
    vq = pvar_values(gv, q).value
    if vp == 0.0 or vq == 0.0:
        return 0.0
    osc_f = float(fv.max() - fv.min())
    improved = bounds.improved_ly_from(vp, osc_f, vq, p, q, c)
    classical = zeta_pq * vp ** (1.0 / p) * vq ** (1.0 / q)
    bounded_tv = float(np.max(np.abs(fv - fv[0])) * np.sum(np.abs(np.diff(gv))))
    return min(improved, classical, bounded_tv)


def _strictly_inside(times, lo, hi):
    return np.searchsorted(times, hi, side="left") - np.searchsorted(times, lo, side="right") > 0


def adaptive_integrate(
    f: SampledPath,
    g: SampledPath,
    p: float,
    q: float,
    tol: float,
    *,
    tags: str = "left",
    alpha: float | None = None,
    max_level: int = 30,
) -> IntegralReport:
    """Dyadic refinement with a certified error bound.

    A cell still containing sample times of ``f`` or ``g`` is bounded by the
    smallest of the localised improved Loeve-Young bound, the classical one
    and ``sup|f - f(lo)| * TV(g)``; a moved tag adds ``|f(xi) - f(lo)| |dg|``.
    On a cell without interior samples both paths are affine or constant and
    the tag error is known in closed form. A cell of width ``h`` is accepted
    once its bound is at most ``tol * h / (b - a)``; refinement also stops as
    soon as the accepted bounds plus those of all pending cells fit in
    ``tol``. Either way the bounds of the final partition sum to at most
    ``tol``.

    ``tags`` is ``left``, ``mid``, ``right`` or ``auto``; ``auto`` uses left tags
    on cells with interior samples and the error-free tag on the others.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if tags not in ("left", "mid", "right", "auto"):
        raise DomainError(f"unknown tag rule {tags!r}")
    bounds.check_exponents(p, q)
    _same_span(f, g)
    iv = f.span
    _check_no_common_jump(f, g, merged_grid([f, g], iv), iv)
    c = bounds.c_pq(p, q, alpha)
    zeta_pq = bounds.zeta(1.0 / p + 1.0 / q)
    width = iv.length
    if width == 0.0:
        return IntegralReport(0.0, 0.0, 0.0, 0, 0)
    grid_times = np.union1d(f.times, g.times)

    lo = np.array([iv.lo])
    hi = np.array([iv.hi])
    value_parts, bound_parts = [], []
    mesh = 0.0
    n_cells = 0
    for level in range(max_level + 1):
        flo, fhi = evaluate(f, lo), evaluate(f, hi)
        glo, ghi = evaluate(g, lo), evaluate(g, hi)
        dg = ghi - glo
        mid = 0.5 * (lo + hi)
        fmid = evaluate(f, mid)
        fixed_w = {"left": 0.0, "mid": 0.5, "right": 1.0}.get(tags, 0.0)
        xi = lo + fixed_w * (hi - lo)
        fxi = evaluate(f, xi)
        complex_ = _strictly_inside(grid_times, lo, hi)

        # exact contribution and tag error of cells without interior samples
        if g.interp == "linear":
            exact = fmid * dg
            if f.interp == "linear":
                exact = 0.5 * (flo + fhi) * dg
            auto_val = exact
        else:
            gp = right_limit(g, lo) - glo
            gm = ghi - left_limit(g, hi)
            exact = flo * gp + fhi * gm
            use_lo = np.abs(gp) >= np.abs(gm)
            auto_val = np.where(use_lo, flo, fhi) * dg
        if tags == "auto":
            simple_val = auto_val
        else:
            simple_val = fxi * dg
        simple_err = np.abs(exact - simple_val)

        val = np.where(complex_, fxi * dg, simple_val).astype(float)
        bnd = simple_err.astype(float)
        for i in np.flatnonzero(complex_):
            b = _cell_bound_complex(f, g, lo[i], hi[i], p, q, c, zeta_pq)
            if tags in ("mid", "right"):
                b += abs(fxi[i] - flo[i]) * abs(dg[i])
            bnd[i] = b

        # per-cell share of the tolerance, unless the whole frontier already fits
        done = math.fsum(bound_parts)
        if done + math.fsum(bnd.tolist()) <= tol:
            ok = np.ones(lo.size, dtype=bool)
        else:
            ok = bnd <= tol * (hi - lo) / width
        if level == max_level and not np.all(ok):
            best = math.fsum(value_parts) + float(np.sum(val))
            err = math.fsum(bound_parts) + float(np.sum(bnd))
            raise BudgetError(
                f"tolerance {tol!r} not reached after {max_level} dyadic refinements (bound {err!r})",
                value=best,
                bound=err,
            )
        if np.any(ok):
            value_parts.append(math.fsum(val[ok].tolist()))
            bound_parts.append(math.fsum(bnd[ok].tolist()))
            mesh = max(mesh, float(np.max(hi[ok] - lo[ok])))
            n_cells += int(np.count_nonzero(ok))
        if np.all(ok):
            return IntegralReport(
                value=math.fsum(value_parts),
                error_bound=math.fsum(bound_parts),
                mesh=mesh,
                refinements=level,
                cells=n_cells,
            )
        lo, hi, mid = lo[~ok], hi[~ok], mid[~ok]
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
    raise AssertionError("unreachable")
