"""Integral equations ``y(t) = y0 + int_a^t F(y(s)) dx(s)`` driven by sampled paths.

The equation is solved on the driver's grid. The Picard map integrates the
linear interpolant of ``F(y_i)`` against the driver exactly (a trapezoid
rule), so the discrete map obeys the same stability estimate as the
continuous one: with

    A = (C_{p/alpha, p} + 2) K ||x||_{p-var},   B = |y0| + |F(0)| ||x||_{p-var},

every iterate ``f`` with ``|f(a)| + ||f||_{p-var} <= R`` and ``R = A R^alpha + B``
is mapped back into the same ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .errors import DomainError, NonConvergenceError, PreconditionError
from .integrate import indefinite_integral
from .paths import SampledPath
from .pvar import full_pvar_norm, pvar_norm, pvar_prefix

FAMILIES = ("linear", "power", "sine", "affine")
SPLIT_BUDGET = 0.5


class ResolutionError(PreconditionError):
    """A single driver cell already exceeds the splitting budget."""


@dataclass(frozen=True)
class LipschitzField:
    """A right-hand side ``F`` from a closed-form family with known Hoelder constants.

    ``linear``  F(y) = lam * y                       params (lam,)
    ``power``   F(y) = c * sign(y) * |y|^alpha       params (c,)
    ``sine``    F(y) = mu * sin(nu * y)              params (mu, nu)
    ``affine``  F(y) = a * y + b                     params (a, b)
    """

    family: str
    params: tuple[float, ...]
    alpha: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        need = {"linear": 1, "power": 1, "sine": 2, "affine": 2}[self.family]
        params = tuple(float(x) for x in self.params)
        if len(params) != need:
            raise DomainError(f"family {self.family!r} takes {need} parameter(s), got {len(params)}")
        if not all(math.isfinite(x) for x in params):
            raise DomainError("parameters must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if self.family == "sine" and params[1] < 0:
            raise DomainError("sine frequency nu must be non-negative")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def parse(cls, text: str, alpha: float = 1.0) -> "LipschitzField":
        """Parse ``family:v1,v2`` (e.g. ``linear:0.5`` or ``sine:1,2``)."""
        family, _, rest = text.partition(":")
        try:
            params = tuple(float(x) for x in rest.split(",")) if rest else ()
        except ValueError:
            raise DomainError(f"cannot parse parameters in {text!r}") from None
        return cls(family.strip(), params, alpha)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        a = self.params
        if self.family == "linear":
            return a[0] * y
        if self.family == "power":
            return a[0] * np.sign(y) * np.abs(y) ** self.alpha
        if self.family == "sine":
            return a[0] * np.sin(a[1] * y)
        return a[0] * y + a[1]

    @property
    def F0(self) -> float:
        return float(self(0.0))

    @property
    def K_global(self) -> float:
        """Global ``alpha``-Hoelder constant; infinite when only local bounds exist."""
        a, al = self.params, self.alpha
        if self.family in ("linear", "affine"):
            if a[0] == 0.0:
                return 0.0
            return abs(a[0]) if al == 1.0 else math.inf
        if self.family == "power":
            return abs(a[0]) * 2.0 ** (1.0 - al)
        # |sin u - sin v| <= min(2, |u - v|) <= 2^(1-alpha) |u - v|^alpha
        return abs(a[0]) * 2.0 ** (1.0 - al) * a[1] ** al

    def K_local(self, R: float) -> float:
        """Hoelder constant over ``|x|, |y| <= R`` (non-decreasing in ``R``)."""
        a, al = self.params, self.alpha
        if R < 0:
            raise DomainError("radius must be non-negative")
        if self.family in ("linear", "affine"):
            return abs(a[0]) * (2.0 * R) ** (1.0 - al)
        if self.family == "power":
            return self.K_global
        # Lipschitz bound nu |d| = nu |d|^(1-alpha) |d|^alpha with |d| <= 2R
        return min(self.K_global, abs(a[0]) * a[1] * (2.0 * R) ** (1.0 - al))

    def describe(self) -> str:
        return f"{self.family}:" + ",".join(repr(x) for x in self.params)


@dataclass(frozen=True)
class OdeProblem:
    y0: float
    F: LipschitzField
    driver: SampledPath
    p: float
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if self.driver.interp != "linear":
            raise DomainError("the driver must be a continuous (linear-interp) path")
        if not 1.0 < self.p < 2.0:
            raise DomainError(f"p must lie in (1, 2), got {self.p!r}")
        if not self.F.alpha > self.p - 1.0:
            raise DomainError(f"need p - 1 < alpha, got p={self.p!r}, alpha={self.F.alpha!r}")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")
        if not math.isfinite(self.y0):
            raise DomainError("y0 must be finite")


@dataclass(frozen=True)
class OdeSolution:
    path: SampledPath
    residual: float
    iterations: int
    pvar_norm: float
    radius: float | None
    pieces: tuple[tuple[float, float], ...] = ()
    history: list[float] = field(default_factory=list, repr=False)

    @property
    def within_radius(self) -> bool | None:
        if self.radius is None or not math.isfinite(self.radius):
            return None
        return self.pvar_norm <= self.radius


def picard_step(y: SampledPath, prob: OdeProblem) -> SampledPath:
    """``T y = y0 + int_a^. F(y) dx`` on the driver grid."""
    x = prob.driver
    if y.times.shape != x.times.shape or not np.array_equal(y.times, x.times):
        raise DomainError("iterate must live on the driver grid")
    fy = x.with_values(prob.F(y.values))
    integral = indefinite_integral(fy, x)
    return x.with_values(prob.y0 + integral.values)


def ab_constants(prob: OdeProblem) -> tuple[float, float]:
    """``(A, B)`` of the stability estimate, using the global Hoelder constant."""
    al = prob.F.alpha
    xn = pvar_norm(prob.driver, None, prob.p)
    K = prob.F.K_global
    B = abs(prob.y0) + abs(prob.F.F0) * xn
    if K == 0.0 or xn == 0.0:
        return 0.0, B
    c = bounds.c_pq(prob.p / al, prob.p)
    return (c + 2.0) * K * xn, B


def radius(A: float, B: float, alpha: float) -> float:
    """Least positive solution of ``R = A R^alpha + B`` (``inf`` if none for ``alpha = 1``)."""
    if A < 0 or B < 0:
        raise DomainError("A and B must be non-negative")
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    if A == 0.0:
        return float(B)
    if alpha == 1.0:
        return B / (1.0 - A) if A < 1.0 else math.inf
    if not math.isfinite(A):
        return math.inf
    if B == 0.0:
        return A ** (1.0 / (1.0 - alpha))
    h = lambda r: A * r ** alpha + B - r
    lo, hi = 0.0, max(2.0 * B, (2.0 * A) ** (1.0 / (1.0 - alpha)))
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def _radius_for(prob):
    A, B = ab_constants(prob)
    return radius(A, B, prob.F.alpha)


def _iterate(prob: OdeProblem, step: Callable[[SampledPath], SampledPath]):
    y = prob.driver.with_values(np.full(len(prob.driver), float(prob.y0)))
    history = []
    for it in range(1, prob.max_iter + 1):
        ty = step(y)
        res = float(np.max(np.abs(ty.values - y.values)))
        history.append(res)
        if res <= prob.tol:
            return y, res, it, history
        if not math.isfinite(res):
            break
        y = ty
    raise NonConvergenceError(
        f"Picard iteration did not reach residual {prob.tol!r} in {len(history)} steps (last {history[-1]!r})",
        iterate=y,
        residual=history[-1],
        history=history,
    )


def solve(prob: OdeProblem) -> OdeSolution:
    """Picard iteration from ``y = y0`` until ``sup |y - T y| <= tol``.

    Convergence is checked by residual only; for ``alpha < 1`` the fixed
    point need not be unique and the iteration may stall, in which case
    :class:`NonConvergenceError` reports the residual history.
    """
    y, res, it, history = _iterate(prob, lambda f: picard_step(f, prob))
    return OdeSolution(
        path=y,
        residual=res,
        iterations=it,
        pvar_norm=full_pvar_norm(y, prob.p),
        radius=_radius_for(prob),
        pieces=((prob.driver.span.lo, prob.driver.span.hi),),
        history=history,
    )


def split_points(prob: OdeProblem, budget: float = SPLIT_BUDGET) -> list[int]:
    """Sample indices cutting the driver into pieces with ``A <= budget`` on each."""
    al = prob.F.alpha
    K = prob.F.K_global
    x = prob.driver.values
    n = x.size
    if K == 0.0 or n < 2:
        return [0, n - 1]
    c = bounds.c_pq(prob.p / al, prob.p)
    # (c+2) K ||x||_p <= budget  <=>  V^p <= (budget / ((c+2) K))^p
    limit = (budget / ((c + 2.0) * K)) ** prob.p
    cuts = [0]
    i = 0
    while i < n - 1:
        prefix = pvar_prefix(x[i:], prob.p, limit)
        ok = np.flatnonzero(prefix <= limit)
        last = int(ok[-1])
        if last == 0:
            t = prob.driver.times
            raise ResolutionError(
                f"driver cell [{t[i]!r}, {t[i + 1]!r}] alone exceeds the splitting budget; refine the driver"
            )
        i += last
        cuts.append(i)
    return cuts


def split_solve(prob: OdeProblem, budget: float = SPLIT_BUDGET) -> OdeSolution:
    """Solve piecewise on sub-intervals where the local contraction constant is at most ``budget``.

    Each piece starts from the terminal value of the previous one. Piece
    tolerances are ``tol / pieces`` so the global residual stays below ``tol``.
    """
    if prob.F.alpha != 1.0:
        raise DomainError("split_solve needs a globally Lipschitz F (alpha = 1)")
    cuts = split_points(prob, budget)
    pieces = list(zip(cuts[:-1], cuts[1:]))
    t = prob.driver.times
    if not pieces:
        return solve(prob)
    tol_piece = prob.tol / len(pieces)
    values = [np.array([float(prob.y0)])]
    y_start = float(prob.y0)
    iterations = 0
    history = []
    for i, j in pieces:
        sub = OdeProblem(
            y0=y_start,
            F=prob.F,
            driver=SampledPath(t[i : j + 1], prob.driver.values[i : j + 1]),
            p=prob.p,
            tol=tol_piece,
            max_iter=prob.max_iter,
        )
        sol = solve(sub)
        values.append(sol.path.values[1:])
        y_start = float(sol.path.values[-1])
        iterations += sol.iterations
        history.append(sol.residual)
    y = prob.driver.with_values(np.concatenate(values))
    residual = float(np.max(np.abs(picard_step(y, prob).values - y.values)))
    return OdeSolution(
        path=y,
        residual=residual,
        iterations=iterations,
        pvar_norm=full_pvar_norm(y, prob.p),
        radius=None,
        pieces=tuple((float(t[i]), float(t[j])) for i, j in pieces),
        history=history,
    )


def piece_budgets(prob: OdeProblem, sol: OdeSolution) -> list[float]:
    """``(C + 2) K ||x||_{p-var}`` on each piece of a split solution."""
    K = prob.F.K_global
    c = bounds.c_pq(prob.p / prob.F.alpha, prob.p)
    return [(c + 2.0) * K * pvar_norm(prob.driver, (lo, hi), prob.p) for lo, hi in sol.pieces]
