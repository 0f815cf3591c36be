"""Synthetic test signals with controllable regularity.

Families (``params`` defaults in brackets):

``ramp``           intercept + slope * t                       [slope=1, intercept=0]
``weierstrass``    sum_{k<m} a^k cos(b^k pi t), 0<a<1, ab>1     [a=0.5, b=3, m=8]
                   Hoelder exponent ln(1/a)/ln(b), so finite p-variation for p > ln(b)/ln(1/a)
``midpoint-walk``  random midpoint displacement with per-level scale 2^-H  [H=0.75, sigma=1, x0=0, x1=0]
``jump-step``      left-step path with ``jumps`` random jumps of size ~ N(0, scale^2)  [jumps=5, scale=1]

Randomised families draw from ``numpy.random.Generator(PCG64(seed))`` so a
recipe and seed fix the path bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .paths import Interval, SampledPath
from .pvar import pvar_dp

DEFAULTS = {
    "ramp": {"slope": 1.0, "intercept": 0.0},
    "weierstrass": {"a": 0.5, "b": 3.0, "m": 8},
    "midpoint-walk": {"H": 0.75, "sigma": 1.0, "x0": 0.0, "x1": 0.0},
    "jump-step": {"jumps": 5, "scale": 1.0},
}


@dataclass(frozen=True)
class SignalRecipe:
    family: str
    params: dict = field(default_factory=dict)
    n: int = 257
    seed: int = 0

    def __post_init__(self):
        if self.family not in DEFAULTS:
            raise DomainError(f"unknown signal family {self.family!r}; expected one of {tuple(DEFAULTS)}")
        unknown = set(self.params) - set(DEFAULTS[self.family])
        if unknown:
            raise DomainError(f"unknown parameters for {self.family}: {sorted(unknown)}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"need n >= 2 samples, got {self.n!r}")

    @property
    def effective_params(self) -> dict:
        merged = dict(DEFAULTS[self.family])
        merged.update(self.params)
        return merged

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.effective_params, "n": int(self.n), "seed": int(self.seed)}


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def _weierstrass(t, a, b, m):
    if not 0.0 < a < 1.0:
        raise DomainError(f"weierstrass needs 0 < a < 1, got a={a!r}")
    if not a * b > 1.0:
        raise DomainError(f"weierstrass needs a*b > 1, got a*b={a * b!r}")
    if int(m) != m or m < 1:
        raise DomainError(f"weierstrass needs an integer m >= 1, got {m!r}")
    out = np.zeros_like(t)
    for k in range(int(m)):
        out += a ** k * np.cos(b ** k * math.pi * t)
    return out


def _midpoint_walk(n, iv, H, sigma, x0, x1, seed):
    if not 0.0 < H < 1.0:
        raise DomainError(f"midpoint-walk needs 0 < H < 1, got {H!r}")
    if sigma < 0:
        raise DomainError("sigma must be non-negative")
    levels = max(1, math.ceil(math.log2(n - 1)))
    rng = _rng(seed)
    x = np.array([x0, x1], dtype=float)
    # Voss scaling keeps increments over a cell of width 2^-k near sigma 2^-kH
    shrink = math.sqrt(max(1.0 - 2.0 ** (2.0 * H - 2.0), 0.0))
    for k in range(1, levels + 1):
        mids = 0.5 * (x[:-1] + x[1:]) + sigma * shrink * 2.0 ** (-k * H) * rng.standard_normal(x.size - 1)
        nxt = np.empty(2 * x.size - 1)
        nxt[0::2] = x
        nxt[1::2] = mids
        x = nxt
    fine = np.linspace(iv.lo, iv.hi, x.size)
    t = np.linspace(iv.lo, iv.hi, n)
    if x.size == n:
        return t, x
    return t, np.interp(t, fine, x)


def _jump_step(n, jumps, scale, seed):
    if int(jumps) != jumps or jumps < 0 or jumps > n - 1:
        raise DomainError(f"jump-step needs an integer 0 <= jumps <= n - 1, got {jumps!r}")
    rng = _rng(seed)
    where = np.sort(rng.choice(np.arange(1, n), size=int(jumps), replace=False))
    sizes = scale * rng.standard_normal(int(jumps))
    inc = np.zeros(n)
    inc[where] = sizes
    return np.cumsum(inc)


def generate(recipe: SignalRecipe, iv: Interval | tuple = (0.0, 1.0)) -> SampledPath:
    """Sample ``recipe`` on ``n`` uniform points of ``iv``."""
    if not isinstance(iv, Interval):
        iv = Interval(float(iv[0]), float(iv[1]))
    if not iv.hi > iv.lo:
        raise DomainError("signal interval must have positive length")
    n = int(recipe.n)
    prm = recipe.effective_params
    t = np.linspace(iv.lo, iv.hi, n)
    fam = recipe.family
    if fam == "ramp":
        return SampledPath(t, prm["intercept"] + prm["slope"] * t)
    if fam == "weierstrass":
        return SampledPath(t, _weierstrass(t, float(prm["a"]), float(prm["b"]), prm["m"]))
    if fam == "midpoint-walk":
        t, x = _midpoint_walk(n, iv, float(prm["H"]), float(prm["sigma"]), float(prm["x0"]), float(prm["x1"]), recipe.seed)
        return SampledPath(t, x)
    return SampledPath(t, _jump_step(n, prm["jumps"], float(prm["scale"]), recipe.seed), "left-step")


def empirical_pvar_profile(recipe: SignalRecipe, p_grid, n_grid, iv=(0.0, 1.0)) -> np.ndarray:
    """``table[i, j]`` = p-variation norm with ``p = p_grid[j]`` of the recipe sampled at ``n_grid[i]`` points.

    Growth down a column flags ``p`` below the family's variation exponent.
    """
    p_grid = list(p_grid)
    n_grid = list(n_grid)
    if not p_grid or not n_grid:
        raise DomainError("p_grid and n_grid must be non-empty")
    table = np.zeros((len(n_grid), len(p_grid)))
    for i, n in enumerate(n_grid):
        path = generate(SignalRecipe(recipe.family, recipe.params, int(n), recipe.seed), iv)
        for j, p in enumerate(p_grid):
            table[i, j] = pvar_dp(path, None, p).norm
    return table
