"""Truncated-variation series bounds and Loeve-Young type estimates.

Given truncation ladders ``eta_0 >= eta_1 >= ... -> 0`` and
``theta_0 >= theta_1 >= ... -> 0`` the two series

    S       = sum_k 2^k eta_{k-1}   TTV(g, theta_k) + sum_k 2^k theta_k TTV(f, eta_k)
    S_tilde = sum_k 2^k theta_{k-1} TTV(f, eta_k)   + sum_k 2^k eta_k   TTV(g, theta_k)

(with ``eta_{-1} = sup|f - f(a)|`` and ``theta_{-1} = sup|g(b) - g|``) both bound
``|int f dg - f(a) (g(b) - g(a))|``. Choosing geometric ladders turns ``S`` into
the improved Loeve-Young bound

    C_{p,q} (V^p f)^{1 - 1/q} ||f||_osc^{1 + p/q - p} (V^q g)^{1/q}.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .paths import SampledPath, Interval, as_interval, evaluate, osc_norm, sup_dev_from_start, sup_dev_to_end, sup_norm
from .pvar import pvar_dp
from .truncvar import ttv

TERM_RTOL = 1e-12
LOG2_NEGLIGIBLE = -1000.0
MAX_LADDER = 200_000


# -- parameter checks ---------------------------------------------------------


def check_exponents(p: float, q: float) -> None:
    if not (p > 1 and q > 1):
        raise DomainError(f"need p > 1 and q > 1, got p={p!r}, q={q!r}")
    if not 1.0 / p + 1.0 / q > 1.0:
        raise DomainError(f"need 1/p + 1/q > 1, got {1.0 / p + 1.0 / q!r}")
    # equivalent form used for the oscillation exponent
    assert 1.0 / p > 1.0 - 1.0 / q


def alpha_range(p: float, q: float) -> tuple[float, float]:
    check_exponents(p, q)
    return math.sqrt((q - 1.0) * (p - 1.0)), 1.0


def default_alpha(p: float, q: float) -> float:
    lo, hi = alpha_range(p, q)
    return 0.5 * (lo + hi)


def _ladder_ratio(p, q, alpha):
    lo, _ = alpha_range(p, q)
    if not lo < alpha < 1.0:
        raise DomainError(f"alpha must lie in ({lo!r}, 1) for p={p!r}, q={q!r}; got {alpha!r}")
    return alpha * alpha / ((q - 1.0) * (p - 1.0))


# -- ladders ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncationLadder:
    """Truncation sequences stored as base-2 logarithms (``-inf`` encodes 0).

    ``log2_eta[k]`` is ``log2(eta_k)`` and ``log2_theta[k]`` is ``log2(theta_k)``
    for ``k = 0 .. truncation_length - 1``.
    """

    log2_eta: np.ndarray
    log2_theta: np.ndarray
    eta_minus1: float
    theta_minus1: float | None = None

    def __post_init__(self):
        le = np.asarray(self.log2_eta, dtype=float)
        lt = np.asarray(self.log2_theta, dtype=float)
        if le.shape != lt.shape or le.ndim != 1:
            raise DomainError("eta and theta ladders must be 1-D and of equal length")
        for name, arr in (("eta", le), ("theta", lt)):
            if np.any(np.isnan(arr)) or np.any(arr == np.inf):
                raise DomainError(f"{name} ladder must be finite and nonnegative")
            with np.errstate(invalid="ignore"):   # -inf - -inf
                rising = np.any(np.diff(arr) > 0)
            if rising:
                raise DomainError(f"{name} ladder must be non-increasing")
        if self.eta_minus1 < 0 or (self.theta_minus1 is not None and self.theta_minus1 < 0):
            raise DomainError("eta_-1 and theta_-1 must be nonnegative")
        object.__setattr__(self, "log2_eta", le)
        object.__setattr__(self, "log2_theta", lt)

    @classmethod
    def from_values(cls, eta, theta, eta_minus1=0.0, theta_minus1=None) -> "TruncationLadder":
        eta = np.asarray(eta, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any(eta < 0) or np.any(theta < 0):
            raise DomainError("ladder entries must be nonnegative")
        with np.errstate(divide="ignore"):
            return cls(np.log2(eta), np.log2(theta), float(eta_minus1), theta_minus1)

    @property
    def truncation_length(self) -> int:
        return int(self.log2_eta.size)

    @property
    def eta(self) -> np.ndarray:
        return np.exp2(self.log2_eta)

    @property
    def theta(self) -> np.ndarray:
        return np.exp2(self.log2_theta)


@dataclass(frozen=True)
class LadderParams:
    p: float
    q: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        _ladder_ratio(self.p, self.q, self.alpha)
        if not self.beta >= 0:
            raise DomainError(f"beta must be >= 0, got {self.beta!r}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma!r}")

    @property
    def ratio(self) -> float:
        return _ladder_ratio(self.p, self.q, self.alpha)


def geometric_ladder(params: LadderParams) -> TruncationLadder:
    """Super-geometric ladders ``eta_{k-1} = beta 2^{1 - A^k}``, ``theta_k = gamma 2^{-A^k alpha/(q-1)}``.

    Here ``A = alpha^2 / ((q-1)(p-1)) > 1``. The ladder stops once both
    weighted coefficients ``2^k eta_{k-1}`` and ``2^k theta_k`` are below
    ``2^-1000`` and decay at least by half from then on.
    """
    A = params.ratio
    s = params.alpha / (params.q - 1.0)
    lb = math.log2(params.beta) if params.beta > 0 else -math.inf
    lg = math.log2(params.gamma)
    log2_eta, log2_theta = [], []
    k = 0
    while True:
        Ak = A ** k
        w_eta = k + lb + 1.0 - Ak          # log2(2^k eta_{k-1})
        w_theta = k + lg - Ak * s          # log2(2^k theta_k)
        log2_theta.append(lg - Ak * s)
        if k >= 1:
            log2_eta.append(lb + 1.0 - Ak)  # eta_{k-1}
        decaying = Ak * (A - 1.0) * min(1.0, s) >= 2.0
        if decaying and w_eta < LOG2_NEGLIGIBLE and w_theta < LOG2_NEGLIGIBLE:
            break
        k += 1
        if k > MAX_LADDER:
            raise DomainError("ladder does not decay within the term budget; alpha is too close to its lower limit")
    log2_eta.append(lb + 1.0 - A ** (k + 1))
    return TruncationLadder(np.array(log2_eta), np.array(log2_theta), float(params.beta))


# -- constants ----------------------------------------------------------------


def _c_series(p, q, alpha, second):
    A = _ladder_ratio(p, q, alpha)
    s = alpha / (q - 1.0) if second else 1.0
    shift = p if second else 0.0
    partial, total, k = [], 0.0, 0
    while True:
        Ak = A ** k
        term = 2.0 ** (k + 2.0 - (1.0 - alpha) * Ak * s - shift)
        total += term
        partial.append(total)
        # after this point consecutive terms at least halve
        if (1.0 - alpha) * s * Ak * (A - 1.0) >= 2.0 and term < TERM_RTOL * total:
            return np.array(partial)
        k += 1
        if k > MAX_LADDER or not math.isfinite(total):
            raise DomainError("C_{p,q} series does not converge numerically for these parameters")


def c_pq_partial_sums(p: float, q: float, alpha: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    alpha = default_alpha(p, q) if alpha is None else alpha
    return _c_series(p, q, alpha, False), _c_series(p, q, alpha, True)


def c_pq(p: float, q: float, alpha: float | None = None) -> float:
    first, second = c_pq_partial_sums(p, q, alpha)
    return float(max(first[-1], second[-1]))


def c_sym(p: float, q: float, alpha: float | None = None) -> float:
    """``max(C_{p,q}, C_{q,p})``: covers estimates built from the mirrored ladder."""
    alpha = default_alpha(p, q) if alpha is None else alpha
    return max(c_pq(p, q, alpha), c_pq(q, p, alpha))


def zeta_partial_sums(r: float, n_terms: int) -> np.ndarray:
    k = np.arange(1, n_terms + 1, dtype=float)
    return np.cumsum(k ** -r)


@functools.lru_cache(maxsize=256)
def zeta(r: float, tol: float = 1e-10) -> float:
    """Riemann zeta for real ``r > 1``: a partial sum plus a bracketed tail.

    With the first ``N - 1`` terms summed, the Euler-Maclaurin expansion of
    the tail ``sum_{k >= N} k^-r`` truncated after the first Bernoulli term
    overestimates it by at most ``T = r(r+1)(r+2) N^(-r-3) / 720`` (``k^-r``
    is completely monotone). ``N`` is doubled until ``T < tol`` and the
    midpoint of the bracket is returned.
    """
    if not r > 1:
        raise DomainError(f"zeta series diverges for r={r!r} <= 1")
    if not tol > 0:
        raise DomainError("tol must be positive")
    r = float(r)
    n = 8
    width = lambda m: r * (r + 1.0) * (r + 2.0) * m ** (-r - 3.0) / 720.0
    while width(n) >= tol:
        n *= 2
    k = np.arange(1, n, dtype=float)
    head = math.fsum((k ** -r)[::-1].tolist())
    upper = n ** (1.0 - r) / (r - 1.0) + 0.5 * n ** -r + r * n ** (-r - 1.0) / 12.0
    return head + upper - 0.5 * width(n)


# -- series S and S_tilde -------------------------------------------------------


def _same_span(f, g):
    if f.span != g.span:
        raise DomainError(f"paths have different spans {f.span} and {g.span}")


def _weighted(log2_coeff, k, ttv_value):
    if ttv_value == 0.0 or log2_coeff == -math.inf:
        return 0.0
    w = float(k + log2_coeff)
    if w > 1023:
        return math.inf
    return 2.0 ** w * ttv_value


class _TtvCache:
    def __init__(self, path, iv):
        self.path, self.iv = path, iv
        self.osc = osc_norm(path, iv)
        self.cache = {}

    def __call__(self, log2_delta):
        delta = 2.0 ** log2_delta if log2_delta > -math.inf else 0.0
        if delta >= self.osc:
            return 0.0
        if delta not in self.cache:
            self.cache[delta] = ttv(self.path, self.iv, delta)
        return self.cache[delta]


def s_sum(f: SampledPath, g: SampledPath, ladder: TruncationLadder, iv=None, *, _cache=None) -> float:
    """The series ``S`` over the whole ladder (``eta_{-1}`` taken from ``f``)."""
    _same_span(f, g)
    iv = as_interval(f, iv)
    tf, tg = _cache or (_TtvCache(f, iv), _TtvCache(g, iv))
    eta_m1 = sup_dev_from_start(f, iv)
    log2_eta_prev = np.concatenate(([math.log2(eta_m1) if eta_m1 > 0 else -math.inf], ladder.log2_eta[:-1]))
    total = 0.0
    for k in range(ladder.truncation_length):
        total += _weighted(log2_eta_prev[k], k, tg(ladder.log2_theta[k]))
        total += _weighted(ladder.log2_theta[k], k, tf(ladder.log2_eta[k]))
    return float(total)


def s_tilde_sum(f: SampledPath, g: SampledPath, ladder: TruncationLadder, iv=None, *, _cache=None) -> float:
    """The mirrored series ``S_tilde`` (``theta_{-1} = sup|g(b) - g|``)."""
    _same_span(f, g)
    iv = as_interval(f, iv)
    tf, tg = _cache or (_TtvCache(f, iv), _TtvCache(g, iv))
    th_m1 = sup_dev_to_end(g, iv)
    log2_theta_prev = np.concatenate(([math.log2(th_m1) if th_m1 > 0 else -math.inf], ladder.log2_theta[:-1]))
    total = 0.0
    for k in range(ladder.truncation_length):
        total += _weighted(log2_theta_prev[k], k, tf(ladder.log2_eta[k]))
        total += _weighted(ladder.log2_eta[k], k, tg(ladder.log2_theta[k]))
    return float(total)


def min_tagged_bound(f: SampledPath, g: SampledPath, ladder: TruncationLadder, xi: float) -> float:
    """``2 min(S, S_tilde)``, a bound on ``|int f dg - f(xi)(g(b) - g(a))|`` for any tag ``xi``."""
    span = f.span
    if not span.lo <= xi <= span.hi:
        raise DomainError(f"tag {xi!r} outside the span [{span.lo}, {span.hi}]")
    cache = (_TtvCache(f, None), _TtvCache(g, None))
    return 2.0 * min(s_sum(f, g, ladder, _cache=cache), s_tilde_sum(f, g, ladder, _cache=cache))


# -- discrete summation-by-parts estimate ------------------------------------


def _check_tagged(partition, tags):
    t = np.asarray(partition, dtype=float)
    xi = np.asarray(tags, dtype=float)
    if t.size < 2 or np.any(np.diff(t) <= 0):
        raise DomainError("partition must be strictly increasing with at least two points")
    if xi.size != t.size - 1:
        raise DomainError(f"need {t.size - 1} tags, got {xi.size}")
    if np.any(xi < t[:-1]) or np.any(xi > t[1:]):
        raise DomainError("tags must satisfy t[i-1] <= xi[i] <= t[i]")
    return t, xi


def _check_seq(seq, r, name):
    s = np.asarray(seq, dtype=float)
    if s.size < r + 1:
        raise DomainError(f"{name} needs at least r+1 = {r + 1} entries")
    s = s[: r + 1]
    if np.any(s < 0) or np.any(np.diff(s) > 0):
        raise DomainError(f"{name} must be nonnegative and non-increasing")
    return s


def tagged_sum_deviation(f: SampledPath, g: SampledPath, partition, tags) -> float:
    """``|sum f(xi_i) [g(t_i) - g(t_{i-1})] - f(c) [g(d) - g(c)]|``."""
    t, xi = _check_tagged(partition, tags)
    gt = evaluate(g, t)
    return abs(float(np.dot(evaluate(f, xi), np.diff(gt)) - evaluate(f, t[0]) * (gt[-1] - gt[0])))


def summation_by_parts_bound(f, g, partition, tags, delta_seq, eps_seq, r: int, symmetric: bool = False) -> float:
    """Right-hand side of the summation-by-parts estimate on ``[c; d] = [t_0; t_n]``.

    ``sum_{k<=r} 2^k delta_{k-1} TTV(g, eps_k) + sum_{k<=r} 2^k eps_k TTV(f, delta_k) + n delta_r eps_r``
    with ``delta_{-1} = sup_{[c;d]} |f - f(c)|``. With ``symmetric=True`` the
    mirrored form ``sum 2^k eps_{k-1} TTV(f, delta_k) + sum 2^k delta_k TTV(g, eps_k) + n delta_r eps_r``
    with ``eps_{-1} = sup_{[c;d]} |g(d) - g|`` is returned instead.
    """
    t, _ = _check_tagged(partition, tags)
    if r < 0:
        raise DomainError("r must be >= 0")
    d = _check_seq(delta_seq, r, "delta_seq")
    e = _check_seq(eps_seq, r, "eps_seq")
    iv = Interval(float(t[0]), float(t[-1]))
    n = t.size - 1
    ttv_f = [ttv(f, iv, float(x)) for x in d]
    ttv_g = [ttv(g, iv, float(x)) for x in e]
    w = 2.0 ** np.arange(r + 1)
    if symmetric:
        prev = np.concatenate(([sup_dev_to_end(g, iv)], e[:-1]))
        main = np.sum(w * prev * ttv_f) + np.sum(w * d * ttv_g)
    else:
        prev = np.concatenate(([sup_dev_from_start(f, iv)], d[:-1]))
        main = np.sum(w * prev * ttv_g) + np.sum(w * e * ttv_f)
    return float(main + n * d[-1] * e[-1])


# -- Loeve-Young type bounds ---------------------------------------------------


def _variations(f, g, p, q, iv=None):
    return pvar_dp(f, iv, p).value, pvar_dp(g, iv, q).value


def optimal_gamma(vp_f: float, vq_g: float, beta: float, q: float, p: float) -> float:
    return (vq_g / vp_f) ** (1.0 / q) * beta ** (p / q)


def improved_ly_from(vp_f, osc_f, vq_g, p, q, c) -> float:
    if vp_f == 0.0 or vq_g == 0.0:
        return 0.0
    return c * vp_f ** (1.0 - 1.0 / q) * osc_f ** (1.0 + p / q - p) * vq_g ** (1.0 / q)


def improved_ly_bound(f: SampledPath, g: SampledPath, p: float, q: float, alpha: float | None = None, iv=None) -> float:
    check_exponents(p, q)
    vp, vq = _variations(f, g, p, q, iv)
    return improved_ly_from(vp, osc_norm(f, iv), vq, p, q, c_pq(p, q, alpha))


def classical_ly_bound(f: SampledPath, g: SampledPath, p: float, q: float, iv=None) -> float:
    check_exponents(p, q)
    vp, vq = _variations(f, g, p, q, iv)
    if vp == 0.0 or vq == 0.0:
        return 0.0
    return zeta(1.0 / p + 1.0 / q) * vp ** (1.0 / p) * vq ** (1.0 / q)


def symmetric_ly_bound(f: SampledPath, g: SampledPath, p: float, q: float, alpha: float | None = None) -> float:
    """Mirrored form: ``C ||f||_p ||g||_q^{q - q/p} ||g||_osc^{1 + q/p - q}``."""
    check_exponents(p, q)
    vp, vq = _variations(f, g, p, q)
    if vp == 0.0 or vq == 0.0:
        return 0.0
    return c_sym(p, q, alpha) * vp ** (1.0 / p) * vq ** (1.0 - 1.0 / p) * osc_norm(g) ** (1.0 + q / p - q)


def min_tagged_pq_bound(f: SampledPath, g: SampledPath, p: float, q: float, alpha: float | None = None) -> float:
    """Bound on ``|int f dg - f(xi) dg|`` valid for every tag, in p/q-variation form."""
    check_exponents(p, q)
    vp, vq = _variations(f, g, p, q)
    if vp == 0.0 or vq == 0.0:
        return 0.0
    nf, ng = vp ** (1.0 / p), vq ** (1.0 / q)
    ef, eg = 1.0 + p / q - p, 1.0 + q / p - q
    ratio = min((osc_norm(f) / nf) ** ef, (osc_norm(g) / ng) ** eg)
    return 2.0 * c_sym(p, q, alpha) * nf * ng * ratio


def indefinite_qvar_bound(f: SampledPath, g: SampledPath, p: float, q: float, alpha: float | None = None) -> tuple[float, float]:
    """Bounds on ``||t -> int_a^t f dg||_{q-var}``: ``(sharp, simplified)``.

    sharp      = (C ||f||_p^{p - p/q} ||f||_osc^{1 + p/q - p} + ||f||_inf) ||g||_q
    simplified = (C ||f||_p + ||f||_inf) ||g||_q
    """
    check_exponents(p, q)
    vp, vq = _variations(f, g, p, q)
    c = c_pq(p, q, alpha)
    ng = vq ** (1.0 / q)
    fmax = sup_norm(f)
    if vp == 0.0:
        return fmax * ng, fmax * ng
    nf = vp ** (1.0 / p)
    sharp = (c * nf ** (p - p / q) * osc_norm(f) ** (1.0 + p / q - p) + fmax) * ng
    simple = (c * nf + fmax) * ng
    return sharp, simple


# -- report --------------------------------------------------------------------


@dataclass
class BoundReport:
    s: float
    s_tilde: float
    improved_ly: float
    classical_ly: float
    c_pq: float
    min_tagged_bound: float
    p: float
    q: float
    alpha: float
    beta: float
    gamma: float
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "S": self.s,
            "S_tilde": self.s_tilde,
            "improved_ly": self.improved_ly,
            "classical_ly": self.classical_ly,
            "C_pq": self.c_pq,
            "min_tagged_bound": self.min_tagged_bound,
            "params": {"p": self.p, "q": self.q, "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma},
            **self.extra,
        }


def bound_report(f: SampledPath, g: SampledPath, p: float, q: float, alpha: float | None = None) -> BoundReport:
    """All series and Loeve-Young bounds for the pair, with the balancing choice of gamma."""
    check_exponents(p, q)
    _same_span(f, g)
    alpha = default_alpha(p, q) if alpha is None else float(alpha)
    c = c_pq(p, q, alpha)
    vp, vq = _variations(f, g, p, q)
    beta = sup_dev_from_start(f)
    osc_f = osc_norm(f)
    if vp == 0.0 or vq == 0.0:
        # one factor is constant: every series term carries a zero factor
        gamma, s, st = 0.0, 0.0, 0.0
    else:
        gamma = optimal_gamma(vp, vq, beta, q, p)
        ladder = geometric_ladder(LadderParams(p, q, alpha, beta, gamma))
        cache = (_TtvCache(f, None), _TtvCache(g, None))
        s = s_sum(f, g, ladder, _cache=cache)
        st = s_tilde_sum(f, g, ladder, _cache=cache)
    classical = 0.0 if vp == 0.0 or vq == 0.0 else zeta(1.0 / p + 1.0 / q) * vp ** (1.0 / p) * vq ** (1.0 / q)
    return BoundReport(
        s=s,
        s_tilde=st,
        improved_ly=improved_ly_from(vp, osc_f, vq, p, q, c),
        classical_ly=classical,
        c_pq=c,
        min_tagged_bound=2.0 * min(s, st),
        p=float(p),
        q=float(q),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
    )
