import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_pair, random_partition
from youngint import bounds
from youngint.bounds import (
    LadderParams,
    TruncationLadder,
    bound_report,
    c_pq,
    classical_ly_bound,
    geometric_ladder,
    improved_ly_bound,
    indefinite_qvar_bound,
    min_tagged_bound,
    min_tagged_pq_bound,
    s_sum,
    s_tilde_sum,
    summation_by_parts_bound,
    symmetric_ly_bound,
    tagged_sum_deviation,
    zeta,
    zeta_partial_sums,
)
from youngint.errors import DomainError
from youngint.integrate import exact_integral
from youngint.paths import SampledPath, total_variation
from youngint.pvar import pvar_dp
from youngint.truncvar import ttv

EXAMPLE = SampledPath([0, 1, 2, 3], [0, 1, 0.5, 1.5])
CONST = SampledPath([0, 1, 2, 3], [2, 2, 2, 2])


def test_ladder_closed_forms():
    lad = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 1.0, 1.0))
    A = 0.75 ** 2 / 0.25
    assert A == 2.25
    assert lad.eta[0] == pytest.approx(2 ** (-1.25))
    assert lad.eta[1] == pytest.approx(2 ** (1 - A ** 2))
    assert lad.theta[0] == pytest.approx(2 ** (-1.5))   # k = 0: A^0 alpha/(q-1) = 1.5
    assert lad.theta[1] == pytest.approx(2 ** (-3.375))
    assert lad.eta_minus1 == 1.0


def test_ladder_super_geometric():
    lad = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 1.0, 1.0))
    ratios_eta = np.diff(lad.log2_eta[:8])
    ratios_theta = np.diff(lad.log2_theta[:8])
    assert np.all(np.diff(ratios_eta) < 0) and np.all(np.diff(ratios_theta) < 0)


def test_ladder_zero_beta():
    lad = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 0.0, 1.0))
    assert np.all(lad.eta == 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 0.2])
def test_ladder_alpha_out_of_range(alpha):
    with pytest.raises(DomainError):
        LadderParams(1.5, 1.5, alpha, 1.0, 1.0)


def test_exponent_checks():
    with pytest.raises(DomainError):
        c_pq(2.0, 2.0)
    with pytest.raises(DomainError):
        classical_ly_bound(EXAMPLE, EXAMPLE, 2.5, 2.0)


def test_ladder_must_be_monotone():
    with pytest.raises(DomainError):
        TruncationLadder.from_values([0.1, 0.2], [0.1, 0.05])


def test_c_pq_values():
    assert c_pq(1.5, 1.5, 0.75) == pytest.approx(20.6407, abs=1e-4)
    first, second = bounds.c_pq_partial_sums(1.2, 1.8, 0.9)
    assert second[-1] < first[-1]
    assert c_pq(1.2, 1.8, 0.9) == pytest.approx(first[-1])


def _direct_c(p, q, alpha, terms=60):
    # independent summation until the terms are negligible
    A = alpha ** 2 / ((q - 1) * (p - 1))
    s1 = math.fsum(2.0 ** (k + 2 - (1 - alpha) * A ** k) for k in range(terms))
    s2 = math.fsum(2.0 ** (k + 2 - (1 - alpha) * A ** k * alpha / (q - 1) - p) for k in range(terms))
    return max(s1, s2)


@pytest.mark.parametrize("p, q", [(1.5, 1.5), (1.2, 1.8), (1.8, 1.2), (1.3, 1.6)])
def test_c_pq_matches_direct_sum(p, q):
    alpha = bounds.default_alpha(p, q)
    assert c_pq(p, q, alpha) == pytest.approx(_direct_c(p, q, alpha), rel=1e-11)


@pytest.mark.parametrize("r", [1.05, 4 / 3, 2.0, 3.5])
def test_zeta_against_scipy(r):
    assert zeta(r, 1e-10) == pytest.approx(float(scipy.special.zeta(r)), abs=1e-10)


def test_zeta_examples():
    assert abs(zeta(2.0, 1e-6) - math.pi ** 2 / 6) <= 1e-6
    assert zeta(4 / 3, 1e-6) == pytest.approx(3.601, abs=1e-3)
    assert np.all(np.diff(zeta_partial_sums(1.2, 1000)) > 0)
    with pytest.raises(DomainError):
        zeta(1.0)


def test_series_degenerate_cases():
    lad = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 1.0, 1.0))
    flat = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 0.0, 1.0))   # beta = sup|f - f(a)| = 0
    assert s_sum(CONST, EXAMPLE, flat) == 0.0
    n = lad.truncation_length
    # f constant: S_tilde keeps only its TTV(g) half
    expected = sum(2 ** k * lad.eta[k] * ttv(EXAMPLE, None, lad.theta[k]) for k in range(n))
    assert s_tilde_sum(CONST, EXAMPLE, lad) == pytest.approx(expected)
    # g constant: theta_{-1} = 0 removes the k = 0 term
    expected = sum(2 ** k * lad.theta[k - 1] * ttv(EXAMPLE, None, lad.eta[k]) for k in range(1, n))
    assert s_tilde_sum(EXAMPLE, CONST, lad) == pytest.approx(expected)
    # g constant: only the TTV(f) half of S survives
    expected = sum(2 ** k * lad.theta[k] * ttv(EXAMPLE, None, lad.eta[k]) for k in range(lad.truncation_length))
    assert s_sum(EXAMPLE, CONST, lad) == pytest.approx(expected)


def test_series_on_example():
    rep = bound_report(EXAMPLE, EXAMPLE, 1.5, 1.5)
    dev = abs(exact_integral(EXAMPLE, EXAMPLE) - 0.0)
    assert 0 < dev <= rep.s and dev <= rep.s_tilde
    assert rep.s != rep.s_tilde
    assert rep.min_tagged_bound == 2 * min(rep.s, rep.s_tilde)


def test_improved_bound_exponents_at_symmetric_point():
    # at p = q = 1.5: C V^p(f)^(1/3) osc(f)^(1/2) V^q(g)^(2/3)
    vp = pvar_dp(EXAMPLE, None, 1.5).value
    expected = c_pq(1.5, 1.5) * vp * math.sqrt(1.5)
    assert improved_ly_bound(EXAMPLE, EXAMPLE, 1.5, 1.5) == pytest.approx(expected, rel=1e-12)


def test_classical_bound_formula():
    vp = pvar_dp(EXAMPLE, None, 1.5).value
    assert classical_ly_bound(EXAMPLE, EXAMPLE, 1.5, 1.5) == pytest.approx(zeta(4 / 3) * vp ** (4 / 3))


def test_constant_factors_give_zero():
    for fn in (improved_ly_bound, classical_ly_bound, symmetric_ly_bound, min_tagged_pq_bound):
        assert fn(CONST, EXAMPLE, 1.5, 1.5) == 0.0
        assert fn(EXAMPLE, CONST, 1.5, 1.5) == 0.0
    rep = bound_report(CONST, EXAMPLE, 1.5, 1.5)
    assert rep.s == rep.s_tilde == rep.improved_ly == rep.classical_ly == 0.0


def test_summation_bound_examples():
    rng = np.random.default_rng(1)
    f, g = random_pair(rng, 16)
    pts, tags = random_partition(rng, 0.0, 1.0, 8)
    beta = np.max(np.abs(f(np.union1d(f.times, g.times)) - f.values[0]))
    rhs = summation_by_parts_bound(f, g, pts, tags, [0.0], [0.0], 0)
    assert rhs == pytest.approx(beta * total_variation(g))
    assert tagged_sum_deviation(CONST, g, pts, tags) == 0.0


def test_summation_bound_rejects_bad_tags():
    with pytest.raises(DomainError):
        summation_by_parts_bound(EXAMPLE, EXAMPLE, [0, 1, 3], [0.5, 0.9], [0.1], [0.1], 0)
    with pytest.raises(DomainError):
        summation_by_parts_bound(EXAMPLE, EXAMPLE, [0, 1, 3], [0.5, 2.0], [0.1, 0.2], [0.1, 0.0], 1)


def test_min_tagged_bound_tag_range():
    lad = geometric_ladder(LadderParams(1.5, 1.5, 0.75, 1.0, 1.0))
    with pytest.raises(DomainError):
        min_tagged_bound(EXAMPLE, EXAMPLE, lad, 5.0)


def test_report_json_keys():
    keys = list(bound_report(EXAMPLE, EXAMPLE, 1.5, 1.5).to_json())
    assert keys == ["S", "S_tilde", "improved_ly", "classical_ly", "C_pq", "min_tagged_bound", "params"]


@given(st.integers(0, 10_000), st.sampled_from([(1.5, 1.5), (1.2, 1.8), (1.8, 1.2), (1.4, 1.4)]))
def test_every_bound_dominates_deviation(seed, pq):
    p, q = pq
    f, g = random_pair(np.random.default_rng(seed), 24)
    exact = exact_integral(f, g)
    dg = g.values[-1] - g.values[0]
    dev = abs(exact - f.values[0] * dg)
    rep = bound_report(f, g, p, q)
    slack = 1e-10
    for b in (rep.s, rep.s_tilde, rep.improved_ly, rep.classical_ly, symmetric_ly_bound(f, g, p, q)):
        assert dev <= b + slack
    xi = float(np.random.default_rng(seed + 1).uniform())
    dev_xi = abs(exact - f(xi) * dg)
    assert dev_xi <= rep.min_tagged_bound + slack
    assert dev_xi <= min_tagged_pq_bound(f, g, p, q) + slack


@given(st.integers(0, 10_000))
def test_indefinite_bound_ordering(seed):
    f, g = random_pair(np.random.default_rng(seed), 24)
    sharp, simple = indefinite_qvar_bound(f, g, 1.5, 1.5)
    assert sharp <= simple * (1 + 1e-12)
