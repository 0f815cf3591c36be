import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import paths
from youngint.errors import DomainError
from youngint.paths import SampledPath, total_variation
from youngint.pvar import full_pvar_norm, pvar_dp, pvar_exhaustive, pvar_norm, pvar_prefix


def test_tent():
    res = pvar_dp(SampledPath([0, 1, 2], [0, 1, 0]), None, 2.0)
    assert res.value == 2.0
    assert res.norm == pytest.approx(math.sqrt(2))
    assert res.maximizer == (0, 1, 2)


def test_example_value():
    # |1|^1.5 + |0.5|^1.5 + |1|^1.5 beats every coarser chain
    f = SampledPath([0, 1, 2, 3], [0, 1, 0.5, 1.5])
    expected = 2 + 0.5 ** 1.5
    assert pvar_dp(f, None, 1.5).value == pytest.approx(expected, rel=1e-14)
    assert pvar_exhaustive(f, None, 1.5) == pytest.approx(expected, rel=1e-14)


def test_monotone_path_keeps_endpoints_only():
    res = pvar_dp(SampledPath([0, 1, 2, 3], [0, 1, 2, 3]), None, 2.0)
    assert res.value == 9.0 and res.maximizer == (0, 3)


def test_p_one_is_total_variation():
    f = SampledPath([0, 1, 2, 3, 4], [0, 2, -1, 0.5, 3])
    assert pvar_dp(f, None, 1.0).value == pytest.approx(total_variation(f))


def test_constant_path():
    res = pvar_dp(SampledPath([0, 1, 2], [1, 1, 1]), None, 1.5)
    assert res.value == 0.0 and res.norm == 0.0


def test_full_norm():
    f = SampledPath([0, 1, 2], [-2, -1, -2])
    assert full_pvar_norm(f, 2.0) == pytest.approx(2 + math.sqrt(2))


def test_huge_values_do_not_overflow():
    f = SampledPath([0, 1, 2], [0, 1e200, 0])
    res = pvar_dp(f, None, 2.0)
    assert res.value == math.inf
    assert res.norm == pytest.approx(math.sqrt(2) * 1e200)


def test_errors():
    f = SampledPath([0, 1], [0, 1])
    with pytest.raises(DomainError):
        pvar_dp(f, None, 0.0)
    with pytest.raises(DomainError):
        pvar_norm(f, None, 0.5)
    with pytest.raises(DomainError):
        pvar_exhaustive(SampledPath(np.arange(20), np.zeros(20)), None, 1.5)


def test_prefix_matches_direct():
    rng = np.random.default_rng(3)
    v = np.cumsum(rng.normal(size=40))
    out = pvar_prefix(v, 1.5)
    for j in (1, 5, 17, 39):
        assert out[j] == pytest.approx(pvar_dp(SampledPath(np.arange(j + 1), v[: j + 1]), None, 1.5).value)


def test_prefix_truncates_at_limit():
    v = np.arange(10.0)
    out = pvar_prefix(v, 2.0, limit=20.0)
    assert out[-1] > 20.0 and np.all(out[:-1] <= 20.0)


@given(paths(min_size=1, max_size=9), st.sampled_from([1.0, 1.3, 1.5, 2.0, 3.0]))
def test_dp_matches_exhaustive(f, p):
    assert pvar_dp(f, None, p).value == pytest.approx(pvar_exhaustive(f, None, p), rel=1e-12, abs=1e-12)


@given(paths(min_size=2), st.floats(1.0, 3.0), st.floats(0.0, 1.0))
def test_superadditive(f, p, frac):
    span = f.span
    d = span.lo + frac * span.length
    left = pvar_dp(f, (span.lo, d), p).value
    right = pvar_dp(f, (d, span.hi), p).value
    assert left + right <= pvar_dp(f, None, p).value * (1 + 1e-12) + 1e-12


@given(paths(min_size=2), st.floats(1.0, 2.0), st.floats(0.0, 1.0))
def test_norm_decreasing_in_p(f, p, extra):
    assert pvar_norm(f, None, p + extra) <= pvar_norm(f, None, p) * (1 + 1e-12) + 1e-12
