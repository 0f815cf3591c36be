import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from youngint.errors import DomainError
from youngint.paths import common_discontinuities
from youngint.signals import SignalRecipe, empirical_pvar_profile, generate

DYADIC_N = [2 ** k + 1 for k in range(6, 13)]


def test_ramp_two_points():
    f = generate(SignalRecipe("ramp", n=2))
    np.testing.assert_array_equal(f.times, [0, 1])
    np.testing.assert_array_equal(f.values, [0, 1])


def test_weierstrass_single_term():
    f = generate(SignalRecipe("weierstrass", {"a": 0.5, "b": 3, "m": 1}, n=3))
    np.testing.assert_allclose(f.values, [1, 0, -1], atol=1e-15)


@pytest.mark.parametrize(
    "family, params",
    [
        ("weierstrass", {"a": 0.5, "b": 2}),
        ("weierstrass", {"a": 1.5, "b": 3}),
        ("weierstrass", {"m": 0}),
        ("midpoint-walk", {"H": 1.0}),
        ("midpoint-walk", {"sigma": -1.0}),
        ("jump-step", {"jumps": 400}),
    ],
)
def test_invalid_params(family, params):
    with pytest.raises(DomainError):
        generate(SignalRecipe(family, params))


def test_recipe_validation():
    with pytest.raises(DomainError):
        SignalRecipe("brownian")
    with pytest.raises(DomainError):
        SignalRecipe("ramp", {"H": 0.5})
    with pytest.raises(DomainError):
        SignalRecipe("ramp", n=1)
    with pytest.raises(DomainError):
        generate(SignalRecipe("ramp"), (1.0, 1.0))


@given(st.sampled_from(["midpoint-walk", "jump-step", "weierstrass"]), st.integers(0, 2 ** 32), st.integers(8, 300))
def test_deterministic(family, seed, n):
    a = generate(SignalRecipe(family, n=n, seed=seed))
    b = generate(SignalRecipe(family, n=n, seed=seed))
    assert a == b
    assert a.values.tobytes() == b.values.tobytes()


def test_seeds_differ():
    a = generate(SignalRecipe("midpoint-walk", seed=1))
    b = generate(SignalRecipe("midpoint-walk", seed=2))
    assert not np.array_equal(a.values, b.values)


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 100, 257, 1000]))
def test_midpoint_walk_endpoints_anchored(seed, n):
    f = generate(SignalRecipe("midpoint-walk", {"x0": -0.5, "x1": 2.0}, n=n, seed=seed))
    assert f.values[0] == -0.5 and f.values[-1] == 2.0
    assert len(f) == n


def test_interpolation_rules():
    for fam in ("ramp", "weierstrass", "midpoint-walk"):
        assert generate(SignalRecipe(fam)).interp == "linear"
    js = generate(SignalRecipe("jump-step", {"jumps": 7}, n=50, seed=4))
    assert js.interp == "left-step"
    assert np.count_nonzero(np.diff(js.values)) == 7
    mw = generate(SignalRecipe("midpoint-walk", seed=9))
    assert common_discontinuities(mw, generate(SignalRecipe("weierstrass"))) == set()


def test_profile_ramp_and_constant():
    table = empirical_pvar_profile(SignalRecipe("ramp"), [1.0], [2, 17, 513])
    np.testing.assert_allclose(table[:, 0], 1.0)
    flat = empirical_pvar_profile(SignalRecipe("ramp", {"slope": 0.0}), [1.0, 1.5], [3, 65])
    assert np.all(flat == 0.0)


def test_profile_shape_and_errors():
    assert empirical_pvar_profile(SignalRecipe("ramp"), [1, 2, 3], [5, 9]).shape == (2, 3)
    with pytest.raises(DomainError):
        empirical_pvar_profile(SignalRecipe("ramp"), [], [5])


def test_midpoint_walk_profile_stabilizes_above_exponent():
    table = empirical_pvar_profile(SignalRecipe("midpoint-walk", {"H": 0.8}, seed=3), [1.1, 1.5], DYADIC_N)
    below, above = table[:, 0], table[:, 1]
    assert above[-1] / above[-2] < 1.01
    assert above[-1] / above[0] < 1.05
    assert below[-1] / below[0] > 1.4


def test_weierstrass_profile_growth():
    # a = 0.5, b = 4 has Hoelder exponent 1/2: variation exponent 2
    table = empirical_pvar_profile(SignalRecipe("weierstrass", {"a": 0.5, "b": 4, "m": 10}), [1.1, 1.8, 2.5], DYADIC_N)
    growth = table[-1] / table[0]
    assert growth[0] > 5.0
    assert growth[0] > 3 * growth[1] > 3 * growth[2]
    assert table[-1, 2] / table[-3, 2] < 1.02
