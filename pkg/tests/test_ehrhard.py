import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussbm.body2d import combine, disc, gaussian_functionals
from gaussbm.ehrhard import (ConcavityProfile, cd1_counterexample, conditioned_profile,
                             ehrhard_concavity, halfline_pair, predicted_second_derivative,
                             transform_concavity)
from gaussbm.gaussfn import INV_SQRT_2PI, ProfileTransform, gaussian_transform, std_normal_inv
from gaussbm.generators import case_rng, random_body


def mp_conditioned(t, b):
    with mpmath.workdps(50):
        r = mpmath.ncdf(t) / mpmath.ncdf(b)
        return float(mpmath.sqrt(2) * mpmath.erfinv(2 * r - 1))


def test_discs_concave():
    prof = ehrhard_concavity(disc(1.0), disc(2.0, (0.5, 0.0)))
    assert prof.is_concave()
    assert prof.values[0] == pytest.approx(std_normal_inv(gaussian_functionals(disc(1.0))[0]))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 1_000_000))
def test_random_pairs_concave(case):
    rng = case_rng(23, "ehrhard-prop", case)
    assert ehrhard_concavity(random_body(rng), random_body(rng), 33).max_second_diff <= 1e-8


@pytest.mark.parametrize("a,c", [(-2.0, 1.5), (0.5, -1.0), (3.0, 3.0)])
def test_halflines_linear(a, c):
    prof = ehrhard_concavity(*halfline_pair(a, c))
    np.testing.assert_allclose(prof.values, a + (c - a) * prof.t, atol=1e-12)
    assert np.max(np.abs(prof.second_diffs)) <= 1e-12


def test_second_derivative_matches_gap():
    rng = case_rng(23, "ehrhard", 0)
    K, L = random_body(rng), random_body(rng)

    def F(s):
        return std_normal_inv(gaussian_functionals(combine(1 - s, K, s, L))[0])

    t0, h = 0.4, 1e-3
    fd = [(F(t0 + k) - 2 * F(t0) + F(t0 - k)) / k ** 2 for k in (h, h / 2)]
    rich = (4 * fd[1] - fd[0]) / 3
    assert predicted_second_derivative(K, L, t0) == pytest.approx(rich, rel=1e-5, abs=1e-8)


def test_transforms():
    K, L = disc(0.7), disc(1.6, (0.3, -0.2))
    base = ehrhard_concavity(K, L, 9)
    gauss = transform_concavity(K, L, gaussian_transform(), 9)
    np.testing.assert_allclose(gauss.values, INV_SQRT_2PI * base.values, atol=1e-9)
    flat = transform_concavity(K, L, ProfileTransform(lambda s: 0.0), 9)
    measures = [gaussian_functionals(combine(1 - s, K, s, L))[0] for s in flat.t]
    np.testing.assert_allclose(flat.values, np.array(measures) - 0.5, atol=1e-12)


@pytest.mark.parametrize("t", [-2.0, -0.5, -1e-3, -1e-8])
def test_conditioned_profile_oracle(t):
    assert conditioned_profile(t, 0.0) == pytest.approx(mp_conditioned(t, 0.0), rel=1e-11)
    assert conditioned_profile(t + 1.0, 1.0) == pytest.approx(mp_conditioned(t + 1, 1.0),
                                                              rel=1e-11)


def test_cd1_counterexample():
    rep = cd1_counterexample(0.0)
    assert rep.violated and rep.halfline_violated and rep.blow_up
    assert rep.profile.max_second_diff > 1.0
    triple = [-0.3, -0.2, -0.1]
    d = conditioned_profile(np.array(triple), 0.0) @ np.array([1.0, -2.0, 1.0])
    assert d == pytest.approx(0.1260723702812771, rel=1e-10)
    expected = sum(c * mp_conditioned(x, 0.0) for c, x in zip((1, -2, 1), triple))
    assert d == pytest.approx(expected, rel=1e-10)


def test_profile_validation():
    with pytest.raises(ValueError):
        ConcavityProfile.from_values([0, 1], [0, 1])
    with pytest.raises(ValueError):
        ConcavityProfile.from_values([0, 2, 1], [0, 1, 2])
    with pytest.raises(ValueError):
        conditioned_profile(0.1, 0.0)
