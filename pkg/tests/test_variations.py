import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussbm.body2d import SupportBody, disc
from gaussbm.exceptions import SchemaError, StepRejectedError
from gaussbm.generators import case_rng, random_body, random_function
from gaussbm.variations import (BoundaryFunction, fd_variations, function_from_json,
                                gaussian_minkowski_slack, minkowski_second_slack,
                                steiner_fit, variations)

ONE = BoundaryFunction.constant(1.0)
SHIFT_X = BoundaryFunction(0.0, (1.0,))


@pytest.mark.parametrize("r", [0.4, 1.0, 1.7])
def test_gaussian_disc_dilation(r):
    rep = variations(disc(r), ONE, "gaussian")
    e = math.exp(-r * r / 2)
    assert rep.delta0 == pytest.approx(1 - e, abs=1e-13)
    assert rep.delta1 == pytest.approx(r * e, abs=1e-13)
    assert rep.delta2 == pytest.approx((1 - r * r) * e, abs=1e-12)


@pytest.mark.parametrize("r", [0.4, 1.0, 1.7])
def test_gaussian_disc_translation(r):
    # d^2/dt^2 gamma(D_r + t e1) at 0 is int_D (x1^2 - 1) dgamma = -(r^2/2) e^{-r^2/2}
    rep = variations(disc(r), SHIFT_X, "gaussian")
    assert rep.delta1 == pytest.approx(0.0, abs=1e-14)
    assert rep.delta2 == pytest.approx(-0.5 * r * r * math.exp(-r * r / 2), abs=1e-12)


def test_lebesgue_translation_invariance():
    body = random_body(case_rng(2, "var", 0))
    rep = variations(body, SHIFT_X, "lebesgue")
    assert rep.delta1 == pytest.approx(0.0, abs=1e-12)
    assert rep.delta2 == pytest.approx(0.0, abs=1e-11)


def test_lebesgue_dilation_is_steiner():
    body = random_body(case_rng(2, "var", 1))
    rep = variations(body, ONE, "lebesgue")
    A, L, c2, _ = steiner_fit(body)
    assert rep.delta0 == pytest.approx(A, rel=1e-12)
    assert rep.delta1 == pytest.approx(L, rel=1e-12)
    assert rep.delta2 == pytest.approx(2 * c2, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from(["gaussian", "lebesgue"]))
def test_matches_finite_differences(case, mode):
    rng = case_rng(11, "var-fd", case)
    body, f = random_body(rng), random_function(rng)
    rep = variations(body, f, mode)
    d1, d2 = fd_variations(body, f, mode)
    assert abs(rep.delta1 - d1) <= 1e-6 * max(1.0, abs(rep.delta1))
    assert abs(rep.delta2 - d2) <= 1e-5 * max(1.0, abs(rep.delta2))


def test_second_variation_is_quadratic():
    rng = case_rng(2, "var", 2)
    body, f = random_body(rng), random_function(rng)
    a = variations(body, f).delta2
    assert variations(body, f.scaled(-2.5)).delta2 == pytest.approx(6.25 * a, rel=1e-12)


def test_step_rejected():
    body = SupportBody(1.0, (0.0, 0.3))
    f = BoundaryFunction(0.0, (0.0, 0.0, 0.0, 1.0))
    with pytest.raises(StepRejectedError) as exc:
        fd_variations(body, f, h_step=0.1)
    assert 0 < exc.value.max_step < 0.1
    fd_variations(body, f, h_step=exc.value.max_step / 2)


def test_classical_minkowski_and_steiner():
    body = SupportBody(1.0, (0.1, 0.0, 0.05), (0.0, -0.02))
    _, _, c2, res = steiner_fit(body)
    assert c2 == pytest.approx(math.pi, abs=1e-8) and res < 1e-9
    assert minkowski_second_slack(body) > 0
    assert minkowski_second_slack(disc(2.5)) == pytest.approx(0.0, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_gaussian_minkowski_nonnegative(case):
    assert gaussian_minkowski_slack(random_body(case_rng(11, "gm", case))) >= -1e-9


def test_function_json():
    f = function_from_json({"c0": 1, "cos": [0.5], "sin": [0, 0.2]})
    assert f == BoundaryFunction(1.0, (0.5, 0.0), (0.0, 0.2))
    with pytest.raises(SchemaError, match=r"^f\.sin"):
        function_from_json({"sin": "no"})
    with pytest.raises(ValueError, match="mode"):
        variations(disc(1.0), ONE, "uniform")
