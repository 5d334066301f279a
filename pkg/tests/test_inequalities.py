import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussbm.body2d import HalfPlane, disc
from gaussbm.exceptions import HypothesisError, MeanConvexityError
from gaussbm.generators import (case_rng, mean_convex_body, random_body, random_function,
                                zero_mean)
from gaussbm.inequalities import (dual_gap, dual_report, isoperimetric_and_ledoux,
                                  iso_second_variation_compare, ledoux_limit,
                                  ledoux_limit_quadrature, mean_curvature_slack,
                                  poincare_report)
from gaussbm.variations import BoundaryFunction

ONE = BoundaryFunction.constant(1.0)
COS = BoundaryFunction(0.0, (1.0,))


@pytest.mark.parametrize("t", [-3.0, -1.0, 0.0, 0.5, 2.0, 3.0])
def test_halfplane_equality(t):
    rep = poincare_report(HalfPlane(t, 0.3), ONE.scaled(1.7))
    assert abs(rep.gap) <= 1e-12
    assert rep.refined_extra == pytest.approx(0.0, abs=1e-12)


def test_halfplane_rejects_nonconstant():
    with pytest.raises(ValueError):
        poincare_report(HalfPlane(0.0), COS)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_disc_translation_gap_closed_form(r):
    # mean-zero f = cos: gap = r^2 e^{-r^2/2} / 2
    rep = poincare_report(disc(r), COS)
    assert rep.mean_f == pytest.approx(0.0, abs=1e-14)
    assert rep.gap == pytest.approx(0.5 * r * r * math.exp(-r * r / 2), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1_000_000))
def test_poincare_and_refined(case):
    rng = case_rng(17, "poincare-prop", case)
    body, f = random_body(rng), random_function(rng)
    rep = poincare_report(body, f)
    assert rep.gap >= -1e-7
    assert rep.refined_gap is not None and rep.refined_gap >= -1e-7
    assert rep.prev_gap > rep.gap
    z = poincare_report(body, zero_mean(f, body))
    assert abs(z.mean_f) < 1e-12
    assert z.prev_gap == pytest.approx(z.gap, abs=1e-10)


def test_gap_is_quadratic_in_f():
    rng = case_rng(17, "poincare", 0)
    body, f = random_body(rng), random_function(rng)
    assert poincare_report(body, f.scaled(3.0)).gap == pytest.approx(
        9.0 * poincare_report(body, f).gap, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 1_000_000))
def test_mean_curvature_inequality(case):
    body = random_body(case_rng(17, "mc", case))
    rep = mean_curvature_slack(body)
    assert rep.slack >= -1e-9
    if rep.measure >= 0.5:
        assert rep.sign_assertion


def test_iso_second_variation():
    d2K, d2E, ok = iso_second_variation_compare(disc(2.0))
    assert ok and d2K < d2E <= 0
    with pytest.raises(HypothesisError):
        iso_second_variation_compare(disc(0.5))


def test_dual_disc_ratio():
    r = 0.5
    rep = dual_report(disc(r), COS)
    assert rep.rhs / rep.lhs == pytest.approx((2 - r * r) ** 2 / (4 * (1 - r * r)), rel=1e-10)
    # golden-section search locates C to about sqrt(machine eps)
    assert rep.C == pytest.approx(0.0, abs=1e-6)


def test_dual_constant_function():
    rep = dual_report(disc(0.5), ONE.scaled(0.8))
    assert rep.lhs == 0.0
    assert rep.rhs == pytest.approx(0.0, abs=1e-12)
    assert rep.C == pytest.approx(0.8, abs=1e-6)


def test_dual_minimizes_over_C():
    rng = case_rng(17, "dual", 0)
    body, f = mean_convex_body(rng), random_function(rng, 4)
    rep = dual_report(body, f)
    for dc in (-1e-3, 1e-3):
        assert dual_gap(body, f, rep.C + dc) >= rep.gap


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1_000_000))
def test_dual_inequality(case):
    rng = case_rng(17, "dual-prop", case)
    assert dual_gap(mean_convex_body(rng), random_function(rng, 4)) >= -1e-7


def test_dual_needs_mean_convexity():
    with pytest.raises(MeanConvexityError) as exc:
        dual_report(disc(1.5), COS)
    assert exc.value.min_h_gamma < 0


def test_ledoux_chain():
    iso, fp, limits = isoperimetric_and_ledoux(disc(1.0))
    assert iso > 0 and fp >= 1
    assert list(limits) == sorted(limits)
    assert abs(limits[1] - 1) <= 5e-2
    assert ledoux_limit(5.0) == pytest.approx(ledoux_limit_quadrature(5.0), rel=1e-6)
    # at t = 12 the naive 1 - e^{-t^2/2} would round to 1
    assert math.isfinite(ledoux_limit(12.0))
