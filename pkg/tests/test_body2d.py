import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from gaussbm.body2d import (HalfPlane, SupportBody, body_from_json, body_to_json,
                            boundary_geometry, combine, disc, gaussian_functionals,
                            lebesgue_functionals, validate)
from gaussbm.exceptions import NonConvexBodyError, SchemaError
from gaussbm.generators import case_rng, random_body


def ellipse16(a=2.0, b=1.0, shift=(0.3, -0.2)):
    body = SupportBody.from_function(
        lambda t: np.sqrt((a * np.cos(t)) ** 2 + (b * np.sin(t)) ** 2), 16, 1024)
    cos, sin = list(body.cos), list(body.sin)
    cos[0] += shift[0]
    sin[0] += shift[1]
    return SupportBody(body.a0, cos, sin, 1024)


def radial_function(body, phi, n_normals=200_000):
    """Polar radius of a convex body containing the origin, from h alone.

    ``r(phi) = 1 / max_theta <u_phi, nu(theta)> / h(theta)``.
    """
    theta = np.linspace(0.0, 2 * np.pi, n_normals, endpoint=False)
    h = body.support(theta)
    c, s = np.cos(theta) / h, np.sin(theta) / h
    return np.array([1.0 / np.max(np.cos(p) * c + np.sin(p) * s) for p in phi])


def test_polar_ray_oracle_for_truncated_ellipse():
    body = ellipse16()
    phi = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
    r = radial_function(body, phi)
    gamma_polar = float(np.mean(-np.expm1(-0.5 * r * r)))
    area_polar = float(np.mean(0.5 * r * r)) * 2 * np.pi
    measure, _ = gaussian_functionals(body)
    area, _ = lebesgue_functionals(body)
    # the max over sampled normals limits the oracle to about 1e-9
    assert measure == pytest.approx(gamma_polar, abs=1e-8)
    assert area == pytest.approx(area_polar, rel=1e-8)


def test_shoelace_area():
    body = ellipse16()
    theta = np.linspace(0.0, 2 * np.pi, 100_000, endpoint=False)
    x, y = body.boundary_point(theta).T
    shoelace = 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    assert lebesgue_functionals(body)[0] == pytest.approx(shoelace, rel=1e-8)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_disc_closed_forms(r):
    m, b = gaussian_functionals(disc(r))
    assert m == pytest.approx(-math.expm1(-r * r / 2), abs=1e-13)
    assert b == pytest.approx(r * math.exp(-r * r / 2), abs=1e-13)
    area, per = lebesgue_functionals(disc(r))
    assert area == pytest.approx(math.pi * r * r, rel=1e-13)
    assert per == pytest.approx(2 * math.pi * r, rel=1e-13)


def test_off_centre_disc_against_marcum_series():
    # gamma of a disc at distance d: noncentral chi-square with 2 dof
    r, d = 1.2, 0.9
    expected = special.chndtr(r * r, 2, d * d)
    assert gaussian_functionals(disc(r, (d, 0.0)))[0] == pytest.approx(expected, abs=1e-12)


def test_grid_convergence():
    body = random_body(case_rng(1, "grid", 0), grid=128)
    m128 = gaussian_functionals(disc(1.3, (0.2, 0.1), grid=128))[0]
    m256 = gaussian_functionals(disc(1.3, (0.2, 0.1), grid=256))[0]
    assert abs(m128 - m256) < 1e-12
    b1 = gaussian_functionals(body.with_grid(256))[0]
    b2 = gaussian_functionals(body.with_grid(1024))[0]
    assert abs(b1 - b2) < 1e-11


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(-np.pi, np.pi))
def test_rotation_invariance(case, angle):
    body = random_body(case_rng(3, "rotation", case))
    m0, b0 = gaussian_functionals(body)
    m1, b1 = gaussian_functionals(body.rotate(angle))
    assert m1 == pytest.approx(m0, abs=1e-10)
    assert b1 == pytest.approx(b0, abs=1e-10)


def test_rotate_moves_boundary():
    body = random_body(case_rng(3, "rotation", 1))
    q = body.rotate(0.7).boundary_point(np.array([1.0 + 0.7]))[0]
    p = body.boundary_point(np.array([1.0]))[0]
    rot = np.array([[math.cos(0.7), -math.sin(0.7)], [math.sin(0.7), math.cos(0.7)]])
    np.testing.assert_allclose(q, rot @ p, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_isoperimetric_floor(case):
    from gaussbm.gaussfn import gaussian_profile
    body = random_body(case_rng(3, "iso", case))
    m, b = gaussian_functionals(body)
    assert b >= gaussian_profile(m)[0] - 1e-9


def test_curvature_of_disc_and_h_gamma():
    g = boundary_geometry(disc(2.0, (0.5, 0.0)))
    np.testing.assert_allclose(g.kappa, 0.5, rtol=1e-14)
    # H_gamma = kappa - <x, nu>
    np.testing.assert_allclose(g.h_gamma, 0.5 - np.einsum("ij,ij->i", g.points, g.normals),
                               atol=1e-13)


def test_halfplane():
    H = HalfPlane(0.7)
    m, b = gaussian_functionals(H)
    assert m == pytest.approx(special.ndtr(0.7), rel=1e-15)
    assert b == pytest.approx(math.exp(-0.245) / math.sqrt(2 * math.pi), rel=1e-15)
    assert H.h_gamma == -0.7


def test_nonconvex_rejected():
    bad = SupportBody(1.0, (0.0, 0.3))   # h + h'' = 1 - 0.9 cos 2t
    assert validate(bad).ok
    worse = SupportBody(1.0, (0.0, 0.4))
    diag = validate(worse)
    assert not diag.ok and diag.bad_ranges and diag.min_radius < 0
    with pytest.raises(NonConvexBodyError) as exc:
        gaussian_functionals(worse)
    assert exc.value.min_radius == pytest.approx(-0.2, abs=1e-3)


def test_combine_is_linear_in_support():
    K = random_body(case_rng(5, "combine", 0))
    L = random_body(case_rng(5, "combine", 1))
    M = combine(0.3, K, 0.7, L)
    t = np.linspace(0, 2 * np.pi, 17)
    np.testing.assert_allclose(M.support(t), 0.3 * K.support(t) + 0.7 * L.support(t),
                               atol=1e-14)
    assert combine(2.0, HalfPlane(1.0), 1.0, HalfPlane(-0.5)).t == 1.5
    with pytest.raises(ValueError):
        combine(1.0, HalfPlane(1.0, 0.0), 1.0, HalfPlane(1.0, 1.0))


def test_json_round_trip_and_errors():
    body = random_body(case_rng(5, "json", 0))
    assert body_from_json(body_to_json(body)) == body
    d = body_from_json({"type": "disc", "r": 2, "center": [1, 0]})
    assert d.a0 == 2 and d.cos[0] == 1
    for obj, key in [({"type": "fourier"}, "body.a0"),
                     ({"type": "fourier", "a0": 1, "cos": ["x"]}, "body.cos"),
                     ({"type": "ellipse"}, "body.type"),
                     ({"type": "disc", "r": 1, "grid": 2}, "body.grid")]:
        with pytest.raises(SchemaError, match=f"^{key}"):
            body_from_json(obj)
