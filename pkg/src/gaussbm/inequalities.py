"""Both sides of the Gaussian boundary Poincare inequality and its corollaries.

All gaps and slacks are signed: a nonnegative value means the inequality
holds for that input.  Half-planes are handled by the exact 1D reduction
(the boundary is a line, the Gaussian factorizes) and only admit constant
test functions.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize

from .body2d import HalfPlane, boundary_geometry, disc, gaussian_functionals
from .exceptions import HypothesisError, MeanConvexityError
from .gaussfn import gaussian_profile, std_normal, std_normal_inv

LEDOUX_RADII = (5.0, 8.0, 12.0)

__all__ = [
    "PoincareReport",
    "dual_gap",
    "iso_second_variation_compare",
    "isoperimetric_and_ledoux",
    "mean_curvature_slack",
    "poincare_report",
]


@dataclass(frozen=True)
class PoincareReport:
    """Terms of the Gaussian boundary Poincare inequality for one (K, f).

    ``gap = dirichlet + mean - curvature`` is nonnegative when the
    inequality holds.  ``refined_extra`` is ``None`` when the integral of
    beta is not positive (it is then undefined, or the mean-curvature
    inequality failed).
    """

    measure: float
    boundary_mass: float
    mean_f: float
    term_curvature: float
    term_mean: float
    term_dirichlet: float
    gap: float
    beta_integral: float
    refined_extra: float | None
    prev_gap: float

    @property
    def refined_gap(self):
        if self.refined_extra is None:
            return None
        return self.gap - self.refined_extra


def poincare_report(body, f):
    """Evaluate every term of the inequality for ``body`` and ``f``.

    ``beta = (log I)'(gamma(K)) * gamma_dK(dK) - H_gamma`` pointwise; the
    refined inequality subtracts ``(int f beta)^2 / int beta``.  The
    previous (weaker) bound replaces ``(log I)'(v)`` by ``1/v``.
    """
    if isinstance(body, HalfPlane):
        if not f.is_constant:
            raise ValueError("half-plane reports only support constant f")
        measure, mass = gaussian_functionals(body)
        _, coef = gaussian_profile(measure)
        c = f.c0
        mean_f = c * mass
        curvature = body.h_gamma * c * c * mass
        beta_const = coef * mass - body.h_gamma
        beta_int = beta_const * mass
        term_mean = coef * mean_f ** 2
        gap = term_mean - curvature
        if beta_int > 0:
            extra = c * c * beta_int
        elif abs(beta_const) <= 1e-12 * max(1.0, abs(body.t)):
            # beta vanishes identically on half-planes; this is roundoff
            extra = 0.0
        else:
            extra = None
        return PoincareReport(measure, mass, mean_f, curvature, term_mean, 0.0,
                              gap, beta_int, extra, mean_f ** 2 / measure - curvature)

    grid = boundary_geometry(body)
    measure, mass = gaussian_functionals(body)
    _, coef = gaussian_profile(measure)
    w = grid.gauss_weights
    fv, fs = f.on_grid(grid)
    mean_f = float(np.sum(fv * w))
    curvature = float(np.sum(grid.h_gamma * fv * fv * w))
    dirichlet = float(np.sum(fs * fs * grid.radius * w))
    term_mean = coef * mean_f ** 2
    gap = dirichlet + term_mean - curvature
    beta = coef * mass - grid.h_gamma
    beta_int = float(np.sum(beta * w))
    extra = float(np.sum(fv * beta * w)) ** 2 / beta_int if beta_int > 0 else None
    prev_gap = dirichlet + mean_f ** 2 / measure - curvature
    return PoincareReport(measure, mass, mean_f, curvature, term_mean, dirichlet,
                          gap, beta_int, extra, prev_gap)


@dataclass(frozen=True)
class MeanCurvatureReport:
    slack: float
    integral_h_gamma: float
    measure: float
    sign_assertion: bool | None
    """``int H_gamma <= 0`` when gamma(K) >= 1/2; ``None`` when not applicable."""


def mean_curvature_slack(body, tol=0.0):
    """``(log I)'(gamma(K)) gamma_dK(dK)^2 - int H_gamma d gamma_dK``."""
    measure, mass = gaussian_functionals(body)
    _, coef = gaussian_profile(measure)
    if isinstance(body, HalfPlane):
        integral = body.h_gamma * mass
    else:
        grid = boundary_geometry(body)
        integral = float(np.sum(grid.h_gamma * grid.gauss_weights))
    sign = integral <= tol if measure >= 0.5 else None
    return MeanCurvatureReport(coef * mass ** 2 - integral, integral, measure, sign)


def _second_variation_f1(body):
    if isinstance(body, HalfPlane):
        return body.h_gamma * gaussian_functionals(body)[1]
    grid = boundary_geometry(body)
    return float(np.sum(grid.h_gamma * grid.gauss_weights))


def iso_second_variation_compare(body, tol=1e-8):
    """Compare ``delta2(K)`` with ``delta2(E)`` for the half-plane of equal measure.

    Returns
    -------
    delta2_K, delta2_E : float
    ok : bool
        ``delta2_K <= delta2_E + tol`` and both are ``<= tol``.

    Raises
    ------
    HypothesisError
        If ``gamma(K) < 1/2``.
    """
    measure, _ = gaussian_functionals(body)
    if measure < 0.5:
        raise HypothesisError(f"needs gamma(K) >= 1/2, got {measure:.6g}")
    t = std_normal_inv(measure)
    delta2_E = -t * std_normal(t)[0]
    delta2_K = _second_variation_f1(body)
    ok = delta2_K <= delta2_E + tol and delta2_K <= tol and delta2_E <= tol
    return delta2_K, delta2_E, bool(ok)


def _ou_generator(grid, f):
    """``L f = f_ss - <x, tau> f_s`` on the boundary curve, and ``f_s``."""
    fp = f.evaluate(grid.theta, 1)
    fpp = f.evaluate(grid.theta, 2)
    rho, drho = grid.radius, grid.dradius
    fs = fp / rho
    fss = fpp / rho ** 2 - fp * drho / rho ** 3
    x_tau = np.einsum("ij,ij->i", grid.points, grid.tangents)
    return fss - x_tau * fs, fs


@dataclass(frozen=True)
class DualReport:
    lhs: float
    rhs: float
    C: float

    @property
    def gap(self):
        return self.rhs - self.lhs


def dual_report(body, f, C=None):
    """Both sides of the dual inequality on a Gaussian mean-convex body.

    ``lhs = int kappa f_s^2 d gamma_dK`` and
    ``rhs = int (L f + (f - C)/2)^2 / H_gamma d gamma_dK`` with ``L`` the
    boundary Ornstein-Uhlenbeck generator.  ``C=None`` minimizes ``rhs``
    over ``C`` by golden-section search.

    Raises
    ------
    MeanConvexityError
        If ``H_gamma`` is not strictly positive on the grid.
    """
    grid = boundary_geometry(body)
    if grid.h_gamma.min() <= 0:
        raise MeanConvexityError(
            f"body is not Gaussian mean-convex: min H_gamma = {grid.h_gamma.min():.6g}",
            float(grid.h_gamma.min()))
    w = grid.gauss_weights
    Lf, fs = _ou_generator(grid, f)
    fv = f.evaluate(grid.theta)
    lhs = float(np.sum(grid.kappa * fs * fs * w))

    def rhs(c):
        return float(np.sum((Lf + 0.5 * (fv - c)) ** 2 / grid.h_gamma * w))

    if C is None:
        scale = max(1.0, float(np.max(np.abs(fv))), float(np.max(np.abs(Lf))))
        res = optimize.minimize_scalar(rhs, bracket=(-scale, scale), method="golden",
                                       options={"xtol": 1e-12})
        C = float(res.x)
    return DualReport(lhs, rhs(C), float(C))


def dual_gap(body, f, C=None):
    """Signed gap ``rhs - lhs`` of the dual inequality (see :func:`dual_report`)."""
    return dual_report(body, f, C).gap


def ledoux_limit(t):
    """``Phi^{-1}(gamma(t D)) / t`` for the centred disc of radius ``t``.

    Uses the complement ``exp(-t^2/2)`` so large radii do not round to 1.
    """
    return -std_normal_inv(math.exp(-0.5 * t * t)) / t


def isoperimetric_and_ledoux(body, radii=LEDOUX_RADII):
    """Isoperimetric slack, ``F'(0)`` and disc-limit estimates.

    Returns
    -------
    iso_slack : float
        ``gamma_dK(dK) - I(gamma(K))``.
    F_prime0 : float
        ``(Phi^{-1})'(gamma(K)) * gamma_dK(dK)``.
    limit_estimate : tuple of float
        ``Phi^{-1}(gamma(tD)) / t`` at each radius.
    """
    measure, mass = gaussian_functionals(body)
    profile, _ = gaussian_profile(measure)
    return mass - profile, mass / profile, tuple(ledoux_limit(t) for t in radii)


def ledoux_limit_quadrature(t, grid=512):
    """Same as :func:`ledoux_limit` but from boundary quadrature of the disc."""
    return std_normal_inv(gaussian_functionals(disc(t, grid=grid))[0]) / t
