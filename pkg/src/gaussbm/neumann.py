"""Weighted Neumann problem on planar convex bodies and the Reilly identities.

For ``mu = exp(-V) dx`` with weighted Laplacian ``L = Delta - <grad V, grad>``
we solve ``L u = c`` in K, ``u_nu = f`` on the boundary, with
``c = int f dmu_dK / mu(K)``, by a Galerkin method in a tensor Legendre
basis (total degree <= d).  Interior integrals use a polar fan from a
deep interior point (Gauss-Legendre in the radius, uniform in the normal
angle); boundary integrals reuse the support-function grid.  Every trace
(``u_nu``, ``u_nunu``, tangential derivatives) comes from exact
differentiation of the polynomial.

Notation on the boundary: ``u_tau = <grad u, tau>`` is the tangential
gradient, ``d(u_nu)/ds = <Hess u tau, nu> + kappa u_tau``.
"""

from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial import legendre as leg
from numpy.polynomial import polynomial as poly
from scipy import integrate, optimize

from .body2d import boundary_geometry
from .exceptions import RankDeficiencyError, SchemaError
from .gaussfn import gaussian_profile, std_normal

__all__ = [
    "BivariatePolynomial",
    "NeumannSolution",
    "WeightedDomain",
    "boundary_traces",
    "concave_chain_check",
    "cs_pointwise",
    "d2n_halfline",
    "d2n_halfline_ode",
    "d2n_probe",
    "gamma2_identity",
    "gaussian_potential",
    "lebesgue_potential",
    "polynomial_from_json",
    "reilly_residual",
    "solve_neumann",
]

_FAMILIES = {
    "power": (poly.polyval2d, poly.polyder),
    "legendre": (leg.legval2d, leg.legder),
}


class BivariatePolynomial:
    """``sum_ij C[i, j] B_i(xi) B_j(eta)`` with ``(xi, eta) = (x - center) / scale``.

    ``B`` is the monomial or Legendre family.
    """

    def __init__(self, coef, family="power", center=(0.0, 0.0), scale=(1.0, 1.0)):
        if family not in _FAMILIES:
            raise ValueError(f"unknown polynomial family {family!r}")
        self.coef = np.atleast_2d(np.asarray(coef, dtype=float))
        self.family = family
        self.center = np.asarray(center, dtype=float)
        self.scale = np.asarray(scale, dtype=float)

    def __repr__(self):
        return (f"BivariatePolynomial(degree={self.degree}, family={self.family!r})")

    @classmethod
    def from_monomials(cls, terms):
        """Build from ``{(i, j): coefficient}`` of ``x^i y^j``."""
        if not terms:
            return cls(np.zeros((1, 1)))
        p = max(i for i, _ in terms) + 1
        q = max(j for _, j in terms) + 1
        C = np.zeros((p, q))
        for (i, j), v in terms.items():
            C[i, j] += v
        return cls(C)

    @property
    def degree(self):
        nz = np.argwhere(self.coef != 0)
        return int(nz.sum(axis=1).max()) if nz.size else 0

    @property
    def is_zero(self):
        return not np.any(self.coef)

    def _local(self, pts):
        pts = np.asarray(pts, dtype=float)
        return ((pts[..., 0] - self.center[0]) / self.scale[0],
                (pts[..., 1] - self.center[1]) / self.scale[1])

    def _eval(self, C, pts):
        val, _ = _FAMILIES[self.family]
        xi, eta = self._local(pts)
        return val(xi, eta, C)

    def _der(self, C, axis):
        _, der = _FAMILIES[self.family]
        if C.shape[axis] == 1:
            return np.zeros_like(C)
        return der(C, 1, 1.0 / self.scale[axis], axis=axis)

    def __call__(self, pts):
        return self._eval(self.coef, pts)

    def grad(self, pts):
        return np.stack([self._eval(self._der(self.coef, 0), pts),
                         self._eval(self._der(self.coef, 1), pts)], axis=-1)

    def hess(self, pts):
        cx = self._der(self.coef, 0)
        cy = self._der(self.coef, 1)
        hxx = self._eval(self._der(cx, 0), pts)
        hxy = self._eval(self._der(cx, 1), pts)
        hyy = self._eval(self._der(cy, 1), pts)
        return np.stack([np.stack([hxx, hxy], -1), np.stack([hxy, hyy], -1)], -2)


def gaussian_potential():
    """``|x|^2 / 2 + log(2 pi)``, so ``exp(-V)`` is the standard Gaussian density."""
    return BivariatePolynomial.from_monomials(
        {(0, 0): math.log(2.0 * math.pi), (2, 0): 0.5, (0, 2): 0.5})


def lebesgue_potential():
    return BivariatePolynomial(np.zeros((1, 1)))


def _chebyshev_center(grid):
    """Point ``p`` maximizing ``min_j (h_j - <p, nu_j>)``, and that depth."""
    nu = grid.normals
    A = np.hstack([nu, np.ones((nu.shape[0], 1))])
    res = optimize.linprog(c=[0.0, 0.0, -1.0], A_ub=A, b_ub=grid.h,
                           bounds=[(None, None)] * 3, method="highs")
    if not res.success:
        raise RuntimeError(f"interior point search failed: {res.message}")
    return res.x[:2], res.x[2]


class WeightedDomain:
    """Convex body with the measure ``exp(-V) dx`` and interior/boundary quadrature.

    Parameters
    ----------
    body : SupportBody
    potential : BivariatePolynomial, 'gaussian' or 'lebesgue'
    n_radial, n_angular : int
        Gauss-Legendre radial nodes and uniform angular nodes of the fan.
    """

    def __init__(self, body, potential="gaussian", n_radial=64, n_angular=256):
        if isinstance(potential, str):
            potential = {"gaussian": gaussian_potential,
                         "lebesgue": lebesgue_potential}[potential]()
        self.body = body
        self.potential = potential
        self.boundary = boundary_geometry(body)
        self.center, self.depth = _chebyshev_center(self.boundary)
        if self.depth <= 0:
            raise ValueError("body has empty interior")

        # polar fan p + r (x(theta) - p); dA = r <x - p, nu> (h + h'') dr dtheta
        theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
        r, wr = leg.leggauss(n_radial)
        r, wr = 0.5 * (r + 1.0), 0.5 * wr
        xb = body.boundary_point(theta)
        nu = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        height = body.support(theta) - nu @ self.center
        jac = height * body.radius_of_curvature(theta) * (2.0 * np.pi / n_angular)
        rel = xb - self.center
        self.points = (self.center + r[:, None, None] * rel[None, :, :]).reshape(-1, 2)
        self.area_weights = (wr[:, None] * r[:, None] * jac[None, :]).ravel()
        self.density = np.exp(-potential(self.points))
        self.weights = self.area_weights * self.density

        g = self.boundary
        self.boundary_density = np.exp(-potential(g.points))
        self.boundary_weights = g.weights * self.boundary_density
        grad_v = potential.grad(g.points)
        self.h_mu = g.kappa - np.einsum("ij,ij->i", grad_v, g.normals)

    @property
    def measure(self):
        return float(np.sum(self.weights))

    @property
    def is_lebesgue(self):
        return self.potential.is_zero

    def weighted_laplacian(self, u, pts):
        H = u.hess(pts)
        return (H[..., 0, 0] + H[..., 1, 1]
                - np.einsum("...i,...i->...", self.potential.grad(pts), u.grad(pts)))

    def gamma2(self, u, pts=None):
        """Pointwise ``<Hess V grad u, grad u> + ||Hess u||^2``."""
        pts = self.points if pts is None else pts
        gu = u.grad(pts)
        Hu = u.hess(pts)
        HV = self.potential.hess(pts)
        return (np.einsum("...i,...ij,...j->...", gu, HV, gu)
                + np.einsum("...ij,...ij->...", Hu, Hu))


@dataclass(frozen=True)
class BoundaryTraces:
    u: np.ndarray
    u_nu: np.ndarray
    u_nunu: np.ndarray
    u_tau: np.ndarray          # tangential gradient of u
    u_nu_s: np.ndarray         # tangential derivative of u_nu


def boundary_traces(domain, u):
    g = domain.boundary
    pts = g.points
    gu = u.grad(pts)
    Hu = u.hess(pts)
    nu, tau = g.normals, g.tangents
    u_tau = np.einsum("ij,ij->i", gu, tau)
    u_nutau = np.einsum("ij,ijk,ik->i", nu, Hu, tau)
    return BoundaryTraces(
        u(pts),
        np.einsum("ij,ij->i", gu, nu),
        np.einsum("ij,ijk,ik->i", nu, Hu, nu),
        u_tau,
        u_nutau + g.kappa * u_tau,
    )


@dataclass(frozen=True)
class NeumannSolution:
    u: BivariatePolynomial
    f: object
    c: float
    degree: int
    interior_residual: float
    """Weighted RMS of ``L u - c``."""
    flux_residual: float
    """Largest ``|u_nu - f|`` on the boundary grid."""
    mean: float
    """``int u dmu`` after normalization (zero up to roundoff)."""
    traces: BoundaryTraces
    flagged: bool


def _legendre_1d(x, d):
    V = leg.legvander(x, d)
    D = np.zeros((d + 1, d + 1))
    D[:d, :] = leg.legder(np.eye(d + 1), axis=0)
    return V, V @ D, V @ D @ D


class _TensorBasis:
    """Tensor Legendre basis of total degree <= d on a bounding box."""

    def __init__(self, degree, center, scale):
        self.degree = degree
        self.center = np.asarray(center, dtype=float)
        self.scale = np.asarray(scale, dtype=float)
        self.index = [(i, j) for i in range(degree + 1)
                      for j in range(degree + 1 - i)]

    def __len__(self):
        return len(self.index)

    def evaluate(self, pts, order=1):
        xi = (pts[:, 0] - self.center[0]) / self.scale[0]
        eta = (pts[:, 1] - self.center[1]) / self.scale[1]
        X = _legendre_1d(xi, self.degree)
        Y = _legendre_1d(eta, self.degree)
        I = np.array([i for i, _ in self.index])
        J = np.array([j for _, j in self.index])
        sx, sy = self.scale
        out = {"val": X[0][:, I] * Y[0][:, J]}
        if order >= 1:
            out["dx"] = X[1][:, I] * Y[0][:, J] / sx
            out["dy"] = X[0][:, I] * Y[1][:, J] / sy
        return out

    def polynomial(self, coeffs):
        C = np.zeros((self.degree + 1, self.degree + 1))
        for (i, j), v in zip(self.index, coeffs):
            C[i, j] = v
        return BivariatePolynomial(C, "legendre", self.center, self.scale)


FLUX_FLAG = 1e-6


def solve_neumann(domain, f, degree=12):
    """Galerkin solution of ``L u = c``, ``u_nu = f`` with ``int u dmu = 0``.

    The weak form ``int <grad u, grad v> dmu = int f v dmu_dK - c int v dmu``
    for all basis ``v`` is stacked with the zero-mean row and solved by
    least squares.

    Raises
    ------
    RankDeficiencyError
        If the stacked system does not have full column rank.
    """
    g = domain.boundary
    lo, hi = g.points.min(axis=0), g.points.max(axis=0)
    basis = _TensorBasis(degree, 0.5 * (lo + hi), 0.5 * (hi - lo) * 1.001)
    fv, _ = f.on_grid(g)
    flux = float(np.sum(fv * domain.boundary_weights))
    mu_K = domain.measure
    c = flux / mu_K

    Bi = basis.evaluate(domain.points)
    Bb = basis.evaluate(g.points, order=0)["val"]
    W = domain.weights
    A = (Bi["dx"].T * W) @ Bi["dx"] + (Bi["dy"].T * W) @ Bi["dy"]
    mean_row = Bi["val"].T @ W
    rhs = Bb.T @ (fv * domain.boundary_weights) - c * mean_row
    scale = np.abs(A).max()
    M = np.vstack([A, scale * mean_row / np.abs(mean_row).max()])
    b = np.concatenate([rhs, [0.0]])
    coeffs, _, rank, _ = np.linalg.lstsq(M, b, rcond=1e-14)
    if rank < len(basis):
        raise RankDeficiencyError(
            f"rank {rank} < basis size {len(basis)} at degree {degree}")
    u = basis.polynomial(coeffs)

    mean = float(np.sum(u(domain.points) * W))
    lu = domain.weighted_laplacian(u, domain.points)
    interior = math.sqrt(float(np.sum((lu - c) ** 2 * W)) / mu_K)
    traces = boundary_traces(domain, u)
    flux_res = float(np.max(np.abs(traces.u_nu - fv)))
    return NeumannSolution(u, f, c, degree, interior, flux_res, mean, traces,
                           flux_res > FLUX_FLAG)


def _d2n_boundary_form(domain, f, traces):
    """``int (f_s u_tau - kappa u_tau^2 + u_nunu f) dmu_dK`` and the kappa term."""
    g = domain.boundary
    fv, fs = f.on_grid(g)
    w = domain.boundary_weights
    curv = float(np.sum(g.kappa * traces.u_tau ** 2 * w))
    total = float(np.sum((fs * traces.u_tau + traces.u_nunu * fv) * w)) - curv
    return total, curv


@dataclass(frozen=True)
class Gamma2Identity:
    lhs: float
    rhs: float
    residual: float
    curvature_term: float
    """``int kappa u_tau^2 dmu_dK``, the tangential curvature contribution."""


def gamma2_identity(domain, solution):
    """Interior ``int Gamma_2(u) dmu`` against its boundary expression.

    Integrating ``sum_i |grad u_i|^2`` by parts with ``L u`` constant gives
    ``int_dK <Hess u nu, grad u> dmu_dK``; splitting ``grad u`` into normal
    and tangential parts yields
    ``int_dK (f_s u_tau + u_nunu f - kappa u_tau^2) dmu_dK``.
    """
    lhs = float(np.sum(domain.gamma2(solution.u) * domain.weights))
    rhs, curv = _d2n_boundary_form(domain, solution.f, solution.traces)
    return Gamma2Identity(lhs, rhs, abs(lhs - rhs) / max(1.0, abs(lhs)), curv)


@dataclass(frozen=True)
class ReillyTerms:
    lhs: float
    hessian: float
    potential: float
    mean_curvature: float
    second_fundamental: float
    cross: float
    residual: float

    @property
    def rhs(self):
        return (self.hessian + self.potential + self.mean_curvature
                + self.second_fundamental + self.cross)


def reilly_residual(domain, u):
    """Every term of the weighted Reilly formula for a polynomial ``u``.

    ``int (Lu)^2 = int ||Hess u||^2 + int <Hess V grad u, grad u>
    + int_dK H_mu u_nu^2 + int_dK kappa u_tau^2 - 2 int_dK (u_nu)_s u_tau``.
    """
    pts, W = domain.points, domain.weights
    Hu = u.hess(pts)
    gu = u.grad(pts)
    HV = domain.potential.hess(pts)
    lhs = float(np.sum(domain.weighted_laplacian(u, pts) ** 2 * W))
    hessian = float(np.sum(np.einsum("...ij,...ij->...", Hu, Hu) * W))
    pot = float(np.sum(np.einsum("...i,...ij,...j->...", gu, HV, gu) * W))
    tr = boundary_traces(domain, u)
    g, wb = domain.boundary, domain.boundary_weights
    mean_curv = float(np.sum(domain.h_mu * tr.u_nu ** 2 * wb))
    second = float(np.sum(g.kappa * tr.u_tau ** 2 * wb))
    cross = -2.0 * float(np.sum(tr.u_nu_s * tr.u_tau * wb))
    total = hessian + pot + mean_curv + second + cross
    return ReillyTerms(lhs, hessian, pot, mean_curv, second, cross,
                       abs(lhs - total) / max(1.0, abs(lhs)))


def cs_pointwise(domain, u):
    """``min(kappa u_tau^2 + (u_nu)_s^2 / kappa - 2 (u_nu)_s u_tau)`` on the grid."""
    tr = boundary_traces(domain, u)
    k = domain.boundary.kappa
    slack = k * tr.u_tau ** 2 + tr.u_nu_s ** 2 / k - 2.0 * tr.u_nu_s * tr.u_tau
    return float(slack.min())


def reilly_cs_slack(domain, u):
    """Slack of the Reilly formula after the pointwise Cauchy-Schwarz step.

    ``int (Lu)^2 - int Gamma_2 - int H_mu u_nu^2 + int (u_nu)_s^2 / kappa``;
    nonnegative for every ``u``.
    """
    t = reilly_residual(domain, u)
    tr = boundary_traces(domain, u)
    g = domain.boundary
    inv = float(np.sum(tr.u_nu_s ** 2 / g.kappa * domain.boundary_weights))
    return t.lhs - t.hessian - t.potential - t.mean_curvature + inv


@dataclass(frozen=True)
class D2NProbe:
    ratio: float | None
    F_conjectured: float
    margin: float | None
    mean_f: float
    zero_mean: bool
    solution: NeumannSolution | None = None


def _conjectured_F(v):
    return 1.0 / v - gaussian_profile(v)[1]


def d2n_probe(domain, f, degree=12, zero_tol=1e-12):
    """Neumann-to-Dirichlet ratio against ``F(v) = 1/v - (log I)'(v)``.

    ``ratio = int_dK (f_s u_tau + u_nunu f - kappa u_tau^2) / (int f)^2``,
    the boundary form of ``int Gamma_2(u)``.  The result is evidence only;
    no verdict is attached.  Zero-mean ``f`` leaves the ratio undefined.
    """
    mean_f = float(np.sum(f.on_grid(domain.boundary)[0] * domain.boundary_weights))
    F = _conjectured_F(domain.measure)
    if abs(mean_f) <= zero_tol:
        return D2NProbe(None, F, None, mean_f, True)
    sol = solve_neumann(domain, f, degree)
    form, _ = _d2n_boundary_form(domain, f, sol.traces)
    ratio = form / mean_f ** 2
    return D2NProbe(ratio, F, ratio - F, mean_f, False, sol)


def d2n_halfline(t):
    """Closed-form probe for ``K = (-inf, t]`` in 1D with ``f = 1``.

    ``u' = c Phi / phi`` with ``c = phi(t) / Phi(t)`` solves ``u'' - x u' = c``,
    ``u'(t) = 1``; the ratio is ``u''(t) / phi(t) = (c + t) / phi(t)``.

    Returns
    -------
    ratio, F_conjectured, margin : float
    """
    dens, cdf = std_normal(t)
    ratio = (dens / cdf + t) / dens
    F = _conjectured_F(cdf)
    return ratio, F, ratio - F


def d2n_halfline_ode(t, x0=-12.0):
    """Dense-integration version of :func:`d2n_halfline`.

    Integrates ``w' = c + x w`` (``w = u'``) forward from ``x0``, where
    errors in the start value decay like ``exp((x^2 - x0^2)/2)``, then
    evaluates ``int (w^2 + w'^2) d gamma`` (the 1D Gamma_2) by quadrature.
    The start value is irrelevant to ~1e-30, so zero is used.

    Returns
    -------
    ratio, F_conjectured, margin, flux : float
        ``flux`` is ``w(t)``, which must come out as 1.
    """
    dens, cdf = std_normal(t)
    c = dens / cdf
    sol = integrate.solve_ivp(lambda x, w: c + x * w, (x0, t), [0.0],
                              method="DOP853", rtol=1e-13, atol=1e-15,
                              dense_output=True)
    w = lambda x: sol.sol(x)[0]
    wp = lambda x: c + x * w(x)
    gamma2, _ = integrate.quad(
        lambda x: (w(x) ** 2 + wp(x) ** 2) * std_normal(x)[0], x0, t,
        epsabs=1e-15, epsrel=1e-13, limit=400)
    # boundary term f^2 phi(t) with f = 1
    ratio = gamma2 / dens ** 2
    F = _conjectured_F(cdf)
    return ratio, F, ratio - F, float(w(t))


@dataclass(frozen=True)
class ChainReport:
    lhs: float
    rhs: float
    slack: float
    zero_mean: bool


def concave_chain_check(domain, f, degree=12, zero_tol=1e-12):
    """``int Gamma_2(u) >= (1/2) (int f)^2 / area`` for Lebesgue measure.

    The left side is taken in its boundary form.  Zero-mean ``f`` is
    flagged (the right side is then 0).
    """
    if not domain.is_lebesgue:
        raise ValueError("the 1/N-concave chain check needs V = 0")
    sol = solve_neumann(domain, f, degree)
    lhs, _ = _d2n_boundary_form(domain, f, sol.traces)
    mean_f = float(np.sum(f.on_grid(domain.boundary)[0] * domain.boundary_weights))
    rhs = 0.5 * mean_f ** 2 / domain.measure
    return ChainReport(lhs, rhs, lhs - rhs, abs(mean_f) <= zero_tol)


def polynomial_from_json(obj, path="u"):
    """Parse ``{"monomials": [[i, j, coef], ...]}``."""
    if not isinstance(obj, dict) or "monomials" not in obj:
        raise SchemaError(f"{path}.monomials: required key missing")
    terms = {}
    for k, item in enumerate(obj["monomials"]):
        if (not isinstance(item, list) or len(item) != 3
                or not all(isinstance(x, int) and x >= 0 for x in item[:2])
                or isinstance(item[2], bool) or not isinstance(item[2], (int, float))):
            raise SchemaError(f"{path}.monomials[{k}]: expected [i, j, coefficient]")
        terms[(item[0], item[1])] = terms.get((item[0], item[1]), 0.0) + float(item[2])
    return BivariatePolynomial.from_monomials(terms)
