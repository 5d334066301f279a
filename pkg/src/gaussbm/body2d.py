"""Planar convex bodies given by truncated Fourier support functions.

A body is stored as ``h(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)``.
The boundary is parametrized by the outer-normal angle,
``x(theta) = h nu + h' tau`` with ``nu = (cos, sin)`` and ``tau = (-sin, cos)``;
``h + h''`` is the radius of curvature and ``ds = (h + h'') dtheta``.
All boundary integrals use the uniform-theta trapezoid rule, which is
spectrally accurate for these smooth periodic integrands.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .exceptions import NonConvexBodyError, SchemaError
from .gaussfn import std_normal

DEFAULT_GRID = 512
MIN_RADIUS = 1e-6

__all__ = [
    "BoundaryGrid",
    "ConvexityDiagnostics",
    "HalfPlane",
    "SupportBody",
    "boundary_geometry",
    "body_from_json",
    "body_to_json",
    "combine",
    "disc",
    "gaussian_functionals",
    "lebesgue_functionals",
    "validate",
]


def _as_tuple(seq):
    return tuple(float(c) for c in seq)


def _pad(coeffs, n):
    return tuple(coeffs) + (0.0,) * (n - len(coeffs))


@dataclass(frozen=True)
class SupportBody:
    """Convex body with support function ``a0 + sum a_k cos k t + b_k sin k t``.

    ``cos[k-1]`` and ``sin[k-1]`` hold the degree-``k`` coefficients; the
    degree-1 pair is a translation by ``(cos[0], sin[0])``.
    """

    a0: float
    cos: tuple = ()
    sin: tuple = ()
    grid: int = DEFAULT_GRID

    def __post_init__(self):
        n = max(len(self.cos), len(self.sin))
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", _pad(_as_tuple(self.cos), n))
        object.__setattr__(self, "sin", _pad(_as_tuple(self.sin), n))
        if int(self.grid) < 8:
            raise ValueError(f"grid must be at least 8, got {self.grid}")
        object.__setattr__(self, "grid", int(self.grid))

    @property
    def degree(self):
        return len(self.cos)

    def theta(self):
        return 2.0 * np.pi * np.arange(self.grid) / self.grid

    def support(self, theta, deriv=0):
        """``d^deriv h / dtheta^deriv`` at ``theta``."""
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.a0 if deriv == 0 else 0.0)
        for k, (a, b) in enumerate(zip(self.cos, self.sin), start=1):
            if a == 0.0 and b == 0.0:
                continue
            c, s = np.cos(k * theta), np.sin(k * theta)
            # d/dtheta cycles (cos, sin) -> (-sin, cos)
            r = deriv % 4
            if r == 0:
                term = a * c + b * s
            elif r == 1:
                term = -a * s + b * c
            elif r == 2:
                term = -a * c - b * s
            else:
                term = a * s - b * c
            out = out + k ** deriv * term
        return out

    def radius_of_curvature(self, theta):
        return self.support(theta) + self.support(theta, 2)

    def boundary_point(self, theta):
        theta = np.asarray(theta, dtype=float)
        h, dh = self.support(theta), self.support(theta, 1)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([h * c - dh * s, h * s + dh * c], axis=-1)

    def perturb(self, f, t):
        """Body with support function ``h + t f`` (``f`` a BoundaryFunction)."""
        n = max(self.degree, len(f.cos))
        return SupportBody(
            self.a0 + t * f.c0,
            tuple(a + t * b for a, b in zip(_pad(self.cos, n), _pad(f.cos, n))),
            tuple(a + t * b for a, b in zip(_pad(self.sin, n), _pad(f.sin, n))),
            self.grid,
        )

    def rotate(self, angle):
        """Rotation about the origin by ``angle`` (h(theta - angle))."""
        ks = np.arange(1, self.degree + 1)
        c, s = np.cos(ks * angle), np.sin(ks * angle)
        a, b = np.array(self.cos), np.array(self.sin)
        return SupportBody(self.a0, a * c - b * s, a * s + b * c, self.grid)

    def with_grid(self, grid):
        return SupportBody(self.a0, self.cos, self.sin, grid)

    @classmethod
    def from_function(cls, func, degree, grid=DEFAULT_GRID, samples=4096):
        """Truncated Fourier series of a periodic support function ``func``."""
        theta = 2.0 * np.pi * np.arange(samples) / samples
        coef = np.fft.rfft(func(theta)) / samples
        a = 2.0 * coef.real[1:degree + 1]
        b = -2.0 * coef.imag[1:degree + 1]
        return cls(coef.real[0], a, b, grid)


def disc(r, center=(0.0, 0.0), grid=DEFAULT_GRID):
    """Euclidean disc of radius ``r`` centred at ``center``."""
    return SupportBody(r, (center[0],), (center[1],), grid)


@dataclass(frozen=True)
class HalfPlane:
    """Half-plane ``{x : <x, omega> <= t}`` with ``omega = (cos angle, sin angle)``."""

    t: float
    angle: float = 0.0

    @property
    def direction(self):
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    @property
    def h_gamma(self):
        """Constant Gaussian mean curvature of the boundary line."""
        return -self.t


@dataclass(frozen=True)
class ConvexityDiagnostics:
    ok: bool
    min_radius: float
    threshold: float
    bad_ranges: list = field(default_factory=list)


def validate(body, threshold=MIN_RADIUS):
    """Check that ``h + h''`` stays above ``threshold`` on the body's grid.

    Returns
    -------
    ConvexityDiagnostics
        ``bad_ranges`` lists ``(theta_start, theta_end)`` runs of grid nodes
        where the radius of curvature is below the threshold.
    """
    theta = body.theta()
    rho = body.radius_of_curvature(theta)
    bad = rho < threshold
    ranges = []
    if bad.any():
        idx = np.flatnonzero(bad)
        start = prev = idx[0]
        for i in idx[1:]:
            if i != prev + 1:
                ranges.append((float(theta[start]), float(theta[prev])))
                start = i
            prev = i
        ranges.append((float(theta[start]), float(theta[prev])))
    return ConvexityDiagnostics(not bad.any(), float(rho.min()), threshold, ranges)


def _require_valid(body, threshold=MIN_RADIUS):
    diag = validate(body, threshold)
    if not diag.ok:
        raise NonConvexBodyError(
            f"support function is not strictly convex: min(h + h'') = "
            f"{diag.min_radius:.6g} < {threshold:g}", diag.min_radius)
    return diag


@dataclass(frozen=True)
class BoundaryGrid:
    """Sampled boundary geometry on a uniform normal-angle grid."""

    theta: np.ndarray
    h: np.ndarray
    dh: np.ndarray
    radius: np.ndarray          # h + h'' = 1 / kappa
    dradius: np.ndarray         # d(h + h'')/dtheta
    points: np.ndarray          # (M, 2)
    normals: np.ndarray         # (M, 2)
    tangents: np.ndarray        # (M, 2), counterclockwise
    kappa: np.ndarray
    weights: np.ndarray         # arclength weights ds
    gauss_density: np.ndarray   # Psi_gamma at the boundary points
    h_gamma: np.ndarray         # kappa - <x, nu>

    @property
    def size(self):
        return self.theta.size

    @property
    def gauss_weights(self):
        """Quadrature weights of the Gaussian boundary measure."""
        return self.weights * self.gauss_density


def boundary_geometry(body):
    """Sample points, normals, curvature and Gaussian data of ``body``.

    Raises
    ------
    NonConvexBodyError
        If the body fails :func:`validate`.
    """
    _require_valid(body)
    theta = body.theta()
    h = body.support(theta)
    dh = body.support(theta, 1)
    rho = h + body.support(theta, 2)
    drho = dh + body.support(theta, 3)
    c, s = np.cos(theta), np.sin(theta)
    normals = np.stack([c, s], axis=-1)
    tangents = np.stack([-s, c], axis=-1)
    points = h[:, None] * normals + dh[:, None] * tangents
    kappa = 1.0 / rho
    weights = rho * (2.0 * np.pi / theta.size)
    density = np.exp(-0.5 * np.einsum("ij,ij->i", points, points)) / (2.0 * np.pi)
    return BoundaryGrid(theta, h, dh, rho, drho, points, normals, tangents,
                        kappa, weights, density, kappa - h)


def gaussian_functionals(body):
    """Gaussian measure of ``body`` and Gaussian length of its boundary.

    The measure is the Green's-theorem line integral of
    ``Phi(x1) phi(x2) dx2`` over the positively oriented boundary; along the
    support parametrization ``dx2 = (h + h'') cos(theta) dtheta``.
    Half-planes are evaluated in closed form.
    """
    if isinstance(body, HalfPlane):
        dens, cdf = std_normal(body.t)
        return cdf, dens
    g = boundary_geometry(body)
    dens2, _ = std_normal(g.points[:, 1])
    _, cdf1 = std_normal(g.points[:, 0])
    dx2 = g.weights * g.normals[:, 0]
    measure = float(np.sum(cdf1 * dens2 * dx2))
    boundary_mass = float(np.sum(g.gauss_weights))
    return measure, boundary_mass


def lebesgue_functionals(body):
    """Area (via the line integral of ``x1 dx2``) and perimeter."""
    g = boundary_geometry(body)
    area = float(np.sum(g.points[:, 0] * g.weights * g.normals[:, 0]))
    return area, float(np.sum(g.weights))


def combine(a, K, b, L):
    """Minkowski combination ``a K + b L`` for ``a, b >= 0``.

    Parallel half-planes (same angle) combine by offsets.
    """
    if a < 0 or b < 0 or a + b <= 0:
        raise ValueError(f"need a, b >= 0 with a + b > 0, got a={a}, b={b}")
    if isinstance(K, HalfPlane) or isinstance(L, HalfPlane):
        if not (isinstance(K, HalfPlane) and isinstance(L, HalfPlane)):
            raise TypeError("cannot combine a half-plane with a bounded body")
        if K.angle != L.angle:
            raise ValueError("only parallel half-planes combine to a half-plane")
        return HalfPlane(a * K.t + b * L.t, K.angle)
    n = max(K.degree, L.degree)
    return SupportBody(
        a * K.a0 + b * L.a0,
        tuple(a * x + b * y for x, y in zip(_pad(K.cos, n), _pad(L.cos, n))),
        tuple(a * x + b * y for x, y in zip(_pad(K.sin, n), _pad(L.sin, n))),
        max(K.grid, L.grid),
    )


def _number(obj, key, path):
    if key not in obj:
        raise SchemaError(f"{path}.{key}: required key missing")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError(f"{path}.{key}: expected a number, got {val!r}")
    return float(val)


def _number_list(obj, key, path):
    val = obj.get(key, [])
    if not isinstance(val, list) or any(
            isinstance(x, bool) or not isinstance(x, (int, float)) for x in val):
        raise SchemaError(f"{path}.{key}: expected a list of numbers")
    return [float(x) for x in val]


def body_from_json(obj, path="body"):
    """Parse the body JSON schema (``fourier``, ``halfplane`` or ``disc``)."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    kind = obj.get("type")
    grid = obj.get("grid", DEFAULT_GRID)
    if isinstance(grid, bool) or not isinstance(grid, int) or grid < 8:
        raise SchemaError(f"{path}.grid: expected an integer >= 8, got {grid!r}")
    if kind == "fourier":
        return SupportBody(_number(obj, "a0", path), _number_list(obj, "cos", path),
                           _number_list(obj, "sin", path), grid)
    if kind == "halfplane":
        return HalfPlane(_number(obj, "t", path), float(obj.get("angle", 0.0)))
    if kind == "disc":
        center = obj.get("center", [0.0, 0.0])
        if (not isinstance(center, list) or len(center) != 2
                or not all(isinstance(c, (int, float)) for c in center)):
            raise SchemaError(f"{path}.center: expected [cx, cy]")
        return disc(_number(obj, "r", path), center, grid)
    raise SchemaError(f"{path}.type: expected 'fourier', 'halfplane' or 'disc', "
                      f"got {kind!r}")


def body_to_json(body):
    if isinstance(body, HalfPlane):
        return {"type": "halfplane", "t": body.t, "angle": body.angle}
    return {"type": "fourier", "a0": body.a0, "cos": list(body.cos),
            "sin": list(body.sin), "grid": body.grid}
