"""First and second variations of t -> mu(K_t) for h_{K_t} = h_K + t f.

``mu`` is either the standard Gaussian measure or Lebesgue area.  A test
function on the boundary is identified with a function of the normal
angle, which is also the support-function perturbation driving ``K_t``.
"""

from dataclasses import dataclass

import numpy as np

from .body2d import (SupportBody, _pad, boundary_geometry, combine, disc,
                     gaussian_functionals, lebesgue_functionals)
from .exceptions import SchemaError, StepRejectedError
from .gaussfn import gaussian_profile

MODES = ("gaussian", "lebesgue")

__all__ = [
    "BoundaryFunction",
    "VariationReport",
    "boundary_measure",
    "fd_variations",
    "function_from_json",
    "minkowski_second_slack",
    "steiner_fit",
    "variations",
]


@dataclass(frozen=True)
class BoundaryFunction:
    """Trigonometric polynomial ``c0 + sum (cos_k cos k t + sin_k sin k t)``."""

    c0: float = 0.0
    cos: tuple = ()
    sin: tuple = ()

    def __post_init__(self):
        n = max(len(self.cos), len(self.sin))
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "cos", _pad(tuple(float(c) for c in self.cos), n))
        object.__setattr__(self, "sin", _pad(tuple(float(c) for c in self.sin), n))

    @classmethod
    def constant(cls, value=1.0):
        return cls(value)

    @classmethod
    def support_difference(cls, K, L):
        """``h_L - h_K`` as a boundary function on ``K``."""
        n = max(K.degree, L.degree)
        return cls(L.a0 - K.a0,
                   tuple(b - a for a, b in zip(_pad(K.cos, n), _pad(L.cos, n))),
                   tuple(b - a for a, b in zip(_pad(K.sin, n), _pad(L.sin, n))))

    @property
    def is_constant(self):
        return not any(self.cos) and not any(self.sin)

    def scaled(self, alpha):
        return BoundaryFunction(alpha * self.c0, tuple(alpha * c for c in self.cos),
                                tuple(alpha * s for s in self.sin))

    def shifted(self, z):
        return BoundaryFunction(self.c0 + z, self.cos, self.sin)

    def evaluate(self, theta, deriv=0):
        return SupportBody(self.c0, self.cos, self.sin).support(theta, deriv)

    def on_grid(self, grid):
        """Values ``f`` and arclength derivative ``df/ds = f'(theta) kappa``."""
        f = self.evaluate(grid.theta)
        return f, self.evaluate(grid.theta, 1) * grid.kappa


def function_from_json(obj, path="f"):
    """Parse ``{"c0": .., "cos": [..], "sin": [..]}`` (``type`` optional)."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    if obj.get("type", "fourier") != "fourier":
        raise SchemaError(f"{path}.type: expected 'fourier', got {obj['type']!r}")
    c0 = obj.get("c0", 0.0)
    if isinstance(c0, bool) or not isinstance(c0, (int, float)):
        raise SchemaError(f"{path}.c0: expected a number, got {c0!r}")
    lists = {}
    for key in ("cos", "sin"):
        val = obj.get(key, [])
        if not isinstance(val, list) or any(
                isinstance(x, bool) or not isinstance(x, (int, float)) for x in val):
            raise SchemaError(f"{path}.{key}: expected a list of numbers")
        lists[key] = val
    return BoundaryFunction(c0, lists["cos"], lists["sin"])


def boundary_measure(grid, mode):
    """Boundary weights of ``mu_dK`` and the weighted mean curvature ``H_mu``."""
    if mode == "gaussian":
        return grid.gauss_weights, grid.h_gamma
    if mode == "lebesgue":
        return grid.weights, grid.kappa
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def bulk_measure(body, mode):
    if mode == "gaussian":
        return gaussian_functionals(body)[0]
    if mode == "lebesgue":
        return lebesgue_functionals(body)[0]
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class VariationReport:
    delta0: float
    delta1: float
    delta2: float
    mode: str
    grid_size: int


def variations(body, f, mode="gaussian"):
    """Boundary-integral formulas for the 0th, 1st and 2nd variation.

    ``delta1 = int f dmu_dK`` and
    ``delta2 = int H_mu f^2 dmu_dK - int (df/ds)^2 / kappa dmu_dK``.
    """
    grid = boundary_geometry(body)
    w, H = boundary_measure(grid, mode)
    fv, fs = f.on_grid(grid)
    delta1 = float(np.sum(fv * w))
    delta2 = float(np.sum(H * fv * fv * w) - np.sum(fs * fs * grid.radius * w))
    return VariationReport(bulk_measure(body, mode), delta1, delta2, mode, grid.size)


def max_admissible_step(body, f, threshold=1e-6):
    """Largest ``s`` with ``h + t f`` convex (on the grid) for all ``|t| <= s``."""
    theta = body.theta()
    rho = body.radius_of_curvature(theta)
    g = np.abs(f.evaluate(theta) + f.evaluate(theta, 2))
    room = rho - threshold
    with np.errstate(divide="ignore"):
        steps = np.where(g > 0, room / g, np.inf)
    return float(max(steps.min(), 0.0))


def fd_variations(body, f, mode="gaussian", h_step=1e-3):
    """Central differences of ``t -> mu(K_t)`` with one Richardson level.

    Uses steps ``h_step`` and ``h_step / 2``; both first and second central
    differences are O(h^2) so the extrapolation is ``(4 D(h/2) - D(h)) / 3``.

    Raises
    ------
    StepRejectedError
        If ``h + t f`` leaves the convex class for some ``|t| <= 2 h_step``.
    """
    s_max = max_admissible_step(body, f)
    if 2.0 * h_step > s_max:
        raise StepRejectedError(
            f"h_step={h_step:g} too large; perturbed bodies must stay convex "
            f"for |t| <= 2 h_step (largest admissible h_step {s_max / 2:.3g})",
            s_max / 2)

    def mu(t):
        return bulk_measure(body.perturb(f, t), mode)

    m0 = mu(0.0)
    d1, d2 = [], []
    for h in (h_step, h_step / 2):
        mp, mm = mu(h), mu(-h)
        d1.append((mp - mm) / (2 * h))
        d2.append((mp - 2 * m0 + mm) / (h * h))
    return (4 * d1[1] - d1[0]) / 3, (4 * d2[1] - d2[0]) / 3


def minkowski_second_slack(body):
    """``L^2 / (2A) - int kappa ds``; nonnegative with equality for discs."""
    grid = boundary_geometry(body)
    area, perimeter = lebesgue_functionals(body)
    return 0.5 * perimeter ** 2 / area - float(np.sum(grid.kappa * grid.weights))


STEINER_NODES = (0.0, 0.25, 0.5, 0.75, 1.0)


def steiner_fit(body, nodes=STEINER_NODES):
    """Quadratic least-squares fit of ``t -> area(K + tD)``.

    Returns
    -------
    area, perimeter, c2, residual : float
        Fitted coefficients of ``1, t, t^2`` and the largest fit deviation.
    """
    unit = disc(1.0, grid=body.grid)
    t = np.asarray(nodes, dtype=float)
    areas = np.array([lebesgue_functionals(combine(1.0, body, s, unit))[0]
                      for s in t])
    c2, c1, c0 = np.polyfit(t, areas, 2)
    residual = float(np.max(np.abs(np.polyval([c2, c1, c0], t) - areas)))
    return float(c0), float(c1), float(c2), residual


def gaussian_minkowski_slack(body):
    """``(log I)'(delta0) delta1^2 - delta2`` for f = 1 (Gaussian mode)."""
    rep = variations(body, BoundaryFunction.constant(1.0), "gaussian")
    return gaussian_profile(rep.delta0)[1] * rep.delta1 ** 2 - rep.delta2
