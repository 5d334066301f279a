"""Seeded generators of bodies, boundary functions and polynomials.

Each case draws from its own counter-based Philox stream keyed by
``(seed, suite name, case index)``, so a case is reproducible on its own
and independent of how many other cases are generated.
"""

import math
import zlib

import numpy as np

from .body2d import DEFAULT_GRID, SupportBody, boundary_geometry
from .neumann import BivariatePolynomial
from .variations import BoundaryFunction


def case_rng(seed, suite, case):
    ss = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(suite.encode()), case))
    return np.random.Generator(np.random.Philox(ss))


def _convex_coeffs(rng, degree, budget):
    """Coefficients of degrees 2..degree with sum (k^2 - 1)(|a_k| + |b_k|) = budget."""
    k = np.arange(2, degree + 1)
    a = rng.standard_normal(k.size) / k ** 2
    b = rng.standard_normal(k.size) / k ** 2
    weight = np.sum((k ** 2 - 1) * (np.abs(a) + np.abs(b)))
    s = budget / weight if weight > 0 else 0.0
    return a * s, b * s


def random_body(rng, degree=6, a0_range=(0.6, 1.6), translation=0.4,
                roughness=0.7, grid=DEFAULT_GRID):
    """Smooth convex body with ``h + h'' >= (1 - roughness) a0``."""
    a0 = rng.uniform(*a0_range)
    shift = rng.uniform(-translation, translation, size=2)
    a, b = _convex_coeffs(rng, degree, roughness * a0 * rng.uniform(0.2, 1.0))
    return SupportBody(a0, (shift[0], *a), (shift[1], *b), grid)


def random_function(rng, degree=5):
    """Boundary function with coefficients ``N(0, 1) / k^2``."""
    k = np.arange(1, degree + 1)
    return BoundaryFunction(rng.standard_normal(),
                            rng.standard_normal(degree) / k ** 2,
                            rng.standard_normal(degree) / k ** 2)


def zero_mean(f, body, mode="gaussian"):
    """Shift ``f`` by a constant so that its boundary integral vanishes."""
    g = boundary_geometry(body)
    w = g.gauss_weights if mode == "gaussian" else g.weights
    return f.shifted(-float(np.sum(f.evaluate(g.theta) * w)) / float(np.sum(w)))


def mild_body(rng, grid=DEFAULT_GRID):
    """Body with gentle curvature variation, suited to the polynomial solver."""
    return random_body(rng, degree=3, a0_range=(0.8, 1.4), translation=0.3,
                       roughness=0.3, grid=grid)


def mean_convex_body(rng, min_h_gamma=0.1, grid=DEFAULT_GRID, max_tries=100):
    """Small body near the origin with ``H_gamma > min_h_gamma`` everywhere."""
    for _ in range(max_tries):
        body = random_body(rng, degree=4, a0_range=(0.3, 0.85), translation=0.15,
                           roughness=0.6, grid=grid)
        if boundary_geometry(body).h_gamma.min() > min_h_gamma:
            return body
    raise RuntimeError("could not draw a mean-convex body")


def ellipse_like_body(rng, degree=8, grid=DEFAULT_GRID):
    """Truncated ellipse support function, rotated and slightly translated."""
    a = rng.uniform(0.8, 1.3)
    b = a / rng.uniform(1.0, 1.5)
    phi = rng.uniform(0.0, math.pi)
    body = SupportBody.from_function(
        lambda t: np.sqrt((a * np.cos(t - phi)) ** 2 + (b * np.sin(t - phi)) ** 2),
        degree, grid)
    shift = rng.uniform(-0.2, 0.2, size=2)
    cos = list(body.cos)
    sin = list(body.sin)
    cos[0] += shift[0]
    sin[0] += shift[1]
    return SupportBody(body.a0, cos, sin, grid)


def random_polynomial(rng, degree=5):
    """Power-basis polynomial of total degree <= ``degree``, ``N(0,1)/(i+j)!`` coefficients."""
    terms = {(i, j): rng.standard_normal() / math.factorial(i + j)
             for i in range(degree + 1) for j in range(degree + 1 - i)}
    return BivariatePolynomial.from_monomials(terms)
