"""Concavity tests for profile-transformed Minkowski interpolations.

``F(t) = Phi^{-1}(gamma((1 - t) K + t L))`` is concave for convex K, L.
Concavity is judged from second differences on a uniform t-grid.  The
conditioned half-line measure gives the standard counterexample for
general CD(1, inf) measures and is evaluated in 1D closed form.
"""

from dataclasses import dataclass

import numpy as np

from .body2d import HalfPlane, combine, gaussian_functionals
from .gaussfn import gaussian_profile, std_normal, std_normal_inv
from .inequalities import poincare_report
from .variations import BoundaryFunction

DEFAULT_POINTS = 65
CONCAVITY_TOL = 1e-8
VIOLATION_TOL = 1e-6

__all__ = [
    "ConcavityProfile",
    "cd1_counterexample",
    "conditioned_profile",
    "halfline_pair",
    "ehrhard_concavity",
    "predicted_second_derivative",
    "transform_concavity",
]


@dataclass(frozen=True)
class ConcavityProfile:
    t: np.ndarray
    values: np.ndarray
    second_diffs: np.ndarray
    max_second_diff: float
    argmax: int

    @classmethod
    def from_values(cls, t, values):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.size < 3 or np.any(np.diff(t) <= 0):
            raise ValueError("need at least 3 strictly increasing grid points")
        d = values[:-2] - 2.0 * values[1:-1] + values[2:]
        j = int(np.argmax(d))
        return cls(t, values, d, float(d[j]), j)

    def is_concave(self, tol=CONCAVITY_TOL):
        return self.max_second_diff <= tol


def _interpolate(K, L, t):
    # combine() rejects a + b = 0 only, so the endpoints need no special case
    return combine(1.0 - t, K, t, L)


def ehrhard_concavity(K, L, m=DEFAULT_POINTS):
    """Profile of ``Phi^{-1}(gamma((1 - t) K + t L))`` on ``linspace(0, 1, m)``.

    ``K`` and ``L`` are both SupportBody instances or both parallel
    HalfPlane instances.
    """
    t = np.linspace(0.0, 1.0, m)
    measures = [gaussian_functionals(_interpolate(K, L, s))[0] for s in t]
    return ConcavityProfile.from_values(t, std_normal_inv(np.array(measures)))


def transform_concavity(K, L, transform, m=DEFAULT_POINTS):
    """Same as :func:`ehrhard_concavity` with ``Phi^{-1}`` replaced by ``transform``."""
    t = np.linspace(0.0, 1.0, m)
    values = [transform(gaussian_functionals(_interpolate(K, L, s))[0]) for s in t]
    return ConcavityProfile.from_values(t, values)


def predicted_second_derivative(K, L, t0):
    """``F''(t0)`` reconstructed from the Poincare gap at ``K_{t0}``.

    With ``f = h_L - h_K`` the second variation gives
    ``F''(t0) = -gap / I(gamma(K_{t0}))``.
    """
    body = _interpolate(K, L, t0)
    rep = poincare_report(body, BoundaryFunction.support_difference(K, L))
    return -rep.gap / gaussian_profile(rep.measure)[0]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


def _normal_mass_between(a, b):
    """``Phi(b) - Phi(a)`` for ``a <= b`` without cancellation (40-point GL)."""
    a = np.asarray(a, dtype=float)
    half = 0.5 * (b - a)
    x = (a + half)[..., None] + half[..., None] * _GL_NODES
    dens, _ = std_normal(x)
    return half * np.sum(dens * _GL_WEIGHTS, axis=-1)


def conditioned_profile(t, b):
    """``Phi^{-1}(Phi(t) / Phi(b))`` for ``t < b``.

    The Gaussian conditioned on ``(-inf, b]`` assigns ``Phi(t)/Phi(b)`` to
    ``(-inf, t]``; near ``b`` the upper tail ``(Phi(b) - Phi(t)) / Phi(b)``
    is used so the blow-up is resolved.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t >= b):
        raise ValueError("conditioned profile needs t < b")
    _, cb = std_normal(b)
    ratio = np.asarray(std_normal(t)[1]) / cb
    tail = _normal_mass_between(t, np.full(t.shape, float(b))) / cb
    lower = ratio <= 0.5
    out = np.empty(t.shape)
    if lower.any():
        out[lower] = std_normal_inv(ratio[lower])
    if (~lower).any():
        out[~lower] = -np.asarray(std_normal_inv(tail[~lower]))
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class CounterexampleReport:
    profile: ConcavityProfile
    violated: bool
    halfline_profile: ConcavityProfile
    halfline_violated: bool
    blow_up: bool
    """The profile exceeds 6 before the end of the grid."""


def cd1_counterexample(b=0.0, m=DEFAULT_POINTS, eps=1e-10, threshold=VIOLATION_TOL):
    """Concavity test of ``t -> Phi^{-1}(Phi(t)/Phi(b))`` on ``[b - 2, b - eps]``.

    Also evaluates ``s -> Phi^{-1}(mu(K + s[-1, 1]))`` for the half-line
    ``K = (-inf, b - 2]``, which is the same function of ``b - 2 + s``.
    ``violated`` is true when some second difference exceeds ``threshold``.
    """
    t = np.linspace(b - 2.0, b - eps, m)
    profile = ConcavityProfile.from_values(t, conditioned_profile(t, b))
    a = b - 2.0
    s = np.linspace(0.0, b - a - eps, m)
    halfline = ConcavityProfile.from_values(s, conditioned_profile(a + s, b))
    return CounterexampleReport(
        profile, profile.max_second_diff > threshold,
        halfline, halfline.max_second_diff > threshold,
        bool(np.any(profile.values > 6.0)))


def halfline_pair(a, c):
    """Parallel half-lines ``(-inf, a]`` and ``(-inf, c]`` as half-planes."""
    return HalfPlane(a, 0.0), HalfPlane(c, 0.0)
