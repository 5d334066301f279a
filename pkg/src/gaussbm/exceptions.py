"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a scalar function."""


class TransformDivergenceError(ArithmeticError):
    """The inner integral of a profile transform is not finite."""


class NonConvexBodyError(ValueError):
    """Support function whose radius of curvature drops below the floor.

    Attributes
    ----------
    min_radius : float
        Smallest sampled value of h + h''.
    """

    def __init__(self, message, min_radius):
        super().__init__(message)
        self.min_radius = min_radius


class StepRejectedError(ValueError):
    """Finite-difference step too large for the perturbed family to stay convex."""

    def __init__(self, message, max_step):
        super().__init__(message)
        self.max_step = max_step


class HypothesisError(ValueError):
    """A required hypothesis (e.g. gamma(K) >= 1/2) does not hold for the input."""


class MeanConvexityError(ValueError):
    """Body is not strictly Gaussian mean-convex."""

    def __init__(self, message, min_h_gamma):
        super().__init__(message)
        self.min_h_gamma = min_h_gamma


class RankDeficiencyError(ArithmeticError):
    """Polynomial basis is rank deficient on the quadrature grid."""


class SchemaError(ValueError):
    """Malformed JSON input; the message starts with the offending key path."""
