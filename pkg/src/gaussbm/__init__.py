"""Numerical checks of Gaussian boundary Poincare and Ehrhard-type inequalities
for planar convex bodies."""

__version__ = "0.1.0"
