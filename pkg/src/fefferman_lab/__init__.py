"""Exact computations for projective structures, their Patterson-Walker metrics,
conformal spin and tractor calculus, and the Kostant codifferential model."""

__version__ = "0.1.0"
