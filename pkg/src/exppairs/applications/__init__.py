"""Reproductions of the bounds obtained by optimising over the hull."""

from .divisor import DivisorResult, divisor_report, reproduce_divisor_bounds
from .moments import (MomentTable, check_hybrid_moment, check_moment_12_delta, moment_bound_at,
                      moment_near_12, reproduce_moment_table)
from .mu import MuBound, check_mu_three_halves, reproduce_mu_table
from .pythagorean import reproduce_pythagorean, theta
from .zero_density import minimize_uniform_constant, edge_lambda, reproduce_zero_density

__all__ = [
    "DivisorResult", "MomentTable", "MuBound",
    "check_hybrid_moment", "check_moment_12_delta", "check_mu_three_halves",
    "divisor_report", "minimize_uniform_constant", "moment_bound_at", "moment_near_12",
    "edge_lambda", "reproduce_divisor_bounds", "reproduce_moment_table", "reproduce_mu_table",
    "reproduce_pythagorean", "reproduce_zero_density", "theta",
]
