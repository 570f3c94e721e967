"""Exact computation with the convex hull of known exponent pairs.

The hull is built from its closed-form vertex sequence with rational
arithmetic; fractional-linear objectives are optimised over it exactly, and
the applications subpackage reproduces the bounds derived that way.
"""

from .beta import BetaBound, BetaEnvelope, dual_pairs, envelope_hull, table3_envelope
from .geometry import Polygon, ProjectiveMap, convex_hull
from .hull import HullH, build_hull, vertex
from .numeric import CertInterval, QuadraticSurd, as_fraction, compare, format_fraction
from .optimizer import (AffineConstraint, FractionalObjective, InfeasibleError, Optimum, PiecewiseBound,
                        maximize, minimize, minimize_univariate, sweep)
from .pairs import A, B, C, BoxedPair, ExponentPair, enumerate_known_pairs
from .polynomial import Poly, RationalFunction, real_roots
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "A", "B", "C", "AffineConstraint", "BetaBound", "BetaEnvelope", "BoxedPair", "CertInterval",
    "ExponentPair", "FractionalObjective", "HullH", "InfeasibleError", "Optimum", "PiecewiseBound",
    "Poly", "Polygon", "ProjectiveMap", "QuadraticSurd", "RationalFunction", "Report",
    "as_fraction", "build_hull", "compare", "convex_hull", "dual_pairs", "enumerate_known_pairs",
    "envelope_hull", "format_fraction", "maximize", "minimize", "minimize_univariate", "real_roots",
    "sweep", "table3_envelope", "vertex",
]
