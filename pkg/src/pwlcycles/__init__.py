"""Certified limit-cycle bounds for planar two-zone piecewise linear systems."""

__version__ = "0.1.0"

from .canonical import CanonicalForm, HypothesisReport, PWLSystem, check_hypotheses, to_canonical
from .bound_engine import BoundReport, bound_from_canonical, dispatch_bound

__all__ = [
    "CanonicalForm",
    "HypothesisReport",
    "PWLSystem",
    "BoundReport",
    "check_hypotheses",
    "to_canonical",
    "bound_from_canonical",
    "dispatch_bound",
    "__version__",
]
