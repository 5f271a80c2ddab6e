"""Exact verification of curved DG-pairs, Chern-Simons forms and L-infinity semiregularity maps."""

from .checks import Check, Report
from .exactlin import Element, GradedSpace, QuotientMap, Subspace
from .curved import CurvedDGAlgebra, CurvedPair, TraceMap

__all__ = ["Check", "Report", "Element", "GradedSpace", "QuotientMap", "Subspace",
           "CurvedDGAlgebra", "CurvedPair", "TraceMap"]
__version__ = "0.1.0"
