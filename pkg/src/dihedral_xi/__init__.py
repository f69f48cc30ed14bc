"""
Dihedral Xi - ribbon obstructions from 3-fold dihedral branched covers

This package builds the cellular chain complex of the irregular dihedral
3-fold cover of a Fox 3-colored knot, computes exact linking numbers of lifted
curves, and evaluates the signature defect Xi together with its ribbon verdict.
"""

__version__ = "1.0.0"

from .errors import XiError
from .pipeline import XiReport, compute_xi

__all__ = ["XiError", "XiReport", "compute_xi", "__version__"]
