"""Numerical verification toolkit for 2D metrics with exactly one essential
projective vector field: jet arithmetic, projective connections, Lie-derivative
spectra, Benenti classification, Killing and mobility obstructions, a catalog
of metric families, their explicit isometries, and a CLI harness.
"""

__version__ = "0.1.0"

from .errors import ProjnormError
from .jets import Jet, Point2

__all__ = ["Jet", "Point2", "ProjnormError", "__version__"]
