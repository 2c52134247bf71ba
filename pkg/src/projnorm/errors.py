"""Exception types raised across the toolkit.

Every error is a subclass of :class:`ProjnormError`, so callers can catch the
package's failures with a single except clause while still discriminating the
precise cause.
"""

from __future__ import annotations


class ProjnormError(Exception):
    """Base class for all toolkit errors."""


# --- jet arithmetic ---------------------------------------------------------

class DivisionByZeroValue(ProjnormError):
    """Division by a jet whose constant term is zero."""


class DomainError(ProjnormError):
    """An elementary function was evaluated at an excluded base value."""


class OrderExceeded(ProjnormError):
    """A derivative beyond the jet's truncation order was requested."""


# --- tensor calculus --------------------------------------------------------

class SingularMetric(ProjnormError):
    """The metric is degenerate at the evaluation point."""


class OutOfDomain(ProjnormError):
    """A point lies outside the field's domain of definition."""


class SingularJacobian(ProjnormError):
    """A coordinate map has a singular Jacobian at the evaluation point."""


class DegenerateSection(OutOfDomain):
    """A weighted section has zero determinant where it must be invertible.

    Subclasses :class:`OutOfDomain`: such points are excluded from the
    domain of the reconstructed metric, and this type records why.
    """


class DegenerateCombination(OutOfDomain):
    """A linear combination of basis sections is degenerate at the point.

    Subclasses :class:`OutOfDomain` for the same reason as
    :class:`DegenerateSection`.
    """


# --- spectral machinery -----------------------------------------------------

class RankDeficientBasis(ProjnormError):
    """Sampled basis sections are numerically linearly dependent."""


class ZeroMatrix(ProjnormError):
    """A matrix expected to be nonzero is numerically zero."""


class PoleOfMap(ProjnormError):
    """A parameter conversion was evaluated at its pole."""


class OriginExcluded(ProjnormError):
    """The coefficient pair (0, 0) has no polar representation."""


# --- quadrature and catalogs ------------------------------------------------

class BranchCrossing(ProjnormError):
    """An integral was requested across the branch point of its integrand."""


class QuadratureFailure(ProjnormError):
    """Adaptive quadrature failed to reach the requested tolerance."""


# --- transformations --------------------------------------------------------

class UnknownMap(ProjnormError):
    """No coordinate transformation is registered under the given name."""


class DomainWindowExceeded(ProjnormError):
    """A flow parameter left the window on which the flow stays in-domain."""
