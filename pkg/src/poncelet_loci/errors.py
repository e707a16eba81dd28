"""Exception hierarchy shared by every module of the package."""


class PonceletError(Exception):
    """Base class for all errors raised by :mod:`poncelet_loci`."""


class DomainError(PonceletError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class OrientationError(DomainError):
    """Ellipse axes passed as ``(minor, major)`` instead of ``(major, minor)``."""


class DegeneracyError(PonceletError, ArithmeticError):
    """A denominator, determinant or locus collapsed to zero."""


class FitError(PonceletError, ArithmeticError):
    """A conic fit failed or did not produce an axis-aligned centered ellipse."""


class InversionError(PonceletError, ArithmeticError):
    """The caustic-to-table axes inversion found no admissible root."""
