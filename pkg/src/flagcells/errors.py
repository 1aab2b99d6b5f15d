"""Exceptions shared across the package."""


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


class SingularMatrix(ValueError):
    """A matrix required to be invertible has determinant zero."""


class NotUnitriangular(ValueError):
    """A matrix required to be upper-triangular with unit diagonal is not."""


class NotInBigCell(ValueError):
    """A flag is not antipodal to the descending flag, so it has no
    unitriangular coordinates."""


class NonGeneric(Exception):
    """A unitriangular matrix lies outside the dense factorizable locus.

    Not a failure: callers sampling random matrices simply retry.
    """


class InvalidParity(ValueError):
    """A named construction only exists for sizes of a certain parity."""


class NotInIn(ValueError):
    """A translation matrix is not constant along diagonals."""


class ResourceBound(RuntimeError):
    """An enumeration would exceed the configured state bound."""
