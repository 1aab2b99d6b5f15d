"""flagcells: exact computation with the intersection of two opposite big
Schubert cells of the full flag manifold.

The package has three layers:

  * exact geometry over Q (``exactq``, ``flags``): flags, antipodality,
    big-cell coordinates, corner minors;
  * the factorization bridge (``factorization``): elementary-factor
    parameters of generic unitriangular matrices, their sign matrices, and
    the parameter-level inversion;
  * F2 combinatorics (``f2comb``) and pipelines (``analysis``): orbits of
    the moves on bit-packed triangular matrices, the pairing involution,
    slice structure, censuses, and the d = 8 search.
"""

from . import analysis, exactq, f2comb, factorization, flags
from .errors import (
    DimensionMismatch,
    InvalidParity,
    NonGeneric,
    NotInBigCell,
    NotInIn,
    NotUnitriangular,
    ResourceBound,
    SingularMatrix,
)

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "exactq",
    "f2comb",
    "factorization",
    "flags",
    "DimensionMismatch",
    "InvalidParity",
    "NonGeneric",
    "NotInBigCell",
    "NotInIn",
    "NotUnitriangular",
    "ResourceBound",
    "SingularMatrix",
    "__version__",
]
