"""Exact rational matrices and the minor computations everything else uses.

All arithmetic is over Q, represented by ``fractions.Fraction`` (arbitrary
precision, always normalized, positive denominator).  Nothing in this module
or its callers ever touches floating point: determinants are computed by
fraction-free Bareiss elimination over integers after clearing denominators,
and inverses of unitriangular matrices by exact back substitution.

The central quantity is the family of corner minors of a unitriangular
matrix u:

    p_k(u) = det of the upper-right k x k block of u,   k = 1 .. d-1.

p_k(u) = 0 exactly when the flag u.sigma_plus fails to be transverse to the
ascending flag at level k, so these minors cut out the non-generic locus
inside the big cell.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import DimensionMismatch, NotUnitriangular

Rational = Fraction


def _as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class RatMatrix:
    """Immutable square matrix over Q.

    Entries are indexed 0-based in code; the mathematical discussion is
    1-based.  Equality is exact entry-wise equality of normalized fractions.
    """

    __slots__ = ("dim", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(_as_rational(x) for x in r) for r in rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, d: int) -> "RatMatrix":
        return cls([[Fraction(int(i == j)) for j in range(d)] for i in range(d)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __mul__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        d = self.dim
        ocols = tuple(zip(*other.rows))
        return RatMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.rows]
        )

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def is_unitriangular(self) -> bool:
        return all(self.rows[i][i] == 1 for i in range(self.dim)) and all(
            self.rows[i][j] == 0 for i in range(self.dim) for j in range(i)
        )

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RatMatrix[{body}]"


def det(m: RatMatrix) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination.

    Denominators are cleared row by row first, so the elimination runs
    entirely over Python integers; every intermediate division in the
    Bareiss recurrence is exact.
    """
    d = m.dim
    scale = Fraction(1)
    a = []
    for row in m.rows:
        mult = lcm(*(x.denominator for x in row))
        scale *= mult
        a.append([int(x * mult) for x in row])

    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            for i in range(k + 1, d):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[d - 1][d - 1]) / scale


def rank(m: RatMatrix) -> int:
    """Rank over Q by exact Gaussian elimination (no thresholds)."""
    a = [list(r) for r in m.rows]
    d = m.dim
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, d) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, d):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                for j in range(c, d):
                    a[i][j] -= f * a[r][j]
        r += 1
    return r


def _require_unitriangular(u: RatMatrix):
    if not u.is_unitriangular:
        raise NotUnitriangular("expected unit diagonal and zeros below it")


def inverse_unitriangular(u: RatMatrix) -> RatMatrix:
    """Exact inverse of a unitriangular matrix (again unitriangular)."""
    _require_unitriangular(u)
    d = u.dim
    inv = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    # back substitution, one column of the inverse at a time
    for j in range(d):
        for i in range(j - 1, -1, -1):
            s = -sum(u.rows[i][k] * inv[k][j] for k in range(i + 1, j + 1))
            inv[i][j] = s
    return RatMatrix(inv)


def corner_minors(u: RatMatrix) -> list[Fraction]:
    """The corner minors p_1 .. p_{d-1} of a unitriangular matrix.

    p_k is the determinant of the sub-matrix on rows 1..k and columns
    d-k+1..d (1-based).  For d=3 with upper entries (x, y, z) this gives
    p_1 = y and p_2 = xz - y.
    """
    _require_unitriangular(u)
    d = u.dim
    if d < 2:
        raise DimensionMismatch("corner minors need dim >= 2")
    out = []
    for k in range(1, d):
        block = RatMatrix([[u.rows[i][d - k + j] for j in range(k)] for i in range(k)])
        out.append(det(block))
    return out


# -- shared matrix text format ------------------------------------------------
#
# One row per line, entries whitespace-separated, each an optionally signed
# integer or p/q.  Blank lines and '#' comments are ignored.

def parse_matrix(text: str) -> RatMatrix:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([Fraction(tok) for tok in line.split()])
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if not rows:
        raise ValueError("no matrix rows found")
    return RatMatrix(rows)


def format_matrix(m: RatMatrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m.rows) + "\n"
