"""Complete flags in Q^d, antipodality, and big-cell coordinates.

A complete flag is a chain {0} < V^1 < ... < V^d = Q^d with dim V^k = k.  We
store a flag as an invertible basis matrix whose leading k columns span V^k.
Two flags are equal when every leading block spans the same subspace, which
we test by canonicalizing each leading block to reduced column echelon form.

The descending flag sigma_minus is spanned by e_1, e_2, ... and the
ascending flag sigma_plus by e_d, e_{d-1}, ...; they are antipodal.  The
unitriangular group acts simply transitively on the big cell of flags
antipodal to sigma_minus, and ``big_cell_coordinates`` computes the unique
unitriangular matrix u with u.sigma_plus = F.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, NotInBigCell, SingularMatrix
from .exactq import RatMatrix, corner_minors, det


class Flag:
    """A complete flag, represented by an invertible basis matrix."""

    __slots__ = ("basis", "_canon")

    def __init__(self, basis: RatMatrix):
        if det(basis) == 0:
            raise SingularMatrix("flag basis must be invertible")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("Flag is immutable")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def _canonical(self):
        # reduced column echelon form of every leading block; cached
        if self._canon is None:
            object.__setattr__(
                self,
                "_canon",
                tuple(
                    _column_echelon([r[: k + 1] for r in self.basis.rows])
                    for k in range(self.dim)
                ),
            )
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, Flag) or self.dim != other.dim:
            return False
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return f"Flag({self.basis!r})"


def _column_echelon(cols_by_row):
    """Reduced column echelon form, returned as a hashable tuple.

    The input is a list of rows; the result depends only on the column span
    of every matrix with those columns, which makes it a canonical form for
    the subspace.
    """
    nrows = len(cols_by_row)
    ncols = len(cols_by_row[0])
    cols = [[cols_by_row[i][j] for i in range(nrows)] for j in range(ncols)]
    pivot_row = {}
    r = 0
    c = 0
    while r < nrows and c < ncols:
        piv = next((j for j in range(c, ncols) if cols[j][r] != 0), None)
        if piv is None:
            r += 1
            continue
        cols[c], cols[piv] = cols[piv], cols[c]
        cols[c] = [x / cols[c][r] for x in cols[c]]
        for j in range(ncols):
            if j != c and cols[j][r] != 0:
                f = cols[j][r]
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[c])]
        pivot_row[c] = r
        r += 1
        c += 1
    return tuple(tuple(col) for col in cols)


def standard_flags(d: int) -> tuple[Flag, Flag]:
    """The (descending, ascending) pair (sigma_minus, sigma_plus)."""
    if d < 2:
        raise DimensionMismatch("need d >= 2")
    ident = RatMatrix.identity(d)
    rev = RatMatrix([[ident.rows[i][d - 1 - j] for j in range(d)] for i in range(d)])
    return Flag(ident), Flag(rev)


def is_antipodal(f: Flag, g: Flag) -> bool:
    """True iff F^(k) + G^(d-k) = Q^d for every k.

    Checked by the exact determinant of the d x d matrix assembled from the
    first k columns of F and the first d-k columns of G.
    """
    if f.dim != g.dim:
        raise DimensionMismatch(f"{f.dim} != {g.dim}")
    d = f.dim
    for k in range(1, d):
        rows = [f.basis.rows[i][:k] + g.basis.rows[i][: d - k] for i in range(d)]
        if det(RatMatrix(rows)) == 0:
            return False
    return True


def act(g: RatMatrix, f: Flag) -> Flag:
    """The flag g.F (left action by an invertible matrix)."""
    if g.dim != f.dim:
        raise DimensionMismatch(f"{g.dim} != {f.dim}")
    if det(g) == 0:
        raise SingularMatrix("group element must be invertible")
    return Flag(g * f.basis)


def big_cell_coordinates(f: Flag) -> RatMatrix:
    """The unique unitriangular u with u.sigma_plus = F.

    Solved by reverse column elimination: column d of u is the vector of
    F^(1) normalized to have last coordinate 1; column d-1 is the vector of
    F^(2) with coordinate d-1 equal to 1 and coordinate d equal to 0; and so
    on.  Each step solves the k x k system formed by the bottom k rows of
    F's leading k columns, which is invertible exactly when F is antipodal
    to sigma_minus at level k.
    """
    d = f.dim
    b = f.basis
    u = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        # want x with (leading k columns of F) . x having bottom coordinates
        # (1, 0, ..., 0) at rows d-k+1 .. d
        rows = [[b.rows[d - k + i][j] for j in range(k)] for i in range(k)]
        rhs = [Fraction(int(i == 0)) for i in range(k)]
        x = _solve_exact(rows, rhs)
        if x is None:
            raise NotInBigCell(f"flag is not antipodal to sigma_minus at level {k}")
        col = [sum(b.rows[i][j] * x[j] for j in range(k)) for i in range(d)]
        for i in range(d):
            u[i][d - k] = col[i]
    return RatMatrix(u)


def _solve_exact(a, rhs):
    """Solve a square rational system exactly; None if singular."""
    n = len(a)
    m = [row[:] + [r] for row, r in zip(a, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def non_transverse_indices(f: Flag) -> set[int]:
    """The set of levels k at which F fails to be transverse to sigma_plus.

    Requires F in the big cell of sigma_minus; equals the set of k with
    p_k(u_F) = 0, empty exactly when F lies in both big cells.
    """
    u = big_cell_coordinates(f)
    p = corner_minors(u)
    return {k + 1 for k, val in enumerate(p) if val == 0}
