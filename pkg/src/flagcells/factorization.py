"""Parametrization of generic unitriangular matrices by elementary factors.

A generic u in U_d (d = n+1) factors uniquely as a product of elementary
factors I + t.E_i, where E_i has a single 1 at (i, i+1), taken along the
fixed reduced word

    (s_1 s_2 ... s_n)(s_1 s_2 ... s_{n-1}) ... (s_1 s_2)(s_1)

of the longest permutation.  The parameter attached to s_i is written
t_{ij}, where j counts occurrences of s_i from the *right* of the product.
Within block r (r = 1 .. n, leftmost first) the factor for s_i therefore
carries t_{i, n+2-r-i}:

    block r = 1:   t_{1,n}   t_{2,n-1}  ...  t_{n,1}
    block r = 2:   t_{1,n-1} t_{2,n-2}  ...  t_{n-1,1}
    ...
    block r = n-1: t_{1,2}   t_{2,1}
    block r = n:   t_{1,1}

All n(n+1)/2 parameters must be nonzero.  The sign pattern of the
parameters is recorded in an upper-triangular F2 matrix with epsilon_{ij}
(0 for positive t_{ij}, 1 for negative) placed at row j, column i+j-1:

    [ eps_11 eps_21 ... eps_n1 ]
    [        eps_12 ... eps_(n-1)2 ]
    [                ...        ]
    [                   eps_1n  ]

This sign matrix is constant on connected components of the intersection of
the two opposite big cells, which is what makes it the bridge between the
exact geometry and the F2 combinatorics.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonGeneric, NotUnitriangular
from .exactq import RatMatrix, Rational, _as_rational
from .f2comb import F2Tri


class FactorParams:
    """The n(n+1)/2 nonzero parameters t_{ij}, 1 <= i <= n, 1 <= j <= n+1-i."""

    __slots__ = ("n", "_t")

    def __init__(self, n: int, t):
        if n < 1:
            raise ValueError("need n >= 1")
        expected = {(i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)}
        t = {k: _as_rational(v) for k, v in dict(t).items()}
        if set(t) != expected:
            missing = expected - set(t)
            extra = set(t) - expected
            raise ValueError(f"bad index set (missing {missing or '{}'}, extra {extra or '{}'})")
        zero = [k for k, v in t.items() if v == 0]
        if zero:
            raise ValueError(f"parameters must be nonzero, got 0 at {sorted(zero)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_t", t)

    def __setattr__(self, name, value):
        raise AttributeError("FactorParams is immutable")

    def __getitem__(self, ij) -> Fraction:
        return self._t[ij]

    def items(self):
        return sorted(self._t.items())

    def __eq__(self, other):
        return isinstance(other, FactorParams) and self.n == other.n and self._t == other._t

    def __hash__(self):
        return hash((self.n, tuple(self.items())))

    def __repr__(self):
        body = ", ".join(f"t{i}{j}={v}" for (i, j), v in self.items())
        return f"FactorParams(n={self.n}; {body})"


def _elementary(d: int, i: int, t: Fraction) -> RatMatrix:
    """I + t.E_i with the single off-diagonal entry at (i, i+1), 1-based."""
    rows = [[Fraction(int(r == c)) for c in range(d)] for r in range(d)]
    rows[i - 1][i] = t
    return RatMatrix(rows)


def compose(params: FactorParams) -> RatMatrix:
    """Multiply out the factorization; the result is unitriangular.

    Right-multiplying by I + t.E_i adds t times column i to column i+1, so
    the whole product is accumulated with column operations.
    """
    n = params.n
    d = n + 1
    rows = [[Fraction(int(r == c)) for c in range(d)] for r in range(d)]
    for r in range(1, n + 1):
        for i in range(1, n + 2 - r):
            t = params[(i, n + 2 - r - i)]
            for row in rows:
                row[i] += t * row[i - 1]
    return RatMatrix(rows)


def factorize(u: RatMatrix) -> FactorParams:
    """Recover the parameters of a generic unitriangular matrix.

    Works by recursive column peeling.  The factors of every block after
    the first fix e_d, so the last column of u is the last column of the
    first block alone, and that column is the cumulative product

        u[i, d] = t_{n,1} t_{n-1,2} ... t_{i, n+1-i}   (u[d, d] = 1),

    giving t_{i, n+1-i} = u[i, d] / u[i+1, d].  Left-multiplying by the
    block inverse reduces to the same problem one size down, with the same
    t_{ij} indices.  Raises NonGeneric as soon as a peeled column entry
    vanishes; genericity is certified operationally by the round trip with
    ``compose``, not by a closed-form locus.
    """
    if not u.is_unitriangular:
        raise NotUnitriangular("expected unit diagonal and zeros below it")
    d = u.dim
    if d < 2:
        raise ValueError("need dim >= 2")
    n = d - 1
    t = {}
    v = [list(r) for r in u.rows]
    for m in range(d, 1, -1):
        col = [v[i][m - 1] for i in range(m)]
        if any(x == 0 for x in col[: m - 1]):
            raise NonGeneric(f"column {m} has a vanishing entry")
        block = {}
        for i in range(1, m):
            block[i] = col[i - 1] / col[i]
            t[(i, m - i)] = block[i]
        # strip the block: with B = (I + t_1 E_1)...(I + t_{m-1} E_{m-1}),
        # B^-1 v applies the factor inverses innermost-first, i.e. I - t_i E_i
        # for i ascending; each one subtracts t_i times row i+1 from row i.
        for i in range(1, m):
            for j in range(d):
                v[i - 1][j] -= block[i] * v[i][j]
    return FactorParams(n, t)


def invert_params(params: FactorParams) -> FactorParams:
    """Parameters of the inverse matrix: t'_{ij} = -t_{i, n+2-i-j}.

    Reversing the factorization and commuting distant elementary factors
    back into block order negates every parameter and reverses, for each i,
    the order of the occurrences of s_i; s_i occurs n+1-i times, so the
    occurrence index maps j -> (n+1-i) + 1 - j.  This map is an involution,
    and compose(invert_params(t)) is exactly the inverse of compose(t).
    """
    n = params.n
    return FactorParams(
        n,
        {(i, j): -params[(i, n + 2 - i - j)] for i in range(1, n + 1) for j in range(1, n + 2 - i)},
    )


def sign_matrix(params: FactorParams) -> F2Tri:
    """The upper-triangular F2 sign pattern of the parameters.

    epsilon_{ij} = 0 if t_{ij} > 0 and 1 if t_{ij} < 0, placed at matrix
    position (row, col) = (j, i+j-1).
    """
    n = params.n
    m = F2Tri.zero(n)
    for (i, j), v in params.items():
        if v < 0:
            m = m.with_bit(j, i + j - 1, 1)
    return m


# -- parameter file format ----------------------------------------------------
#
# One line per parameter: "i j value" with value an integer or p/q.  Blank
# lines and '#' comments are ignored.  The index set must be complete and
# every value nonzero (enforced by FactorParams).

def parse_params(text: str) -> FactorParams:
    t = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'i j value'")
        try:
            i, j = int(parts[0]), int(parts[1])
            v = Fraction(parts[2])
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"line {lineno}: {e}") from None
        if (i, j) in t:
            raise ValueError(f"line {lineno}: duplicate index ({i}, {j})")
        t[(i, j)] = v
    if not t:
        raise ValueError("no parameters found")
    n = max(i + j - 1 for (i, j) in t)
    return FactorParams(n, t)


def format_params(params: FactorParams) -> str:
    return "".join(f"{i} {j} {v}\n" for (i, j), v in params.items())
