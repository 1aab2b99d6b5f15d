"""Exact matrix primitives, checked against independent oracles.

The determinant oracle is plain cofactor expansion, written before the
tests that use it; the Bareiss implementation must match it exactly.
"""

import random
from fractions import Fraction

import pytest

from flagcells.errors import DimensionMismatch, NotUnitriangular
from flagcells.exactq import (
    RatMatrix,
    corner_minors,
    det,
    format_matrix,
    inverse_unitriangular,
    parse_matrix,
    rank,
)


def det_cofactor(rows):
    """Independent oracle: recursive cofactor expansion along the first row."""
    d = len(rows)
    if d == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(d):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def random_matrix(rng, d, lo=-3, hi=3, frac=False):
    def entry():
        v = Fraction(rng.randint(lo, hi))
        if frac:
            v /= rng.randint(1, 4)
        return v
    return RatMatrix([[entry() for _ in range(d)] for _ in range(d)])


def random_unitriangular(rng, d, lo=-5, hi=5):
    rows = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            rows[i][j] = Fraction(rng.randint(lo, hi))
    return RatMatrix(rows)


def test_det_identity_and_transposition():
    assert det(RatMatrix.identity(3)) == 1
    assert det(RatMatrix([[0, 1], [1, 0]])) == -1


def test_det_matches_cofactor_oracle():
    rng = random.Random(1)
    for _ in range(50):
        m = random_matrix(rng, 4)
        assert det(m) == det_cofactor([list(r) for r in m.rows])


def test_det_fractional_entries_exact():
    rng = random.Random(2)
    for _ in range(25):
        m = random_matrix(rng, 4, frac=True)
        assert det(m) == det_cofactor([list(r) for r in m.rows])


def test_det_multiplicative():
    rng = random.Random(3)
    for _ in range(25):
        a = random_matrix(rng, 4)
        b = random_matrix(rng, 4)
        assert det(a * b) == det(a) * det(b)


def test_det_singular():
    m = RatMatrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert det(m) == 0


def test_matrix_is_square():
    with pytest.raises(DimensionMismatch):
        RatMatrix([[1, 2], [3, 4], [5, 6]])


def test_inverse_unitriangular_identity():
    ident = RatMatrix.identity(4)
    assert inverse_unitriangular(ident) == ident


def test_inverse_unitriangular_symbolic_example():
    # (x, y, z) = (1, 1, 2): inverse is [[1, -x, xz - y], [0, 1, -z], [0, 0, 1]]
    u = RatMatrix([[1, 1, 1], [0, 1, 2], [0, 0, 1]])
    assert inverse_unitriangular(u) == RatMatrix([[1, -1, 1], [0, 1, -2], [0, 0, 1]])


def test_inverse_unitriangular_roundtrip():
    rng = random.Random(4)
    for d in range(2, 8):
        u = random_unitriangular(rng, d)
        inv = inverse_unitriangular(u)
        assert u * inv == RatMatrix.identity(d)
        assert inverse_unitriangular(inv) == u


def test_inverse_rejects_non_unitriangular():
    with pytest.raises(NotUnitriangular):
        inverse_unitriangular(RatMatrix([[2, 0], [0, 1]]))
    with pytest.raises(NotUnitriangular):
        inverse_unitriangular(RatMatrix([[1, 0], [1, 1]]))


def test_corner_minors_d3_formulas():
    rng = random.Random(5)
    for _ in range(20):
        x, y, z = (Fraction(rng.randint(-5, 5)) for _ in range(3))
        u = RatMatrix([[1, x, y], [0, 1, z], [0, 0, 1]])
        assert corner_minors(u) == [y, x * z - y]


def test_corner_minors_identity_all_zero():
    for d in range(2, 7):
        assert corner_minors(RatMatrix.identity(d)) == [Fraction(0)] * (d - 1)


def test_corner_minors_example_112():
    u = RatMatrix([[1, 1, 1], [0, 1, 2], [0, 0, 1]])
    assert corner_minors(u) == [Fraction(1), Fraction(1)]


@pytest.mark.parametrize("d", range(2, 9))
def test_jacobi_complementary_minors(d):
    # p_k(u^-1) = (-1)^{k(d+1)} p_{d-k}(u), exactly
    rng = random.Random(100 + d)
    for _ in range(25):
        u = random_unitriangular(rng, d)
        p = corner_minors(u)
        q = corner_minors(inverse_unitriangular(u))
        for k in range(1, d):
            assert q[k - 1] == (-1) ** (k * (d + 1)) * p[d - k - 1]


@pytest.mark.parametrize("d", [2, 6])
def test_middle_minor_sign_flip_d_2_mod_4(d):
    rng = random.Random(200 + d)
    flips = 0
    for _ in range(30):
        u = random_unitriangular(rng, d)
        p = corner_minors(u)
        q = corner_minors(inverse_unitriangular(u))
        mid = p[d // 2 - 1]
        if mid != 0:
            flips += 1
            assert (mid > 0) == (q[d // 2 - 1] < 0)
    assert flips > 0


def test_rank():
    assert rank(RatMatrix.identity(5)) == 5
    assert rank(RatMatrix([[1, 2], [2, 4]])) == 1
    assert rank(RatMatrix([[0, 0], [0, 0]])) == 0


def test_matrix_text_roundtrip():
    m = RatMatrix([[1, Fraction(-2, 3)], [0, 7]])
    assert parse_matrix(format_matrix(m)) == m


def test_matrix_text_comments_and_blanks():
    text = "# a matrix\n1 1/2\n\n-3 4  # trailing comment\n"
    assert parse_matrix(text) == RatMatrix([[1, Fraction(1, 2)], [-3, 4]])


def test_matrix_text_reports_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_matrix("1 2\n3 x\n")
