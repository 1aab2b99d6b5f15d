"""Flags, antipodality, and big-cell coordinates.

The rank oracle for the transversality cross-check is sympy's, which shares
no code with the package's determinant-based path.
"""

import random
from fractions import Fraction

import pytest
import sympy

from flagcells.errors import DimensionMismatch, NotInBigCell, SingularMatrix
from flagcells.exactq import RatMatrix, det
from flagcells.flags import (
    Flag,
    act,
    big_cell_coordinates,
    is_antipodal,
    non_transverse_indices,
    standard_flags,
)


def random_unitriangular(rng, d, lo=-4, hi=4):
    rows = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            rows[i][j] = Fraction(rng.randint(lo, hi))
    return RatMatrix(rows)


def random_invertible(rng, d):
    while True:
        m = RatMatrix([[Fraction(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)])
        if det(m) != 0:
            return m


def u3(x, y, z):
    return RatMatrix([[1, x, y], [0, 1, z], [0, 0, 1]])


def test_standard_flags_d2():
    lo, hi = standard_flags(2)
    assert lo.basis == RatMatrix([[1, 0], [0, 1]])
    assert hi.basis == RatMatrix([[0, 1], [1, 0]])


def test_standard_flags_d3_spans():
    _, hi = standard_flags(3)
    # sigma_plus: {0} < span{e3} < span{e3, e2} < R^3
    assert hi.basis.column(0) == (0, 0, 1)
    assert set(map(tuple, zip(*[hi.basis.column(j) for j in (0, 1)]))) == {(0, 0), (0, 1), (1, 0)}


@pytest.mark.parametrize("d", range(2, 9))
def test_standard_flags_antipodal(d):
    lo, hi = standard_flags(d)
    assert is_antipodal(lo, hi)


def test_flag_not_antipodal_to_itself():
    for d in range(2, 6):
        f, _ = standard_flags(d)
        assert not is_antipodal(f, f)


def test_antipodal_dimension_mismatch():
    a, _ = standard_flags(2)
    b, _ = standard_flags(3)
    with pytest.raises(DimensionMismatch):
        is_antipodal(a, b)


def test_antipodal_d3_example_101():
    # u = (1, 0, 1): u.sigma_plus is antipodal to sigma_minus but not sigma_plus
    lo, hi = standard_flags(3)
    f = act(u3(1, 0, 1), hi)
    assert is_antipodal(lo, f)
    assert not is_antipodal(hi, f)


def test_act_identity_and_composition():
    rng = random.Random(11)
    for d in (2, 3, 4):
        _, hi = standard_flags(d)
        assert act(RatMatrix.identity(d), hi) == hi
        g = random_invertible(rng, d)
        h = random_invertible(rng, d)
        assert act(g * h, hi) == act(g, act(h, hi))


def test_act_singular_rejected():
    _, hi = standard_flags(2)
    with pytest.raises(SingularMatrix):
        act(RatMatrix([[1, 1], [1, 1]]), hi)


def test_unitriangular_fixes_descending_flag():
    rng = random.Random(12)
    for d in (2, 3, 5):
        lo, _ = standard_flags(d)
        u = random_unitriangular(rng, d)
        assert act(u, lo) == lo


def test_longest_permutation_sends_minus_to_plus():
    for d in (2, 3, 4, 5):
        lo, hi = standard_flags(d)
        w0 = RatMatrix([[Fraction(int(i + j == d - 1)) for j in range(d)] for i in range(d)])
        assert act(w0, lo) == hi


def test_flag_equality_is_basis_independent():
    # rescale and add earlier columns: same flag
    lo, hi = standard_flags(3)
    b = RatMatrix([[0, 0, 2], [0, 3, 5], [7, 1, 1]])
    assert Flag(b) == hi


def test_antipodal_invariant_under_simultaneous_action():
    rng = random.Random(13)
    for d in (2, 3, 4):
        lo, hi = standard_flags(d)
        for _ in range(10):
            g = random_invertible(rng, d)
            u = random_unitriangular(rng, d)
            f = act(u, hi)
            assert is_antipodal(lo, f) == is_antipodal(act(g, lo), act(g, f))
            assert is_antipodal(f, lo) == is_antipodal(lo, f)


def test_big_cell_coordinates_of_sigma_plus_is_identity():
    for d in (2, 3, 4, 6):
        _, hi = standard_flags(d)
        assert big_cell_coordinates(hi) == RatMatrix.identity(d)


def test_big_cell_coordinates_roundtrip():
    # forward action is the oracle: coordinates of u.sigma_plus must be u
    rng = random.Random(14)
    for d in range(2, 8):
        _, hi = standard_flags(d)
        for _ in range(10):
            u = random_unitriangular(rng, d)
            assert big_cell_coordinates(act(u, hi)) == u


def test_big_cell_rejects_sigma_minus():
    lo, _ = standard_flags(3)
    with pytest.raises(NotInBigCell):
        big_cell_coordinates(lo)


def test_non_transverse_examples():
    _, hi = standard_flags(3)
    assert non_transverse_indices(act(u3(1, 1, 2), hi)) == set()
    assert non_transverse_indices(act(u3(1, 0, 1), hi)) == {1}
    assert non_transverse_indices(act(u3(1, 1, 1), hi)) == {2}


def test_non_transverse_matches_independent_rank_oracle():
    # k is non-transverse iff rank [first k cols of F | first d-k cols of sigma_plus] < d
    rng = random.Random(15)
    for d in (2, 3, 4, 5):
        _, hi = standard_flags(d)
        for _ in range(25):
            u = random_unitriangular(rng, d, lo=-2, hi=2)
            f = act(u, hi)
            got = non_transverse_indices(f)
            fb, hb = f.basis.rows, hi.basis.rows
            for k in range(1, d):
                block = [[*fb[i][:k], *hb[i][: d - k]] for i in range(d)]
                oracle_deficient = sympy.Matrix(block).rank() < d
                assert (k in got) == oracle_deficient
