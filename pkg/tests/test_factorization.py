"""The elementary-factor parametrization, its sign matrix, and inversion.

The oracle for ``compose`` multiplies the elementary matrices one by one in
the written order; the oracle for ``factorize`` is the round trip through
``compose``.
"""

import random
from fractions import Fraction

import pytest

from flagcells.errors import NonGeneric, NotUnitriangular
from flagcells.exactq import RatMatrix, corner_minors, inverse_unitriangular
from flagcells.f2comb import F2Tri, iota
from flagcells.factorization import (
    FactorParams,
    _elementary,
    compose,
    factorize,
    format_params,
    invert_params,
    parse_params,
    sign_matrix,
)


def compose_oracle(params):
    """Plain product of the elementary factors in block order."""
    n = params.n
    d = n + 1
    u = RatMatrix.identity(d)
    for r in range(1, n + 1):
        for i in range(1, n + 2 - r):
            u = u * _elementary(d, i, params[(i, n + 2 - r - i)])
    return u


def random_params(n, rng, lo=-9, hi=9):
    t = {}
    for i in range(1, n + 1):
        for j in range(1, n + 2 - i):
            v = 0
            while v == 0:
                v = rng.randint(lo, hi)
            t[(i, j)] = Fraction(v)
    return FactorParams(n, t)


def test_params_validation():
    with pytest.raises(ValueError, match="nonzero"):
        FactorParams(2, {(1, 1): 1, (1, 2): 0, (2, 1): 2})
    with pytest.raises(ValueError, match="index set"):
        FactorParams(2, {(1, 1): 1, (1, 2): 1})
    with pytest.raises(ValueError, match="index set"):
        FactorParams(2, {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1})


def test_compose_d2_single_factor():
    t = FactorParams(1, {(1, 1): Fraction(5)})
    assert compose(t) == RatMatrix([[1, 5], [0, 1]])


def test_compose_d3_worked_example():
    # (t12, t21, t11) = (1, 2, 3) gives (x, y, z) = (4, 2, 2)
    t = FactorParams(2, {(1, 2): 1, (2, 1): 2, (1, 1): 3})
    assert compose(t) == RatMatrix([[1, 4, 2], [0, 1, 2], [0, 0, 1]])


def test_compose_matches_elementary_product_oracle():
    rng = random.Random(21)
    for n in range(1, 6):
        for _ in range(10):
            t = random_params(n, rng)
            assert compose(t) == compose_oracle(t)


def test_totally_positive_has_positive_corner_minors():
    rng = random.Random(22)
    for n in range(1, 6):   # d <= 6
        for _ in range(10):
            t = random_params(n, rng, lo=1, hi=9)
            p = corner_minors(compose(t))
            assert all(v > 0 for v in p)


def test_factorize_worked_example():
    u = RatMatrix([[1, 4, 2], [0, 1, 2], [0, 0, 1]])
    assert factorize(u) == FactorParams(2, {(1, 2): 1, (2, 1): 2, (1, 1): 3})


def test_factorize_non_generic():
    with pytest.raises(NonGeneric):
        factorize(RatMatrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))


def test_factorize_requires_unitriangular():
    with pytest.raises(NotUnitriangular):
        factorize(RatMatrix([[1, 0], [1, 1]]))


@pytest.mark.parametrize("n", range(2, 8))
def test_factorize_compose_roundtrip(n):
    rng = random.Random(300 + n)
    for _ in range(20):
        t = random_params(n, rng)
        u = compose(t)
        assert factorize(u) == t
        assert compose(factorize(u)) == u


def test_sign_matrix_positive_is_zero():
    rng = random.Random(23)
    for n in (2, 4):
        t = random_params(n, rng, lo=1, hi=9)
        assert sign_matrix(t) == F2Tri.zero(n)
    assert sign_matrix(FactorParams(2, {(1, 2): 1, (2, 1): 2, (1, 1): 3})) == F2Tri.zero(2)


def test_sign_matrix_all_negative_is_all_ones():
    rng = random.Random(24)
    t = random_params(2, rng, lo=-9, hi=-1)
    assert sign_matrix(t) == F2Tri.all_ones(2)


def test_sign_matrix_placement():
    # epsilon_ij sits at row j, column i+j-1
    n = 3
    base = {(i, j): Fraction(1) for i in range(1, n + 1) for j in range(1, n + 2 - i)}
    for (i, j) in base:
        t = dict(base)
        t[(i, j)] = Fraction(-1)
        m = sign_matrix(FactorParams(n, t))
        expected = F2Tri.zero(n).with_bit(j, i + j - 1, 1)
        assert m == expected


def test_invert_params_d2():
    t = FactorParams(1, {(1, 1): Fraction(7)})
    assert invert_params(t) == FactorParams(1, {(1, 1): Fraction(-7)})


def test_invert_params_worked_example():
    t = FactorParams(2, {(1, 2): 1, (2, 1): 2, (1, 1): 3})
    ti = invert_params(t)
    assert ti == FactorParams(2, {(1, 2): -3, (2, 1): -2, (1, 1): -1})
    assert compose(ti) == RatMatrix([[1, -4, 6], [0, 1, -2], [0, 0, 1]])
    assert compose(ti) == inverse_unitriangular(compose(t))


@pytest.mark.parametrize("n", range(1, 8))
def test_invert_params_involution_and_exact_inverse(n):
    rng = random.Random(400 + n)
    for _ in range(10):
        t = random_params(n, rng)
        ti = invert_params(t)
        assert invert_params(ti) == t
        assert compose(ti) * compose(t) == RatMatrix.identity(n + 1)
        assert compose(ti) == inverse_unitriangular(compose(t))


@pytest.mark.parametrize("n", range(1, 8))
def test_sign_matrix_of_inverse_is_iota(n):
    rng = random.Random(500 + n)
    for _ in range(15):
        t = random_params(n, rng)
        assert sign_matrix(invert_params(t)) == iota(sign_matrix(t))


def test_sign_matrix_stable_under_positive_scaling():
    rng = random.Random(25)
    for n in (2, 3, 4):
        t = random_params(n, rng)
        scaled = FactorParams(
            n, {k: v * Fraction(rng.randint(1, 5), rng.randint(1, 5)) for k, v in t.items()}
        )
        assert sign_matrix(scaled) == sign_matrix(t)


def test_params_text_roundtrip():
    rng = random.Random(26)
    t = random_params(3, rng)
    assert parse_params(format_params(t)) == t


def test_params_text_validation():
    with pytest.raises(ValueError, match="line 1"):
        parse_params("1 1\n")
    with pytest.raises(ValueError, match="duplicate"):
        parse_params("1 1 2\n1 1 3\n")
    with pytest.raises(ValueError, match="nonzero"):
        parse_params("1 1 0\n1 2 1\n2 1 1\n")
    with pytest.raises(ValueError, match="index set"):
        parse_params("1 1 1\n2 1 1\n")
