import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from psverify.coeff import (INF, CycloNum, ExactMatrix, OrderOverflow, UnsupportedValuation, kernel_basis,
                            order_cap, padic_valuation, set_order_cap)

from conftest import cyclo_nums, small_rationals

zeta = CycloNum.root_of_unity
ONE, ZERO = CycloNum.rational(1), CycloNum.rational(0)


def test_zeta4_squared_is_minus_one():
    assert zeta(4) * zeta(4) == CycloNum.rational(-1)


def test_rational_plus_root_cancels():
    half = CycloNum.rational(mpq(1, 2))
    assert (half + zeta(3)) + (half - zeta(3)) == ONE


def test_inverse_of_zeta3():
    assert zeta(3).inverse() == zeta(3, 2)
    assert zeta(3) * zeta(3, 2) == ONE


def test_mixed_orders_embed_into_common_field():
    assert zeta(4) * zeta(3) == zeta(12, 7)
    assert zeta(6, 3) == CycloNum.rational(-1)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_order_cap_is_enforced():
    old = order_cap()
    set_order_cap(10)
    try:
        with pytest.raises(OrderOverflow):
            zeta(11)
    finally:
        set_order_cap(old)


@given(cyclo_nums(), cyclo_nums(), cyclo_nums())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@pytest.mark.parametrize("value, p, expected", [
    (mpq(9, 2), 3, 2),
    (0, 3, INF),
    (mpq(5, 12), 2, -2),
])
def test_valuation_of_rationals(value, p, expected):
    assert padic_valuation(CycloNum.rational(value), p) == expected


def test_valuation_of_root_of_unity_multiple():
    assert padic_valuation(-zeta(4) * CycloNum.rational(mpq(1, 3)), 3) == -1


def test_valuation_refuses_non_monomial():
    with pytest.raises(UnsupportedValuation):
        padic_valuation(CycloNum.rational(2) + zeta(3), 2)


@given(st.integers(1, 12), st.integers(0, 11), small_rationals, st.integers(0, 11), small_rationals,
       st.sampled_from([2, 3, 5]))
def test_valuation_is_a_valuation(n, j, r, k, s, p):
    if n % p == 0:
        n += 1
    a = zeta(n, j) * CycloNum.rational(r)
    b = zeta(n, k) * CycloNum.rational(s)
    va, vb = padic_valuation(a, p), padic_valuation(b, p)
    assert padic_valuation(a * b, p) == va + vb
    if j == k and not (a + b).is_zero():
        assert padic_valuation(a + b, p) >= min(va, vb)


def test_kernel_of_all_ones():
    basis = kernel_basis(ExactMatrix([[1, 1], [1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == -v[1] and not v[0].is_zero()


def test_kernel_of_identity_is_empty():
    assert kernel_basis(ExactMatrix([[int(i == j) for j in range(3)] for i in range(3)])) == []


def test_random_rank_five_matrix(rng):
    while True:
        rows = [[rng.randint(-5, 5) for _ in range(8)] for _ in range(5)]
        if sympy.Matrix(rows).rank() == 5:
            break
    m = ExactMatrix(rows)
    basis = kernel_basis(m)
    assert len(basis) == 3
    for v in basis:
        assert all(x.is_zero() for x in m.apply(v))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=5))
def test_rank_nullity_against_sympy(rows):
    m = ExactMatrix(rows)
    oracle = sympy.Matrix(rows)
    basis = kernel_basis(m)
    assert m.rank() == oracle.rank()
    assert len(basis) + m.rank() == 5
    assert len(basis) == len(oracle.nullspace())
    for v in basis:
        assert all(x.is_zero() for x in m.apply(v))


@given(st.lists(st.lists(cyclo_nums(orders=(1, 3, 4)), min_size=4, max_size=4), min_size=1, max_size=3))
def test_cyclotomic_kernel_annihilates(rows):
    m = ExactMatrix(rows)
    basis = kernel_basis(m)
    assert len(basis) + m.rank() == 4
    for v in basis:
        assert all(x.is_zero() for x in m.apply(v))
