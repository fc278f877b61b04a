import pytest
from hypothesis import given, strategies as st

from qpack.dqt import DensePoly
from qpack.oracle import (
    agrees_at_points,
    naive_gfq_mul,
    naive_mod_digits,
    poly_rem,
    schoolbook_mul,
    schoolbook_mul_reference,
)

polys = st.integers(2, 13).filter(lambda p: p in (2, 3, 5, 7, 11, 13)).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(0, p - 1), max_size=30),
                        st.lists(st.integers(0, p - 1), max_size=30)))


@given(polys)
def test_schoolbook_versions_agree(case):
    p, a, b = case
    P, Q = DensePoly(tuple(a), p), DensePoly(tuple(b), p)
    R = schoolbook_mul(P, Q)
    assert R == schoolbook_mul_reference(P, Q)
    if a and b:
        assert agrees_at_points(P, Q, R)


def test_example_product():
    R = schoolbook_mul(DensePoly((1, 1), 3), DensePoly((2, 1), 3))
    assert R.coeffs == (2, 0, 1)


def test_agrees_at_points_detects_error():
    P = DensePoly((1, 1), 3)
    assert not agrees_at_points(P, P, DensePoly((1, 1, 1), 3))


@given(st.integers(0, 10 ** 30 - 1))
def test_naive_mod_digits(r):
    digits = naive_mod_digits(r, 7, 10 ** 6, 4)
    assert digits == [(r // 10 ** (6 * i)) % 10 ** 6 % 7 for i in range(5)]


def test_naive_mod_digits_limits():
    with pytest.raises(ValueError):
        naive_mod_digits(32 ** 3, 3, 32, 2)
    with pytest.raises(OverflowError):
        naive_mod_digits(2 ** 300, 3, 2, 400)


def test_gf9_mul():
    # in GF(3)[x]/(x^2+1): (1 + x)^2 = 2x
    assert naive_gfq_mul([1, 1], [1, 1], [1, 0, 1], 3) == [0, 2]
    assert poly_rem([0, 0, 1], [1, 0, 1], 3) == [2, 0]
