import warnings

import pytest
from hypothesis import given, strategies as st

from qpack.params import (
    BoundViolation,
    DelayedParams,
    InfeasibleError,
    NotPrimeError,
    ParameterError,
    QadicParams,
    best_qadic,
    delayed_bound,
    is_prime,
    validate,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 23, 251, 1009]


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2 ** 31 - 1)
    assert not is_prime(1009 * 1013)


def test_validate_accepts_and_rejects():
    assert validate(3, 100, 2, 1, 53) is None
    assert "n_q*k*(p-1)^2" in validate(3, 8, 2, 1, 53)
    assert "2k-1" in validate(3, 2 ** 20, 3, 1, 53)
    with pytest.raises(NotPrimeError):
        validate(4, 100, 2, 1, 53)
    with pytest.raises(ParameterError):
        validate(3, 0, 2, 1, 53)


def test_bounds_are_strict():
    # q must strictly exceed the digit bound, and q^(2k-1) must stay strictly below 2^m
    assert validate(3, 8, 2, 1, 53) is not None
    assert validate(3, 9, 2, 1, 53) is None
    assert validate(2, 2, 1, 1, 1) is not None
    assert validate(2, 2, 1, 1, 2) is None


def test_qadic_params_properties():
    params = QadicParams(3, 32, 5, 1, 53)
    assert params.shift == 5
    assert params.digit_bound == 20
    assert QadicParams(3, 100, 2, 1, 53).shift is None
    with pytest.raises(BoundViolation):
        QadicParams(3, 16, 5, 1, 53)


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("m", [24, 53, 64, 128])
@pytest.mark.parametrize("n_q", [1, 4])
def test_best_qadic_is_optimal(p, m, n_q):
    try:
        best = best_qadic(p, m, n_q)
    except InfeasibleError:
        # nothing with k = 1 fits, so nothing fits at all
        q = 1 << (n_q * (p - 1) ** 2).bit_length()
        assert q >= 1 << m
        return
    assert validate(p, best.q, best.k, n_q, m) is None
    assert best.q & (best.q - 1) == 0
    # brute force: no larger k is feasible with any power-of-two q
    for k in range(best.k + 1, m):
        assert all(validate(p, 1 << b, k, n_q, m) is not None for b in range(1, m + 1))
    # and with that k no smaller power of two works
    assert validate(p, best.q // 2, best.k, n_q, m) is not None


def test_best_qadic_known_points():
    assert (best_qadic(3, 53).q, best_qadic(3, 53).k) == (32, 5)
    assert best_qadic(2, 53).k == 7
    assert best_qadic(1009, 128).k == 3
    assert best_qadic(1009, 128, prefer_power_of_two=False).q == 3 * 1008 ** 2 + 1


def test_best_qadic_headroom():
    plain = best_qadic(3, 53)
    roomy = best_qadic(3, 53, headroom=2)
    assert roomy.q > roomy.digit_bound + 2
    assert roomy.k <= plain.k


def test_best_qadic_errors():
    with pytest.raises(NotPrimeError):
        best_qadic(9, 53)
    with pytest.raises(InfeasibleError):
        best_qadic(2 ** 31 - 1, 53)


def test_delayed_bound():
    assert delayed_bound(3, 53) == (2 ** 54 - 1) // 4
    assert delayed_bound(2, 53) == 2 ** 54 - 1
    n_d = delayed_bound(1009, 53)
    assert n_d * 1008 ** 2 < 2 ** 54 <= (n_d + 1) * 1008 ** 2
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert delayed_bound(2 ** 31 - 1, 53) == 0
    assert caught


@given(st.sampled_from(SMALL_PRIMES), st.integers(24, 200))
def test_delayed_bound_is_tight(p, m):
    n_d = delayed_bound(p, m)
    assert n_d * (p - 1) ** 2 < 2 ** (m + 1)
    assert (n_d + 1) * (p - 1) ** 2 >= 2 ** (m + 1)


def test_delayed_params():
    assert DelayedParams.for_prime(3, 53).n_d == delayed_bound(3, 53)
    with pytest.raises(BoundViolation):
        DelayedParams(3, 53, 2 ** 60)


def test_validate_reference_cases():
    assert validate(2, 2, 1, 1, 53) is None
    assert validate(3, 32, 4, 1, 53) is None


@given(st.sampled_from(SMALL_PRIMES), st.integers(1, 4), st.integers(20, 140))
def test_best_qadic_monotone_in_m(p, n_q, m):
    try:
        k = best_qadic(p, m, n_q).k
    except InfeasibleError:
        return
    assert best_qadic(p, m + 1, n_q).k >= k
    chosen = best_qadic(p, m, n_q)
    assert chosen.q > chosen.digit_bound and chosen.q ** (2 * chosen.k - 1) < 2 ** m
