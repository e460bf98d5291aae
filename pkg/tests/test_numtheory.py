from hypothesis import given, strategies as st

from tracediv.numtheory import ceil_div, digit_sum, digits, int_valuation, is_prime, multiplicative_order, prime_factors


def test_small_values():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(3**30 - 1) == sorted(set(prime_factors(3**30 - 1)))
    assert int_valuation(0, 2) is None
    assert int_valuation(48, 2) == 4
    assert digit_sum(7, 2) == 3 and digit_sum(8, 3) == 4
    assert digits(5, 2, 4) == [1, 0, 1, 0]
    assert multiplicative_order(2, 7) == 3 and multiplicative_order(3, 31) == 30


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_digit_sum_congruence(n, p):
    # S_p(n) = n mod p-1 and S_p(n) <= n
    assert (digit_sum(n, p) - n) % (p - 1) == 0
    assert digit_sum(n, p) <= n


@given(st.integers(1, 10**6), st.integers(1, 1000))
def test_ceil_div(a, b):
    assert ceil_div(a, b) * b >= a > (ceil_div(a, b) - 1) * b
