import math

import pytest
import sympy
from hypothesis import given, strategies as st

from unitorder.intmath import (
    FACTOR_GUARD,
    GuardError,
    cyclotomic_value,
    divisors,
    factorint,
    first_primes,
    is_prime,
    lcm,
    mobius,
    order_by_stripping,
    prime_power,
    primes_up_to,
)


def trial_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_is_prime_matches_trial_division_below_20000():
    assert [n for n in range(20000) if is_prime(n)] == [n for n in range(20000) if trial_is_prime(n)]


@pytest.mark.parametrize("n", [561, 1105, 1729, 2047, 3215031751, 3825123056546413051,
                               318665857834031151167461, 3317044064679887385961981])
def test_pseudoprimes_rejected(n):
    assert not is_prime(n)


@pytest.mark.parametrize("e", [31, 61, 89, 107, 127])
def test_mersenne_primes(e):
    assert is_prime(2**e - 1)
    assert not is_prime(2**e + 1) or e == 1


@given(st.integers(min_value=2, max_value=2**100))
def test_is_prime_agrees_with_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=1, max_value=2**90))
def test_factorint_agrees_with_sympy(n):
    assert factorint(n) == sympy.factorint(n)


def test_factorint_semiprime_of_large_primes():
    p, q = 1000000007, 998244353
    assert factorint(p * q * q) == {q: 2, p: 1}


def test_factor_guard():
    with pytest.raises(GuardError):
        factorint(FACTOR_GUARD)
    with pytest.raises(ValueError):
        factorint(0)


def test_divisors_and_mobius():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_lcm_conventions():
    assert lcm() == 1
    assert lcm(4, 6) == 12
    assert lcm(9, 3) == 9


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert first_primes(7) == [2, 3, 5, 7, 11, 13, 17]
    assert first_primes(10000)[-1] == 104729


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(2) == (2, 1)
    for bad in (1, 6, 12):
        with pytest.raises(ValueError):
            prime_power(bad)


@pytest.mark.parametrize("k", range(1, 41))
@pytest.mark.parametrize("x", [2, 3, 4])
def test_cyclotomic_value_matches_sympy(k, x):
    t = sympy.Symbol("t")
    assert cyclotomic_value(k, x) == sympy.cyclotomic_poly(k, t).subs(t, x)


@given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=2, max_value=10**6))
def test_order_by_stripping_matches_sympy(g, m):
    if math.gcd(g, m) != 1:
        return
    expected = sympy.n_order(g, m) if m > 1 else 1
    N = sympy.totient(m)
    assert order_by_stripping(int(N), lambda t: pow(g, t, m) == 1) == expected
