import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from unitorder import asympt as A
from unitorder.intmath import GuardError, first_primes, is_prime, primes_up_to


def parts(ps):
    return [p.parts for p in ps]


# -- partitions ----------------------------------------------------------------

def test_partition_examples():
    assert parts(A.partitions_distinct(5)) == [(5,), (4, 1), (3, 2)]
    assert parts(A.partitions_distinct_odd(8)) == [(7, 1), (5, 3)]
    assert A.partitions_distinct_odd(2) == []
    assert parts(A.partitions_distinct(0)) == [()]


def count_distinct(s, odd=False):
    # coefficient of z^s in prod (1 + z^k), an independent count
    c = [1] + [0] * s
    for k in range(1, s + 1, 2 if odd else 1):
        for t in range(s, k - 1, -1):
            c[t] += c[t - k]
    return c[s]


@pytest.mark.parametrize("s", [0, 1, 2, 7, 15, 30, 45])
def test_partition_counts_and_order(s):
    d = parts(A.partitions_distinct(s))
    o = parts(A.partitions_distinct_odd(s))
    assert len(d) == len(set(d)) == count_distinct(s)
    assert len(o) == len(set(o)) == count_distinct(s, odd=True)
    assert d == sorted(d, reverse=True) and o == sorted(o, reverse=True)
    assert all(sum(p) == s and len(set(p)) == len(p) for p in d)
    assert all(x % 2 for p in o for x in p)
    u = parts(A.partitions_all(min(s, 20)))
    assert len(u) == len(set(u))


def test_partition_guard():
    with pytest.raises(GuardError):
        A.partitions_distinct(201)
    with pytest.raises(GuardError):
        A.sigma1(201, 2)


def test_X_of_partition():
    assert A.X1_of_partition((3, 1), 2) == 9
    assert A.X2_of_partition((1,), 2) == 3
    assert A.X1_of_partition((), 2) == 1
    with pytest.raises(ValueError):
        A.X1_of_partition((2,), 2)
    with pytest.raises(ValueError):
        A.X2_of_partition((1, 1), 2)


# -- sigma sums ----------------------------------------------------------------------

def test_sigma_examples():
    assert A.sigma1(1, 2) == 3
    assert A.sigma1(2, 2) == 0
    assert A.sigma1(4, 2) == 3
    assert A.sigma2(1, 2) == 3
    assert A.sigma2(3, 2) == Fraction(57, 2)
    assert A.sigma2(0, 2) == 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_sigma_tables_match_partition_sums(q):
    for s in range(0, 36):
        assert A.sigma1(s, q) == A.sigma1_bruteforce(s, q)
        assert A.sigma2(s, q) == A.sigma2_bruteforce(s, q)


def test_sigma_fresh_tables_agree():
    # a table grown to 128 agrees with a table built just for 50
    big = A.sigma2_table(100, 2)
    small = A._sigma_dp(50, list(range(1, 51)), lambda d: 2 ** (2 * d) - 1)
    assert list(big[:51]) == small


@pytest.mark.parametrize("b", range(20, 121, 10))
def test_trends(b):
    assert A.sigma1_trend(b, 2) < 1
    assert A.sigma2_trend(b, 2) < 1


# -- cyclotomic identities ---------------------------------------------------------------

def test_cyclotomic_examples():
    assert A.cyclotomic_2p(3, 2) == 3
    assert A.cyclotomic_2p(5, 2) == 11
    assert A.phi_2(2) == 3
    assert A.phi_2d(1, 2) * A.phi_2d(3, 2) * A.phi_2d(5, 2) * A.phi_2d(15, 2) == 2**15 + 1
    for bad in (2, 9, 1, 15):
        with pytest.raises(ValueError):
            A.cyclotomic_2p(bad, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_cyclotomic_identity(q):
    assert A.check_cyclotomic_identity(q, 15)


@pytest.mark.parametrize("q", [2, 3])
def test_numerator_bound(q):
    for b in range(1, 61):
        for pi in A.iter_partitions(b, A.DISTINCT_ODD):
            assert math.prod(q**x + 1 for x in pi) < 4 * q**b


@pytest.mark.parametrize("q", [2, 3])
def test_lcm_against_phi_product(q):
    for b in range(1, 31):
        for pi in A.iter_partitions(b, A.DISTINCT_ODD):
            bound = A.lcm_phi_bound(pi, q)
            assert A.X1_of_partition(pi, q) <= bound
            num = math.prod(q**x + 1 for x in pi)
            den = math.prod(A.phi_2d(d, q) ** A.w(pi, d) for d in A.lambda_set(pi))
            assert num == bound * den
            assert all(A.nu(pi, d) >= 1 for d in A.lambda_set(pi))


def test_z_weight_for_distinct_parts():
    for b in range(0, 41):
        for pi in A.iter_partitions(b, A.DISTINCT):
            assert A.z_weight(pi) == Fraction(1, math.prod(pi.parts))


def test_z_weights_sum_to_one():
    # sum of z_pi over all partitions of b is 1 (class equation for the symmetric group)
    for b in range(0, 16):
        assert sum(A.z_weight(p) for p in A.iter_partitions(b)) == 1


# -- prime window ---------------------------------------------------------------------

def test_window_examples():
    assert A.prime_window(2).primes == (3, 5, 7, 11, 13, 17)
    assert A.prime_window(1).primes == (2, 3)
    assert A.prime_window(3).primes == tuple(first_primes(20)[2:])
    with pytest.raises(GuardError):
        A.prime_window(14)


def test_window_consecutive_and_density():
    for xi in range(1, 9):
        w = A.prime_window(xi)
        assert all(is_prime(p) for p in w.primes)
        full = primes_up_to(w.primes[-1])
        assert tuple(full[xi - 1:]) == w.primes
        assert 0 < w.density_R < 1
        if isinstance(w.density_R, Fraction):
            assert w.density_R == math.prod(Fraction(p - 1, p) for p in w.primes)
    dens = [float(A.prime_window(xi).density_R) for xi in range(2, 9)]
    # density rises from xi=2 to xi=3 and falls from there on
    assert dens[1] > dens[0]
    assert all(a > b for a, b in zip(dens[1:], dens[2:]))


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("xi", [1, 2, 3, 4])
def test_log_kappa_matches_exact(xi, q):
    w = A.prime_window(xi, q)
    exact = A.kappa(w, q)
    with mpmath.workprec(200):
        assert abs(w.log_kappa - mpmath.log(exact)) < mpmath.mpf(2) ** -100 * abs(mpmath.log(exact))


def test_large_window_density_is_small():
    w = A.prime_window(9)
    assert isinstance(w.density_R, mpmath.mpf)
    assert w.density_R < A.prime_window(8).density_R


# -- G and the Fourier mean -------------------------------------------------------------

def test_G_examples():
    assert A.G_function(7, (3, 5), 2) == 1
    assert A.G_function(6, (3, 5), 2) == Fraction(1, 3)
    assert A.G_function(15, (3, 5), 2) == Fraction(1, 33)
    assert A.G_function(0, (3, 5), 2) == Fraction(1, 33)


@given(st.integers(0, 10**9), st.integers(2, 4), st.sampled_from([2, 3]))
def test_G_bounds(k, xi, q):
    w = A.prime_window(xi, q)
    g = A.G_function(k, w, q)
    assert 0 < g <= 1
    if math.gcd(k, w.period) != 1:
        assert g <= Fraction(q + 1, q ** w.primes[0] + 1)
    else:
        assert g == 1


def test_a0_examples():
    assert A.fourier_a0((3, 5), 2, "direct") == Fraction(7, 11) == A.fourier_a0((3, 5), 2, "product")
    assert A.fourier_a0((), 2, "direct") == 1 == A.fourier_a0((), 2)
    assert A.fourier_a0(A.prime_window(4), 2) < Fraction(1, 2)
    with pytest.raises(GuardError):
        A.fourier_a0(A.prime_window(3), 2, "direct")
    with pytest.raises(ValueError):
        A.fourier_a0((3,), 2, "fft")


def test_a0_by_python_loop():
    # plain loop over one period as a third route
    for w in [(3,), (2, 3), (3, 5, 7), (5, 7, 11)]:
        N = math.prod(w)
        assert sum((A.G_function(v, w, 3) for v in range(N)), Fraction(0)) / N == A.fourier_a0(w, 3, "direct")


@pytest.mark.parametrize("q", [2, 3])
def test_a0_direct_equals_product_small_windows(q):
    for w in A.iter_windows(first_primes(12)):
        if math.prod(w) <= 10**5:
            assert A.fourier_a0(w, q, "direct") == A.fourier_a0(w, q, "product")


def test_a0_approx_matches_exact():
    for xi in (1, 2, 3, 4, 5):
        w = A.prime_window(xi)
        exact = A.fourier_a0(w, 2)
        with mpmath.workprec(200):
            err = abs(A.fourier_a0_approx(w, 2) - mpmath.mpf(exact.numerator) / exact.denominator)
        assert err < mpmath.mpf(10) ** -30


def test_a0_decreases_with_xi():
    vals = [A.fourier_a0_approx(A.prime_window(xi), 2) for xi in range(3, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("w", [(3, 5), (2, 3, 5), (3, 5, 7), (7, 11)])
def test_a0_dominates_other_coefficients(w):
    a = A.fourier_coeffs(w, 2)
    assert abs(a[0] - float(A.fourier_a0(w, 2))) < 1e-12
    assert (np.abs(a[1:]) <= abs(a[0]) + 1e-12).all()


# -- series ------------------------------------------------------------------------

def test_series_examples():
    assert [A.series_coeff(b, (), 2) for b in range(21)] == [1] * 21
    c3 = A.series_coeff(3, (3, 5), 2)
    assert c3 == Fraction(7, 9)
    assert 0 < c3 < 1


def test_series_positive():
    for w in [(3, 5), A.prime_window(2).primes, (2,)]:
        assert all(c > 0 for c in A.series_prefix(50, w, 2))


@pytest.mark.parametrize("b", range(0, 13))
def test_series_matches_cycle_index_sum(b):
    w = A.prime_window(2).primes
    assert A.series_coeff(b, w, 2) == A.series_coeff_by_partitions(b, w, 2)


# -- bound report ---------------------------------------------------------------------

def test_bound_report_example():
    r = A.sigma1_bound_report(4, 2, 2)
    assert r.holds and r.sigma1 == 3
    assert abs(float(r.log_sigma1) - math.log(3)) < 1e-12


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("xi", [2, 3])
def test_bound_sweep(q, xi):
    for b in range(1, 41):
        assert A.sigma1_bound_report(b, xi, q).holds
        assert A.sigma1_bound_exact(b, xi, q)


def test_bound_report_detects_false_claims(monkeypatch):
    # shrinking the series coefficient enough must make the certified comparison fail
    monkeypatch.setattr(A, "series_coeff", lambda b, w, q: Fraction(1, 10**40))
    from unitorder.matrixgrp import BoundViolation
    with pytest.raises(BoundViolation):
        A.sigma1_bound_report(30, 2, 2)
