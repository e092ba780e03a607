import itertools
import pickle

import numpy as np
import pytest
from hypothesis import given, strategies as st

from unitorder.ffield import (
    FieldElement,
    decode,
    encode,
    frobenius_q,
    is_irreducible_mod_p,
    make_field,
    mult_order,
    unitary_field,
)
from unitorder.intmath import GuardError, divisors

SMALL_FIELDS = [(p, e) for p in (2, 3, 5, 7, 11, 13) for e in range(1, 9) if p**e <= 256]
EVEN_FIELDS = [(p, e) for p, e in SMALL_FIELDS if e % 2 == 0]


def naive_mul(F, a, b):
    """Schoolbook product of the coefficient vectors, reduced by the modulus."""
    p, e = F.p, F.e
    x, y = F(a).coeffs, F(b).coeffs
    prod = [0] * (2 * e - 1)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            prod[i + j] = (prod[i + j] + xi * yj) % p
    mod = list(F.modulus)  # a_0..a_{e-1}, monic
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(e):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return sum(c * p**i for i, c in enumerate(prod[:e]))


def tables(F):
    Q = F.order
    return np.array(F.add_table).reshape(Q, Q), np.array(F.mul_table).reshape(Q, Q)


def test_examples():
    F4 = make_field(2, 2)
    assert F4.order == 4 and F4.modulus == (1, 1, 1)
    assert make_field(3, 1).modulus == (0, 1)
    assert make_field(2, 4).order == 16
    w = F4(2)
    assert w * w**2 == F4.one
    assert frobenius_q(w) == w**2 == F4(3)
    assert mult_order(w) == 3 and mult_order(F4.one) == 1


def test_make_field_errors_and_identity():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(GuardError):
        make_field(2, 25)
    assert make_field(3, 2) is make_field(3, 2)
    assert pickle.loads(pickle.dumps(make_field(3, 2))) == make_field(3, 2)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_modulus_is_smallest_irreducible(p, e):
    F = make_field(p, e)
    assert is_irreducible_mod_p(list(F.modulus), p)
    # every monic of degree e with a smaller (a_{e-1}, ..., a_0) code is reducible
    target = sum(c * p**i for i, c in enumerate(F.modulus[:e]))
    for code in range(target):
        coeffs = [(code // p**i) % p for i in range(e)] + [1]
        assert not is_irreducible_mod_p(coeffs, p)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, e):
    F = make_field(p, e)
    Q = F.order
    A, M = tables(F)
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[:, 0] == np.arange(Q)).all() and (M[:, 1] == np.arange(Q)).all()
    assert (M[:, 0] == 0).all()
    # every row of the addition table and every nonzero row of the product table is a permutation
    assert (np.sort(A, axis=1) == np.arange(Q)).all()
    assert (np.sort(M[1:, 1:], axis=1) == np.arange(1, Q)).all()
    # associativity and distributivity over all triples, one slab per a
    for a in range(Q):
        assert (A[A[a], :] == A[a][A]).all()
        assert (M[M[a], :] == M[a][M]).all()
        assert (M[a][A] == A[M[a][:, None], M[a][None, :]]).all()
    for a in range(1, Q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.power(a, Q - 1) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_product_matches_schoolbook(p, e):
    F = make_field(p, e)
    Q = F.order
    pairs = itertools.product(range(Q), repeat=2) if Q <= 64 else zip(range(Q), reversed(range(Q)))
    for a, b in pairs:
        assert F.mul(a, b) == naive_mul(F, a, b)


@pytest.mark.parametrize("p,e", EVEN_FIELDS)
def test_frobenius_is_involutive_automorphism(p, e):
    F = make_field(p, e)
    Q, q = F.order, F.q
    fr = np.array([F.frobenius_q(a) for a in range(Q)])
    A, M = tables(F)
    assert (fr[fr] == np.arange(Q)).all()
    assert (fr[A] == A[fr[:, None], fr[None, :]]).all()
    assert (fr[M] == M[fr[:, None], fr[None, :]]).all()
    fixed = [a for a in range(Q) if fr[a] == a]
    assert len(fixed) == q and fixed == F.subfield_codes()
    fs = set(fixed)
    assert all(F.add(a, b) in fs and F.mul(a, b) in fs for a in fixed for b in fixed)
    for a in range(Q):
        assert F.frobenius_q(a) == F.power(a, q)


def test_frobenius_needs_even_degree():
    with pytest.raises(ValueError):
        make_field(2, 3).frobenius_q(1)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_order_census_matches_totient(p, e):
    F = make_field(p, e)
    N = F.order - 1
    counts = {}
    for a in range(1, F.order):
        k = F.mult_order(a)
        assert N % k == 0
        counts[k] = counts.get(k, 0) + 1
    from sympy import totient
    assert counts == {d: int(totient(d)) for d in divisors(N)}


def test_mult_order_of_zero():
    with pytest.raises(ZeroDivisionError):
        make_field(2, 2).mult_order(0)


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (5, 1), (2, 8)])
def test_encode_roundtrip(p, e):
    F = make_field(p, e)
    assert [encode(decode(i, F)) for i in range(F.order)] == list(range(F.order))
    assert decode(0, F) == F.zero
    with pytest.raises(ValueError):
        decode(F.order, F)


def test_mismatched_specs():
    with pytest.raises(ValueError):
        make_field(2, 2)(1) + make_field(3, 2)(1)


def test_unitary_field():
    assert unitary_field(3) == make_field(3, 2)
    assert unitary_field(4) == make_field(2, 4)


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_large_field_distributivity(a, b, c):
    # F_{2^16} uses log tables rather than flat tables
    F = make_field(2, 16)
    x, y, z = FieldElement(F, a), FieldElement(F, b), FieldElement(F, c)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    if a:
        assert x / x == F.one
    assert frobenius_q(frobenius_q(x)) == x


@given(st.integers(1, 3**10 - 1), st.integers(0, 10**30))
def test_power_reduces_exponent(a, k):
    F = make_field(3, 10)
    assert F.power(a, k) == F.power(a, k % (F.order - 1))
