"""Integer helpers: primality, factorization, lcm, Moebius, prime generation.

Factorization strips primes below 10**6 by trial division and splits the
rest with Brent's variant of Pollard rho.  Primality is deterministic
Miller-Rabin below 3.3e24 and Baillie-PSW above that; inputs are expected
to stay below 2**128.
"""

from __future__ import annotations

import math
from functools import lru_cache, reduce

TRIAL_LIMIT = 10**6
FACTOR_GUARD = 1 << 128

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC = 3317044064679887385961981


class GuardError(ValueError):
    """An input exceeds a desk-scale size guard."""


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(TRIAL_LIMIT))


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes, p_1 = 2."""
    if count <= 0:
        return []
    if count < 6:
        bound = 15
    else:
        lc = math.log(count)
        bound = int(count * (lc + math.log(lc))) + 10
    primes = primes_up_to(bound)
    while len(primes) < count:
        bound *= 2
        primes = primes_up_to(bound)
    return primes[:count]


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < _MR_DETERMINISTIC:
        return _miller_rabin(n, _MR_BASES)
    return _miller_rabin(n, (2,)) and _strong_lucas(n)


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    for c in range(1, 1000):
        y, m, g, r, ys, x = 2, 128, 1, 1, 2, 2
        q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    factors: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            factors[p] = k
            if n == 1 or is_prime(n):
                break
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _brent(m)
        stack += [d, m // d]
    return tuple(sorted(factors.items()))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorint needs a positive integer")
    if n >= FACTOR_GUARD:
        raise GuardError(f"factoring guard: {n.bit_length()}-bit input exceeds 128 bits")
    return dict(_factor_cached(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, k in factorint(n).items():
        divs = [d * p**i for d in divs for i in range(k + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    f = factorint(n)
    if any(k > 1 for k in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def lcm(*values: int) -> int:
    """Least common multiple; the empty lcm is 1."""
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def lcm_all(values) -> int:
    return lcm(*values)


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**l, raising ValueError when q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return p, k


def cyclotomic_value(k: int, x: int) -> int:
    """Phi_k(x) for an integer x >= 2, via the Moebius product over divisors."""
    num, den = 1, 1
    for d in divisors(k):
        mu = mobius(k // d)
        if mu == 1:
            num *= x**d - 1
        elif mu == -1:
            den *= x**d - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def order_by_stripping(group_order: int, is_one) -> int:
    """Least t dividing group_order with is_one(t), given is_one(group_order).

    ``is_one(t)`` must report whether the element raised to t is the identity.
    """
    t = group_order
    for r, k in factorint(group_order).items():
        for _ in range(k):
            if t % r == 0 and is_one(t // r):
                t //= r
            else:
                break
    return t
