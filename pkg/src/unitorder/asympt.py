"""Partition sums, cyclotomic values, prime windows and the cycle-index series.

sigma1(b) sums X1(pi)/prod(pi) over partitions of b into distinct odd parts,
with X1(pi) = lcm(q^d + 1); sigma2(s) sums X2(lam)/prod(lam) over partitions
of s into distinct parts, with X2(lam) = lcm(q^{2d} - 1).  Both are exact.

Log-space quantities use mpmath at LOG_PREC bits; inequalities between
exact and log-space values are decided with interval arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import mpmath
import numpy as np

from .intmath import GuardError, cyclotomic_value, divisors, first_primes, is_prime, lcm
from .matrixgrp import BoundViolation

PARTITION_GUARD = 200
WINDOW_GUARD = 13
DIRECT_GUARD = 10**8
EXACT_DENSITY_LIMIT = 2000
EXACT_KAPPA_BITS = 1 << 20
LOG_PREC = 128

DISTINCT = "distinct"
DISTINCT_ODD = "distinct-odd"
UNRESTRICTED = "unrestricted"


# -- partitions ----------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]
    flavor: str = UNRESTRICTED

    def __post_init__(self):
        parts = self.parts
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be positive and weakly decreasing: {parts}")
        if self.flavor in (DISTINCT, DISTINCT_ODD) and len(set(parts)) != len(parts):
            raise ValueError(f"repeated part in a {self.flavor} partition: {parts}")
        if self.flavor == DISTINCT_ODD and any(p % 2 == 0 for p in parts):
            raise ValueError(f"even part in a distinct-odd partition: {parts}")
        if self.flavor not in (DISTINCT, DISTINCT_ODD, UNRESTRICTED):
            raise ValueError(f"unknown flavor {self.flavor!r}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict[int, int]:
        """c_i: the number of parts of size i."""
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


def _check_partition_guard(s: int):
    if s < 0:
        raise ValueError("partition size must be nonnegative")
    if s > PARTITION_GUARD:
        raise GuardError(f"partition guard: {s} > {PARTITION_GUARD}")


def _gen(rem: int, cap: int, step: int, distinct: bool, odd: bool, prefix: list):
    if rem == 0:
        yield tuple(prefix)
        return
    top = min(rem, cap)
    if odd and top % 2 == 0:
        top -= 1
    for d in range(top, 0, -step):
        prefix.append(d)
        yield from _gen(rem - d, d - 1 if distinct else d, step, distinct, odd, prefix)
        prefix.pop()


def iter_partitions(s: int, flavor: str = UNRESTRICTED) -> Iterator[Partition]:
    """Partitions of s in reverse lexicographic order, (s) first."""
    _check_partition_guard(s)
    distinct = flavor in (DISTINCT, DISTINCT_ODD)
    odd = flavor == DISTINCT_ODD
    for parts in _gen(s, s, 2 if odd else 1, distinct, odd, []):
        yield Partition(parts, flavor)


def partitions_distinct(s: int) -> list[Partition]:
    return list(iter_partitions(s, DISTINCT))


def partitions_distinct_odd(b: int) -> list[Partition]:
    return list(iter_partitions(b, DISTINCT_ODD))


def partitions_all(b: int) -> list[Partition]:
    return list(iter_partitions(b, UNRESTRICTED))


def _as_parts(pi, flavor: str) -> tuple[int, ...]:
    if isinstance(pi, Partition):
        if pi.flavor != flavor:
            # accept any partition that happens to satisfy the constraint
            pi = Partition(pi.parts, flavor)
        return pi.parts
    return Partition(tuple(sorted(pi, reverse=True)), flavor).parts


def X1_of_partition(pi, q: int) -> int:
    """lcm of q^d + 1 over the parts of a distinct-odd partition."""
    return lcm(*(q**d + 1 for d in _as_parts(pi, DISTINCT_ODD)))


def X2_of_partition(lam, q: int) -> int:
    """lcm of q^{2d} - 1 over the parts of a distinct partition."""
    return lcm(*(q ** (2 * d) - 1 for d in _as_parts(lam, DISTINCT)))


def z_weight(pi: Partition) -> Fraction:
    """z_pi = 1 / prod_i c_i! i^{c_i}."""
    den = 1
    for i, c in pi.multiplicities().items():
        den *= math.factorial(c) * i**c
    return Fraction(1, den)


# -- sigma sums ----------------------------------------------------------------

def _sigma_dp(S: int, parts: list[int], xval) -> list[Fraction]:
    """sum over subsets of ``parts`` with sum s of lcm(xval(d))/prod(d), for every s <= S.

    Parts are added largest first.  A state keeps gcd(L, M) instead of the
    running lcm L, where M is the lcm of xval over the parts still to come:
    any later part only interacts with L through that gcd, so the weight
    sum of L can be carried forward exactly.
    """
    parts = sorted(parts, reverse=True)
    xs = [xval(d) for d in parts]
    tail = [1] * (len(parts) + 1)
    for i in range(len(parts) - 1, -1, -1):
        tail[i] = lcm(tail[i + 1], xs[i])
    states: dict[tuple[int, int], Fraction] = {(0, 1): Fraction(1)}
    for i, d in enumerate(parts):
        x, nxt = xs[i], tail[i + 1]
        new: dict[tuple[int, int], Fraction] = {}
        for (s, g), w in states.items():
            key = (s, math.gcd(g, nxt))
            new[key] = new.get(key, 0) + w
            if s + d <= S:
                c = math.gcd(g, x)
                key = (s + d, math.gcd(g // c * x, nxt))
                new[key] = new.get(key, 0) + w * Fraction(x // c, d)
        states = new
    out = [Fraction(0)] * (S + 1)
    for (s, _), w in states.items():
        out[s] += w
    return out


_SIGMA_CACHE: dict[tuple[int, int], tuple[Fraction, ...]] = {}


def _sigma_table(kind: int, q: int, S: int) -> tuple[Fraction, ...]:
    # one table per (kind, q), grown in blocks of 64 so sweeps over b stay cheap
    table = _SIGMA_CACHE.get((kind, q))
    if table is None or len(table) <= S:
        size = min(PARTITION_GUARD, -(-S // 64) * 64)
        if kind == 1:
            table = tuple(_sigma_dp(size, list(range(1, size + 1, 2)), lambda d: q**d + 1))
        else:
            table = tuple(_sigma_dp(size, list(range(1, size + 1)), lambda d: q ** (2 * d) - 1))
        _SIGMA_CACHE[(kind, q)] = table
    return table[: S + 1]


def sigma1_table(b_max: int, q: int) -> tuple[Fraction, ...]:
    """(sigma1(0), ..., sigma1(b_max)); sigma1(0) = 1 from the empty partition."""
    _check_partition_guard(b_max)
    return _sigma_table(1, q, b_max)


def sigma2_table(s_max: int, q: int) -> tuple[Fraction, ...]:
    _check_partition_guard(s_max)
    return _sigma_table(2, q, s_max)


def sigma1(b: int, q: int) -> Fraction:
    _check_partition_guard(b)
    return _sigma_table(1, q, b)[b]


def sigma2(s: int, q: int) -> Fraction:
    _check_partition_guard(s)
    return _sigma_table(2, q, s)[s]


def sigma1_bruteforce(b: int, q: int) -> Fraction:
    return sum((Fraction(X1_of_partition(p, q), math.prod(p.parts))
                for p in iter_partitions(b, DISTINCT_ODD)), Fraction(0))


def sigma2_bruteforce(s: int, q: int) -> Fraction:
    return sum((Fraction(X2_of_partition(p, q), math.prod(p.parts))
                for p in iter_partitions(s, DISTINCT)), Fraction(0))


def _log_fraction(x: Fraction) -> mpmath.mpf:
    with mpmath.workprec(LOG_PREC):
        return mpmath.log(x.numerator) - mpmath.log(x.denominator)


def sigma1_trend(b: int, q: int) -> float:
    """log(sigma1(b) b / q^b) / log b."""
    with mpmath.workprec(LOG_PREC):
        return float(_log_fraction(sigma1(b, q) * b / Fraction(q) ** b) / mpmath.log(b))


def sigma2_trend(s: int, q: int) -> float:
    """log(sigma2(s) s / q^{2s}) / log s."""
    with mpmath.workprec(LOG_PREC):
        return float(_log_fraction(sigma2(s, q) * s / Fraction(q) ** (2 * s)) / mpmath.log(s))


# -- cyclotomic values ---------------------------------------------------------

def phi_2(q: int) -> int:
    return q + 1


def cyclotomic_2p(p: int, q: int) -> int:
    """Phi_{2p}(q) = (q^p + 1)/(q + 1) for an odd prime p."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    value, rem = divmod(q**p + 1, q + 1)
    assert rem == 0
    return value


def phi_2d(d: int, q: int) -> int:
    """Phi_{2d}(q) for any d >= 1."""
    return cyclotomic_value(2 * d, q)


def window_phi(p: int, q: int) -> int:
    """Phi_{2p}(q) for a window prime; p = 2 gives Phi_4(q) = q^2 + 1."""
    return q * q + 1 if p == 2 else cyclotomic_2p(p, q)


def check_cyclotomic_identity(q: int, d_max: int = 15) -> bool:
    """q^d + 1 == prod_{e | d} Phi_{2e}(q) for every odd d <= d_max."""
    for d in range(1, d_max + 1, 2):
        if q**d + 1 != math.prod(phi_2d(e, q) for e in divisors(d)):
            raise AssertionError(f"cyclotomic identity fails at d={d}, q={q}")
    return True


def lambda_set(pi) -> set[int]:
    """All d dividing some part."""
    return {d for part in pi for d in divisors(part)}


def nu(pi, d: int) -> int:
    """Number of parts that are multiples of d."""
    return sum(1 for part in pi if part % d == 0)


def w(pi, d: int) -> int:
    return max(0, nu(pi, d) - 1)


def lcm_phi_bound(pi, q: int) -> int:
    """prod over d in Lambda(pi) of Phi_{2d}(q), an upper bound for X1(pi)."""
    return math.prod(phi_2d(d, q) for d in lambda_set(pi))


# -- prime window --------------------------------------------------------------

@dataclass(frozen=True)
class PrimeWindow:
    xi: int
    q: int
    primes: tuple[int, ...]
    log_kappa: mpmath.mpf
    density_R: Fraction | mpmath.mpf

    @property
    def period(self) -> int:
        return math.prod(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)


def _upper_index(xi: int) -> int:
    with mpmath.workprec(LOG_PREC):
        return int(mpmath.floor(mpmath.exp(xi)))


def _log_window_phi(p: int, q: int) -> mpmath.mpf:
    # log((q^p+1)/(q+1)) = p log q + log1p(q^-p) - log(q+1); Phi_4 handled the same way
    if p == 2:
        return 2 * mpmath.log(q) + mpmath.log1p(mpmath.mpf(q) ** -2)
    tail = mpmath.log1p(mpmath.mpf(q) ** -p) if p * math.log2(q) < 2 * LOG_PREC else 0
    return p * mpmath.log(q) + tail - mpmath.log(q + 1)


def prime_window(xi: int, q: int = 2) -> PrimeWindow:
    """Primes p_xi, ..., p_floor(e^xi) (p_1 = 2) with log kappa and the coprime density."""
    if xi < 1:
        raise ValueError("xi must be a positive integer")
    if xi > WINDOW_GUARD:
        raise GuardError(f"prime window guard: xi={xi} > {WINDOW_GUARD}")
    return _prime_window(xi, q)


@lru_cache(maxsize=32)
def _prime_window(xi: int, q: int) -> PrimeWindow:
    top = _upper_index(xi)
    primes = tuple(first_primes(top)[xi - 1:])
    with mpmath.workprec(LOG_PREC):
        log_kappa = mpmath.fsum(_log_window_phi(p, q) for p in primes)
        if len(primes) <= EXACT_DENSITY_LIMIT:
            density: Fraction | mpmath.mpf = math.prod((Fraction(p - 1, p) for p in primes), start=Fraction(1))
        else:
            density = mpmath.exp(mpmath.fsum(mpmath.log1p(-mpmath.mpf(1) / p) for p in primes))
    return PrimeWindow(xi, q, primes, log_kappa, density)


def _window_primes(window) -> tuple[int, ...]:
    if isinstance(window, PrimeWindow):
        return window.primes
    return tuple(window)


@lru_cache(maxsize=256)
def _phi_inverses(primes: tuple[int, ...], q: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, window_phi(p, q)) for p in primes)


def G_function(k: int, window, q: int) -> Fraction:
    """Product of 1/Phi_{2p}(q) over window primes p dividing k (all of them for k = 0)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    primes = _window_primes(window)
    out = Fraction(1)
    for p, inv in zip(primes, _phi_inverses(primes, q)):
        if k % p == 0:
            out *= inv
    return out


def kappa(window, q: int) -> int:
    """Exact kappa = prod Phi_{2p}(q); guarded on total size."""
    primes = _window_primes(window)
    if sum(primes) * math.log2(q) > EXACT_KAPPA_BITS:
        raise GuardError("kappa too large for exact evaluation")
    return math.prod(window_phi(p, q) for p in primes)


# -- Fourier mean --------------------------------------------------------------

def _a0_product(primes, q) -> Fraction:
    if sum(primes) * math.log2(q) > EXACT_KAPPA_BITS:
        raise GuardError("window too large for the exact product formula")
    out = Fraction(1)
    for p, inv in zip(primes, _phi_inverses(tuple(primes), q)):
        out *= Fraction(p - 1, p) + inv / p
    return out


def _mask_counts(primes, N: int, chunk: int = 1 << 20) -> np.ndarray:
    """How many v in [0, N) are divisible by exactly the window primes in each bitmask."""
    counts = np.zeros(1 << len(primes), dtype=np.int64)
    for start in range(0, N, chunk):
        v = np.arange(start, min(N, start + chunk), dtype=np.int64)
        mask = np.zeros(len(v), dtype=np.int64)
        for i, p in enumerate(primes):
            mask |= (v % p == 0).astype(np.int64) << i
        counts += np.bincount(mask, minlength=len(counts))
    return counts


def _a0_direct(primes, q) -> Fraction:
    N = math.prod(primes)
    if N > DIRECT_GUARD:
        raise GuardError(f"direct Fourier guard: period {N} > {DIRECT_GUARD}")
    counts = _mask_counts(primes, N)
    invs = _phi_inverses(tuple(primes), q)
    total = Fraction(0)
    for mask, c in enumerate(counts.tolist()):
        if c:
            g = math.prod((invs[i] for i in range(len(primes)) if mask >> i & 1), start=Fraction(1))
            total += c * g
    return total / N


def fourier_a0(window, q: int, mode: str = "product") -> Fraction:
    """Mean of G over one period N = prod(window)."""
    primes = _window_primes(window)
    if mode == "product":
        return _a0_product(primes, q)
    if mode == "direct":
        return _a0_direct(primes, q)
    raise ValueError(f"mode must be 'product' or 'direct', not {mode!r}")


def fourier_a0_approx(window, q: int) -> mpmath.mpf:
    """The product formula for a0 at LOG_PREC bits; works for every guarded window."""
    primes = _window_primes(window)
    with mpmath.workprec(LOG_PREC):
        total = mpmath.mpf(0)
        for p in primes:
            inv_phi = mpmath.exp(-_log_window_phi(p, q))
            total += mpmath.log1p((inv_phi - 1) / p)
        return +mpmath.exp(total)


def fourier_coeffs(window, q: int, limit: int = 10**6) -> np.ndarray:
    """All a_l (floating point) by FFT over one period; toy windows only."""
    primes = _window_primes(window)
    N = math.prod(primes)
    if N > limit:
        raise GuardError(f"Fourier spectrum guard: period {N} > {limit}")
    g = np.array([float(G_function(v, primes, q)) for v in range(N)])
    return np.fft.fft(g) / N


# -- cycle index series --------------------------------------------------------

def series_prefix(b_max: int, window, q: int) -> list[Fraction]:
    """c_0..c_b_max of exp(sum_k G(k) z^k / k), via n c_n = sum_k G(k) c_{n-k}."""
    _check_partition_guard(b_max)
    primes = _window_primes(window)
    G = [G_function(k, primes, q) for k in range(b_max + 1)]
    c = [Fraction(1)]
    for n in range(1, b_max + 1):
        c.append(sum((G[k] * c[n - k] for k in range(1, n + 1)), Fraction(0)) / n)
    return c


def series_coeff(b: int, window, q: int) -> Fraction:
    return series_prefix(b, window, q)[b]


def series_coeff_by_partitions(b: int, window, q: int) -> Fraction:
    """Same coefficient as sum over all partitions of z_pi prod G(k)^{c_k}."""
    primes = _window_primes(window)
    total = Fraction(0)
    for pi in iter_partitions(b):
        term = z_weight(pi)
        for k, c in pi.multiplicities().items():
            term *= G_function(k, primes, q) ** c
        total += term
    return total


# -- bound report --------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    b: int
    xi: int
    q: int
    sigma1: Fraction
    log_sigma1: str
    log_rhs: str
    holds: bool


def _iv_log_fraction(x: Fraction):
    iv = mpmath.iv
    return iv.log(iv.mpf(x.numerator)) - iv.log(iv.mpf(x.denominator))


def sigma1_bound_report(b: int, xi: int, q: int) -> BoundReport:
    """Compare log sigma1(b) with log(4 kappa q^b c_b) using outward-rounded intervals.

    Raises BoundViolation when the inequality cannot be certified.
    """
    win = prime_window(xi, q)
    s1 = sigma1(b, q)
    cb = series_coeff(b, win, q)
    iv = mpmath.iv
    old = iv.prec
    iv.prec = LOG_PREC
    try:
        lk = sum((iv.mpf(p) * iv.log(q) + iv.log(1 + iv.mpf(q) ** -p) - iv.log(q + 1)
                  if p != 2 else iv.log(q * q + 1) for p in win.primes), iv.mpf(0))
        rhs = iv.log(4) + lk + b * iv.log(q) + _iv_log_fraction(cb)
        if s1 == 0:
            holds, left_text = True, "-inf"
        else:
            left = _iv_log_fraction(s1)
            holds = left.b <= rhs.a
            left_text = mpmath.nstr(mpmath.mpf(left.mid), 15)
        rhs_text = mpmath.nstr(mpmath.mpf(rhs.mid), 15)
    finally:
        iv.prec = old
    if not holds:
        raise BoundViolation(f"sigma1({b}) exceeds 4 kappa q^b c_b for xi={xi}, q={q}")
    return BoundReport(b, xi, q, s1, left_text, rhs_text, holds)


def sigma1_bound_exact(b: int, xi: int, q: int) -> bool:
    """The same inequality decided in exact rationals, for windows small enough."""
    win = prime_window(xi, q)
    return sigma1(b, q) <= 4 * kappa(win, q) * Fraction(q) ** b * series_coeff(b, win, q)


def iter_windows(primes: Iterable[int]):
    """Every nonempty contiguous run of the given primes, for toy sweeps."""
    primes = list(primes)
    for i in range(len(primes)):
        for j in range(i + 1, len(primes) + 1):
            yield tuple(primes[i:j])
