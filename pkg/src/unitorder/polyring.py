"""Monic polynomials over F_{q^2}.

Covers arithmetic, the conjugate-reciprocal involution ``tilde``,
enumeration of irreducibles, the J / K+ / K- classification, root orders
tau, factorization, and the lcm statistics X1, X2, X, T, M.

Internally a polynomial is a list of coefficient codes, lowest degree
first, with no trailing zeros (the zero polynomial is ``[]``).
:class:`MonicPoly` is the public immutable value; it stores a_0..a_{d-1}
and leaves the leading 1 implicit.

The canonical order on monic polynomials compares degree first and then
the integer ``code = sum a_j * Q**j`` (Q = q^2), which is lexicographic
on (a_{d-1}, ..., a_0).  It fixes the K+/K- split and every tie-break.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import FieldSpec, FieldElement, unitary_field
from .intmath import GuardError, divisors, factorint, lcm, mobius, order_by_stripping

# Sieve tables hold one flag per monic polynomial of the given degree.
ENUM_GUARD = 1 << 24


class FactorClass(str, enum.Enum):
    J = "J"
    KPLUS = "K+"
    KMINUS = "K-"


def working_field(q: int) -> FieldSpec:
    F = unitary_field(q)
    if F.mul_table is None:
        raise GuardError(f"q={q}: F_{{q^2}} too large for the table-driven polynomial layer (q^2 > 1024)")
    return F


# -- list kernels ------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _add(F, a, b):
    Q, at = F.order, F.add_table
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        if y:
            out[i] = at[out[i] * Q + y]
    return _trim(out)


def _neg(F, a):
    neg = F.neg_table
    return [neg[c] for c in a]


def _sub(F, a, b):
    return _add(F, a, _neg(F, b))


def _scale(F, a, c):
    Q, mt = F.order, F.mul_table
    row = c * Q
    return _trim([mt[row + x] for x in a])


def _mul(F, a, b):
    if not a or not b:
        return []
    Q, at, mt = F.order, F.add_table, F.mul_table
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = x * Q
            for j, y in enumerate(b):
                if y:
                    k = i + j
                    out[k] = at[out[k] * Q + mt[row + y]]
    return _trim(out)


def _make_monic(F, a):
    if not a or a[-1] == 1:
        return a
    return _scale(F, a, F.inv_table[a[-1]])


def _divmod(F, a, b):
    """Euclidean division; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    Q, at, mt, neg = F.order, F.add_table, F.mul_table, F.neg_table
    a = list(a)
    db = len(b) - 1
    inv_lead = F.inv_table[b[-1]]
    if len(a) - 1 < db:
        return [], a
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            c = mt[c * Q + inv_lead]
            quot[i - db] = c
            row = neg[c] * Q
            base = i - db
            for j in range(db):
                y = b[j]
                if y:
                    a[base + j] = at[a[base + j] * Q + mt[row + y]]
            a[i] = 0
    return _trim(quot), _trim(a[:db])


def _mod(F, a, m):
    """Remainder modulo a monic m."""
    Q, at, mt, neg = F.order, F.add_table, F.mul_table, F.neg_table
    dm = len(m) - 1
    if len(a) <= dm:
        return list(a)
    a = list(a)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            row = neg[c] * Q
            base = i - dm
            for j in range(dm):
                y = m[j]
                if y:
                    a[base + j] = at[a[base + j] * Q + mt[row + y]]
    return _trim(a[:dm])


def _mulmod(F, a, b, m):
    return _mod(F, _mul(F, a, b), m)


def _powmod(F, a, k, m):
    result = _mod(F, [1], m)
    base = _mod(F, a, m)
    while k:
        if k & 1:
            result = _mulmod(F, result, base, m)
        k >>= 1
        if k:
            base = _mulmod(F, base, base, m)
    return result


def _gcd(F, a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(F, a, b)[1]
    return _make_monic(F, a)


# -- the public value type -------------------------------------------------

class MonicPoly:
    """Monic polynomial x^d + a_{d-1} x^{d-1} + ... + a_0 over F_{q^2}."""

    __slots__ = ("spec", "coeffs", "_hash")

    def __init__(self, spec: FieldSpec, coeffs):
        self.spec = spec
        self.coeffs = tuple(coeffs)
        self._hash = hash((spec.order, self.coeffs))

    @classmethod
    def from_full(cls, spec, full) -> "MonicPoly":
        if not full or full[-1] != 1:
            raise ValueError("not a monic polynomial")
        return cls(spec, full[:-1])

    @classmethod
    def from_code(cls, spec, code: int, degree: int) -> "MonicPoly":
        Q = spec.order
        coeffs = []
        for _ in range(degree):
            code, r = divmod(code, Q)
            coeffs.append(r)
        if code:
            raise ValueError("code too large for degree")
        return cls(spec, coeffs)

    @classmethod
    def one(cls, spec) -> "MonicPoly":
        return cls(spec, ())

    @classmethod
    def linear(cls, spec, a: int) -> "MonicPoly":
        """x + a."""
        return cls(spec, (a,))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def full(self) -> list[int]:
        return list(self.coeffs) + [1]

    @property
    def code(self) -> int:
        Q, code = self.spec.order, 0
        for c in reversed(self.coeffs):
            code = code * Q + c
        return code

    @property
    def key(self) -> tuple[int, int]:
        return (self.degree, self.code)

    def coefficient(self, j: int) -> FieldElement:
        if j == self.degree:
            return self.spec.one
        return FieldElement(self.spec, self.coeffs[j])

    def __eq__(self, other):
        return isinstance(other, MonicPoly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        _check_same(self, other)
        return MonicPoly.from_full(self.spec, _mul(self.spec, self.full, other.full))

    def __pow__(self, k: int) -> "MonicPoly":
        out = MonicPoly.one(self.spec)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "MonicPoly"):
        """(quotient, remainder) as coefficient lists; remainder need not be monic."""
        _check_same(self, other)
        return _divmod(self.spec, self.full, other.full)

    def __floordiv__(self, other: "MonicPoly") -> "MonicPoly":
        quot, rem = divmod(self, other)
        if rem:
            raise ValueError("polynomial division is not exact")
        return MonicPoly.from_full(self.spec, quot)

    def divides(self, other: "MonicPoly") -> bool:
        return not divmod(other, self)[1]

    def __call__(self, x: int) -> int:
        F = self.spec
        acc = 1
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __repr__(self):
        terms = []
        for j in range(self.degree, -1, -1):
            c = 1 if j == self.degree else self.coeffs[j]
            if c == 0:
                continue
            mono = "1" if j == 0 else ("x" if j == 1 else f"x^{j}")
            if c == 1:
                terms.append(mono)
            else:
                terms.append(f"[{c}]" if j == 0 else f"[{c}]{mono}")
        return " + ".join(terms)


def _check_same(f, g):
    if f.spec != g.spec:
        raise ValueError("polynomials over different fields")


def poly_gcd(f: MonicPoly, g: MonicPoly) -> MonicPoly:
    _check_same(f, g)
    return MonicPoly.from_full(f.spec, _gcd(f.spec, f.full, g.full))


def poly_lcm(f: MonicPoly, g: MonicPoly) -> MonicPoly:
    return (f * g) // poly_gcd(f, g)


# -- tilde -----------------------------------------------------------------

def tilde_full(F, full):
    """Conjugate reciprocal of a monic coefficient list with a_0 != 0."""
    a0 = full[0]
    if a0 == 0:
        raise ValueError("tilde needs a nonzero constant term")
    d = len(full) - 1
    Q, mt, frob = F.order, F.mul_table, F.frob_table
    c = frob[F.inv_table[a0]]
    row = c * Q
    out = [mt[row + frob[full[d - j]]] for j in range(d)]
    out.append(1)
    return out


def tilde(f: MonicPoly) -> MonicPoly:
    """x^d + sum_j a_0^{-q} a_{d-j}^q x^j; roots rho map to rho^{-q}."""
    if f.degree == 0:
        return f
    return MonicPoly.from_full(f.spec, tilde_full(f.spec, f.full))


# -- counting formulas -----------------------------------------------------

def count_irreducible(d: int, r: int) -> int:
    """Number of monic irreducibles of degree d over F_r (x included)."""
    return sum(mobius(k) * r ** (d // k) for k in divisors(d)) // d


def count_I(q: int, d: int) -> int:
    """|I_d| over F_{q^2}, with x excluded at d = 1."""
    return count_irreducible(d, q * q) - (1 if d == 1 else 0)


def count_J(q: int, d: int) -> int:
    """Self-conjugate irreducibles of degree d: 0 for even d, Moebius sum for odd d."""
    if d % 2 == 0:
        return 0
    total = sum(mobius(k) * (q ** (d // k) + 1) for k in divisors(d))
    assert total % d == 0
    return total // d


# -- batched multiplication for the sieves ------------------------------------

@lru_cache(maxsize=None)
def _np_tables(F):
    Q = F.order
    return (np.array(F.add_table, dtype=np.int64).reshape(Q, Q),
            np.array(F.mul_table, dtype=np.int64).reshape(Q, Q))


def _code_digits(codes, Q, m):
    cols = []
    c = np.asarray(codes, dtype=np.int64)
    for _ in range(m):
        cols.append(c % Q)
        c = c // Q
    return cols


def _batch_mul(F, fixed_full, g_codes, m):
    """Codes of fixed * g for every monic g of degree m given by code."""
    Q = F.order
    add2, mul2 = _np_tables(F)
    g_codes = np.asarray(g_codes, dtype=np.int64)
    gcols = _code_digits(g_codes, Q, m)
    ones = np.ones_like(g_codes)
    gcols.append(ones)
    k = len(fixed_full) - 1
    out = np.zeros_like(g_codes)
    scale = 1
    for t in range(k + m):
        acc = np.zeros_like(g_codes)
        for i in range(max(0, t - m), min(k, t) + 1):
            a = fixed_full[i]
            if a:
                acc = add2[acc, mul2[a][gcols[t - i]]]
        out += acc * scale
        scale *= Q
    return out


# -- enumeration ---------------------------------------------------------

def _guard(q, d):
    if (q * q) ** d > ENUM_GUARD:
        raise GuardError(f"enumeration guard: (q^2)^d = {q * q}^{d} exceeds 2^24")


@lru_cache(maxsize=None)
def _irreducible_codes(q: int, d: int):
    F = working_field(q)
    Q = F.order
    if d == 1:
        return np.arange(1, Q, dtype=np.int64)
    _guard(q, d)
    reducible = np.zeros(Q**d, dtype=bool)
    for k in range(1, d // 2 + 1):
        lows = _irreducible_codes(q, k)
        if k == 1:
            lows = np.concatenate([[0], lows])  # x itself
        all_g = np.arange(Q ** (d - k), dtype=np.int64)
        for code in lows.tolist():
            phi = MonicPoly.from_code(F, code, k).full
            reducible[_batch_mul(F, phi, all_g, d - k)] = True
    return np.flatnonzero(~reducible).astype(np.int64)


def irreducibles(q: int, d: int) -> list[MonicPoly]:
    """Monic irreducibles of degree d over F_{q^2} in canonical order, x excluded."""
    if d < 1:
        raise ValueError("degree must be positive")
    F = working_field(q)
    return [MonicPoly.from_code(F, c, d) for c in _irreducible_codes(q, d).tolist()]


@lru_cache(maxsize=None)
def self_conjugate_codes(q: int, m: int):
    """Codes of all monic f of degree m with f(0) != 0 and tilde(f) = f.

    These are exactly the polynomials whose factorization pairs every
    irreducible with its tilde at equal multiplicity, because tilde is
    multiplicative and permutes irreducibles.  Generated directly from the
    coefficient constraints a_j = a_0^{-q} a_{m-j}^q, without factoring.
    """
    F = working_field(q)
    Q, frob, mt = F.order, F.frob_table, F.mul_table
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    half = (m - 1) // 2
    free = np.arange(Q**half, dtype=np.int64)
    fcols = _code_digits(free, Q, half)  # a_1..a_half
    frob_np = np.array(frob, dtype=np.int64)
    _, mul2 = _np_tables(F)
    blocks = []
    for a0 in range(1, Q):
        if F.power(a0, q + 1) != 1:
            continue
        c = frob[F.inv_table[a0]]
        code = np.full_like(free, a0)
        for j in range(1, half + 1):
            aj = fcols[j - 1]
            code = code + aj * Q**j
            code = code + mul2[c][frob_np[aj]] * Q ** (m - j)
        if m % 2 == 0 and m >= 2:
            mids = [a for a in range(Q) if mt[c * Q + frob[a]] == a]
            for a in mids:
                blocks.append(code + a * Q ** (m // 2))
        else:
            blocks.append(code)
    return np.sort(np.concatenate(blocks))


@lru_cache(maxsize=None)
def _j_codes(q: int, d: int):
    F = working_field(q)
    candidates = self_conjugate_codes(q, d)
    composite = []
    for k in range(1, d + 1):
        g_codes = self_conjugate_codes(q, d - k)
        for atom in _atom_polys(q, k, exclude_j=(k == d)):
            composite.append(_batch_mul(F, atom, g_codes, d - k))
    if composite:
        composite = np.unique(np.concatenate(composite))
        return np.setdiff1d(candidates, composite)
    return candidates


def _atom_polys(q, k, exclude_j=False):
    """Full coefficient lists of degree-k conjugate-closed irreducible units."""
    F = working_field(q)
    out = []
    if not exclude_j:
        out += [MonicPoly.from_code(F, c, k).full for c in _j_codes(q, k).tolist()]
    if k % 2 == 0:
        for theta, _ in k_pairs(q, k // 2):
            out.append(_mul(F, theta.full, tilde(theta).full))
    return out


def j_polys(q: int, d: int) -> list[MonicPoly]:
    """J_d: self-conjugate irreducibles of degree d, canonical order.

    Found as the tilde-fixed monics of degree d that are not a product of
    lower-degree conjugate-closed units, so I_d itself is never built.
    """
    F = working_field(q)
    return [MonicPoly.from_code(F, c, d) for c in _j_codes(q, d).tolist()]


@lru_cache(maxsize=None)
def k_pairs(q: int, d: int) -> tuple[tuple[MonicPoly, MonicPoly], ...]:
    """(theta, tilde(theta)) for every theta in K+ of degree d."""
    out = []
    for phi in irreducibles(q, d):
        t = tilde(phi)
        if phi.code < t.code:
            out.append((phi, t))
    return tuple(out)


def is_irreducible(f: MonicPoly) -> bool:
    """Rabin's test over F_{q^2}."""
    F, d = f.spec, f.degree
    if d == 0:
        return False
    if d == 1:
        return True
    full = f.full
    Q = F.order

    def frob_iter(k):
        r = [0, 1]
        for _ in range(k):
            r = _powmod(F, r, Q, full)
        return r

    if _sub(F, frob_iter(d), [0, 1]):
        return False
    for r in factorint(d):
        if len(_gcd(F, full, _sub(F, frob_iter(d // r), [0, 1]))) > 1:
            return False
    return True


def classify(phi: MonicPoly) -> FactorClass:
    if phi.degree == 0 or phi.coeffs[0] == 0 or not is_irreducible(phi):
        raise ValueError(f"classify needs an irreducible other than x, got {phi!r}")
    return _classify(phi)


def _classify(phi):
    t = tilde(phi)
    if t == phi:
        return FactorClass.J
    return FactorClass.KPLUS if phi.code < t.code else FactorClass.KMINUS


# -- root orders ----------------------------------------------------------

@lru_cache(maxsize=None)
def _tau_cached(F, coeffs):
    full = list(coeffs) + [1]
    d = len(coeffs)
    group_order = F.order**d - 1
    x = [0, 1]
    return order_by_stripping(group_order, lambda t: _powmod(F, x, t, full) == [1])


def tau(phi: MonicPoly) -> int:
    """Multiplicative order of x in F_{q^2}[x]/(phi), i.e. of any root of phi."""
    if phi.degree == 0 or phi.coeffs[0] == 0:
        raise ValueError("tau needs an irreducible other than x")
    return _tau_cached(phi.spec, phi.coeffs)


# -- factorization -------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    phi: MonicPoly
    m: int
    cls: FactorClass


@dataclass(frozen=True)
class Factorization:
    base: MonicPoly
    factors: tuple[Factor, ...]

    def product(self) -> MonicPoly:
        out = MonicPoly.one(self.base.spec)
        for fac in self.factors:
            out = out * fac.phi**fac.m
        return out

    def multiplicity(self, phi: MonicPoly) -> int:
        for fac in self.factors:
            if fac.phi == phi:
                return fac.m
        return 0

    def as_dict(self) -> dict[MonicPoly, int]:
        return {fac.phi: fac.m for fac in self.factors}


def _edf_split(F, g, d, rng):
    """Cantor-Zassenhaus equal-degree split of a squarefree product of degree-d irreducibles."""
    if len(g) - 1 == d:
        return [g]
    Q = F.order
    while True:
        r = [rng.randrange(Q) for _ in range(len(g) - 1)]
        r = _trim(r)
        if len(r) < 2:
            continue
        if F.p == 2:
            t, acc = r, r
            for _ in range(F.e * d - 1):
                t = _mulmod(F, t, t, g)
                acc = _add(F, acc, t)
            cand = acc
        else:
            cand = _sub(F, _powmod(F, r, (Q**d - 1) // 2, g), [1])
        h = _gcd(F, g, cand)
        if 0 < len(h) - 1 < len(g) - 1:
            return _edf_split(F, h, d, rng) + _edf_split(F, _divmod(F, g, h)[0], d, rng)


def _equal_degree_factors(F, q, g, d):
    k = (len(g) - 1) // d
    if (q * q) ** d <= ENUM_GUARD:
        found = []
        for phi in irreducibles(q, d):
            quot, rem = _divmod(F, g, phi.full)
            if not rem:
                found.append(phi.full)
                g = quot
                if len(found) == k:
                    break
        return found
    return _edf_split(F, g, d, random.Random(hash(tuple(g))))


@lru_cache(maxsize=1 << 16)
def _factor_cached(F, coeffs):
    f = list(coeffs) + [1]
    q = F.q
    Q = F.order
    x = [0, 1]
    found = []
    h = x
    d = 1
    while len(f) - 1 >= 2 * d:
        h = _powmod(F, h, Q, f)
        g = _gcd(F, f, _sub(F, h, x))
        if len(g) > 1:
            for phi in _equal_degree_factors(F, q, g, d):
                m = 0
                while True:
                    quot, rem = _divmod(F, f, phi)
                    if rem:
                        break
                    f, m = quot, m + 1
                found.append((tuple(phi[:-1]), m))
            h = _mod(F, h, f)
        d += 1
    if len(f) > 1:
        found.append((tuple(f[:-1]), 1))
    return tuple(found)


def factorize(f: MonicPoly) -> Factorization:
    """Complete factorization into irreducibles with multiplicities and classes.

    Distinct-degree splitting isolates the factors of each degree; products
    of several irreducibles of one degree are separated by trial division
    against the enumerated irreducibles of that degree.
    """
    if f.degree > 0 and f.coeffs[0] == 0:
        raise ValueError("factorize needs a nonzero constant term")
    F = f.spec
    factors = []
    for coeffs, m in _factor_cached(F, f.coeffs):
        phi = MonicPoly(F, coeffs)
        factors.append(Factor(phi, m, _classify(phi)))
    factors.sort(key=lambda fac: fac.phi.key)
    return Factorization(f, tuple(factors))


# -- statistics ------------------------------------------------------------

@dataclass(frozen=True)
class PolyStats:
    X1: int
    X2: int
    X: int
    T: int
    M: int


def poly_stats(fact: Factorization, n_context: int | None = None) -> PolyStats:
    if n_context is not None and fact.base.degree != n_context:
        raise ValueError(f"factorization has degree {fact.base.degree}, expected {n_context}")
    q = fact.base.spec.q
    x1 = lcm(*(q**fac.phi.degree + 1 for fac in fact.factors if fac.cls is FactorClass.J))
    x2 = lcm(*(q ** (2 * fac.phi.degree) - 1 for fac in fact.factors if fac.cls is FactorClass.KPLUS))
    t = lcm(*(tau(fac.phi) for fac in fact.factors))
    m = max((fac.m for fac in fact.factors), default=0)
    return PolyStats(X1=x1, X2=x2, X=lcm(x1, x2), T=t, M=m)


def is_in_omega(f: MonicPoly) -> bool:
    """True iff f(0) != 0 and every factor has the multiplicity of its tilde."""
    if f.degree > 0 and f.coeffs[0] == 0:
        return False
    mult = factorize(f).as_dict()
    return all(mult.get(tilde(phi), 0) == m for phi, m in mult.items())


def is_self_conjugate(f: MonicPoly) -> bool:
    """Fast equivalent of :func:`is_in_omega`: f(0) != 0 and tilde(f) == f."""
    if f.degree > 0 and f.coeffs[0] == 0:
        return False
    return tilde(f) == f


def all_monics(q: int, d: int):
    F = working_field(q)
    _guard(q, d)
    for code in range(F.order**d):
        yield MonicPoly.from_code(F, code, d)
