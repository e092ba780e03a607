"""Exact arithmetic in F_p, F_q and F_{q^2}, with the q-power Frobenius.

An element of F_{p^e} is a vector of e residues mod p in the polynomial
basis 1, t, ..., t^(e-1) over the canonical modulus.  Internally elements
are handled as their integer code (base-p positional value, coefficient of
t^0 least significant); :class:`FieldElement` wraps a code with its field
for operator-style use.

Fields with at most 2**16 elements get log/antilog tables; fields with at
most 1024 elements also get flat addition and multiplication tables indexed
by ``a * order + b``, which is what the polynomial and matrix layers use.
"""

from __future__ import annotations

from functools import lru_cache

from .intmath import GuardError, factorint, is_prime, order_by_stripping

SIZE_GUARD = 1 << 24
LOG_TABLE_LIMIT = 1 << 16
FLAT_TABLE_LIMIT = 1 << 10


# -- polynomials over F_p as coefficient lists, low degree first ------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm])


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _ppowmod(a, k, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while k:
        if k & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        k >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def is_irreducible_mod_p(f, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p given low-degree-first."""
    f = list(f)
    e = len(f) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    x = [0, 1]

    def frob_iter(k):
        r = x
        for _ in range(k):
            r = _ppowmod(r, p, f, p)
        return r

    if _psub(frob_iter(e), x, p):
        return False
    for r in factorint(e):
        g = _pgcd(f, _psub(frob_iter(e // r), x, p), p)
        if len(g) > 1:
            return False
    return True


def _digits(code: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _undigits(digits, p: int) -> int:
    code = 0
    for c in reversed(digits):
        code = code * p + c
    return code


class FieldSpec:
    """The canonical model of F_{p^e}.

    ``modulus`` holds the coefficients a_0..a_e of the monic irreducible
    defining polynomial.  Build instances with :func:`make_field`.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.modulus = modulus
        self.order = p**e
        self.ell = e // 2 if e % 2 == 0 else None
        self.q = p**self.ell if self.ell is not None else None
        self._log = self._exp = None
        self.add_table = self.mul_table = None
        if self.order <= LOG_TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __reduce__(self):
        return make_field, (self.p, self.e)

    # -- table construction --------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        prod = _pmulmod(_trim(_digits(a, p, e)), _trim(_digits(b, p, e)), list(self.modulus), p)
        return _undigits(prod, p)

    def _slow_add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def _slow_neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, scale = 0, 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * scale
            scale *= p
        return out

    def _slow_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return result

    def _build_tables(self):
        N = self.order - 1
        g = self.primitive_code()
        exp = [0] * (2 * N)
        log = [0] * self.order
        x = 1
        for i in range(N):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(N, 2 * N):
            exp[i] = exp[i - N]
        self._exp, self._log = exp, log
        if self.order <= FLAT_TABLE_LIMIT:
            Q = self.order
            self.neg_table = [self._slow_neg(a) for a in range(Q)]
            self.add_table = [self._slow_add(a, b) for a in range(Q) for b in range(Q)]
            mt = [0] * (Q * Q)
            for a in range(1, Q):
                la = log[a]
                row = a * Q
                for b in range(1, Q):
                    mt[row + b] = exp[la + log[b]]
            self.mul_table = mt
            self.inv_table = [0] + [exp[(N - log[a]) % N] for a in range(1, Q)]
            if self.q is not None:
                self.frob_table = [self.power(a, self.q) for a in range(Q)]

    def primitive_code(self) -> int:
        """Smallest code generating the multiplicative group."""
        N = self.order - 1
        if N == 1:
            return 1
        ps = list(factorint(N))
        for g in range(1, self.order):
            if all(self._slow_pow(g, N // r) != 1 for r in ps):
                return g
        raise ArithmeticError("no primitive element found")

    # -- arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return self.add_table[a * self.order + b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.add_table is not None:
            return self.neg_table[a]
        return self._slow_neg(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return self.mul_table[a * self.order + b]
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._log is not None:
            N = self.order - 1
            return self._exp[(N - self._log[a]) % N]
        return self._slow_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self._log is not None:
            return self._exp[self._log[a] * k % (self.order - 1)]
        return self._slow_pow(a, k)

    def frobenius_p(self, a: int) -> int:
        return self.power(a, self.p)

    def frobenius_q(self, a: int) -> int:
        """a**q as ell applications of the p-power map."""
        if self.ell is None:
            raise ValueError(f"frobenius_q needs even extension degree, {self!r} has e={self.e}")
        if self.add_table is not None:
            return self.frob_table[a]
        for _ in range(self.ell):
            a = self.frobenius_p(a)
        return a

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        return order_by_stripping(self.order - 1, lambda t: self.power(a, t) == 1)

    # -- elements ------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        """Element from a code, or from a coefficient sequence a_0..a_{e-1}."""
        if isinstance(value, int):
            return decode(value, self)
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.e:
            raise ValueError("too many coefficients")
        return FieldElement(self, _undigits(coeffs, self.p))

    def elements(self):
        return [FieldElement(self, i) for i in range(self.order)]

    def subfield_codes(self) -> list[int]:
        """Codes of F_q inside F_{q^2}: the Frobenius-fixed elements."""
        return [a for a in range(self.order) if self.frobenius_q(a) == a]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self.primitive_code())


class FieldElement:
    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        self.spec = spec
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(_digits(self.value, self.spec.p, self.spec.e))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError(f"mismatched fields {self.spec!r} and {other.spec!r}")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.div(b, self.value))

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.power(self.value, k))

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.spec.p
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.e, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.spec.order}({self.value})"


@lru_cache(maxsize=None)
def make_field(p: int, e: int) -> FieldSpec:
    """The canonical F_{p^e}.

    The modulus is the smallest monic irreducible of degree e when the
    coefficient vector (a_{e-1}, ..., a_0) is read as a base-p integer.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be positive")
    if p**e > SIZE_GUARD:
        raise GuardError(f"field size guard: {p}^{e} exceeds 2^24")
    for k in range(p**e):
        cand = _digits(k, p, e) + [1]
        if is_irreducible_mod_p(cand, p):
            return FieldSpec(p, e, tuple(cand))
    raise ArithmeticError(f"no irreducible of degree {e} over F_{p}")


def unitary_field(q: int) -> FieldSpec:
    """F_{q^2} for a prime power q, the field the unitary group lives over."""
    from .intmath import prime_power

    p, ell = prime_power(q)
    return make_field(p, 2 * ell)


def encode(x: FieldElement) -> int:
    return x.value


def decode(i: int, spec: FieldSpec) -> FieldElement:
    if not 0 <= i < spec.order:
        raise ValueError(f"code {i} out of range for {spec!r}")
    return FieldElement(spec, i)


def frobenius_q(x: FieldElement) -> FieldElement:
    return FieldElement(x.spec, x.spec.frobenius_q(x.value))


def mult_order(x: FieldElement) -> int:
    return x.spec.mult_order(x.value)
