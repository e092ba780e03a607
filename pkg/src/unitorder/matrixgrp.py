"""Matrices over F_{q^2} and the finite unitary group U(n, q).

Entries are field codes; a :class:`Matrix` is immutable.  The Hermitian
form is <u, v> = sum_i u_i v_i^q, so A is unitary exactly when its columns
form an orthonormal frame.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .ffield import FieldSpec
from .intmath import GuardError, lcm
from .polyring import (
    MonicPoly,
    _gcd,
    _make_monic,
    _mul,
    _divmod,
    factorize,
    poly_stats,
    tau,
    working_field,
)

DEFAULT_ENUM_CASES = frozenset({(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)})
SAMPLER_MAX_N = 50
SAMPLER_MAX_Q = 5


class BoundViolation(AssertionError):
    """An order bound failed on some element; this signals a bug, not data."""


class Matrix:
    __slots__ = ("spec", "n", "rows", "_hash")

    def __init__(self, spec: FieldSpec, rows):
        self.spec = spec
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")
        self._hash = hash(self.rows)

    @classmethod
    def identity(cls, spec, n):
        return cls(spec, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, spec, cols):
        n = len(cols)
        return cls(spec, [[cols[j][i] for j in range(n)] for i in range(n)])

    def columns(self):
        return [list(c) for c in zip(*self.rows)]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.spec != self.spec or other.n != self.n:
            raise ValueError("shape or field mismatch")
        return Matrix(self.spec, _matmul(self.spec, self.rows, other.rows))

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.spec == other.spec and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]})"


def _matmul(F, a, b):
    Q, at, mt = F.order, F.add_table, F.mul_table
    n = len(a)
    bt = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = at[acc * Q + mt[x * Q + y]]
            new.append(acc)
        out.append(new)
    return out


def _matvec(F, rows, v):
    Q, at, mt = F.order, F.add_table, F.mul_table
    out = []
    for row in rows:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = at[acc * Q + mt[x * Q + y]]
        out.append(acc)
    return out


def hermitian(F, u, v) -> int:
    """<u, v> = sum u_i v_i^q."""
    Q, at, mt, frob = F.order, F.add_table, F.mul_table, F.frob_table
    acc = 0
    for x, y in zip(u, v):
        if x and y:
            acc = at[acc * Q + mt[x * Q + frob[y]]]
    return acc


def conj_transpose(A: Matrix) -> Matrix:
    F = A.spec
    if F.ell is None:
        raise ValueError("conjugate transpose needs a field of even degree")
    frob = F.frob_table
    return Matrix(F, [[frob[A.rows[j][i]] for j in range(A.n)] for i in range(A.n)])


def is_unitary(A: Matrix) -> bool:
    return A @ conj_transpose(A) == Matrix.identity(A.spec, A.n)


def unitary_order(n: int, q: int) -> int:
    """|U(n, q)| = q^{n(n-1)/2} prod_{j<=n} (q^j - (-1)^j)."""
    out = q ** (n * (n - 1) // 2)
    for j in range(1, n + 1):
        out *= q**j - (-1) ** j
    return out


def gl_order(n: int, r: int) -> int:
    """|GL(n, r)| = r^{n(n-1)/2} prod_{j<=n} (r^j - 1)."""
    out = r ** (n * (n - 1) // 2)
    for j in range(1, n + 1):
        out *= r**j - 1
    return out


# -- enumeration and sampling --------------------------------------------------

def _check_enum_guard(n, q, allow_large):
    if (n, q) not in DEFAULT_ENUM_CASES and not allow_large:
        raise GuardError(f"enumeration guard: U({n},{q}) is not in the default set; pass allow_large")


def _all_vectors(F, n):
    Q = F.order
    for code in range(Q**n):
        v = []
        for _ in range(n):
            code, r = divmod(code, Q)
            v.append(r)
        yield v


def enumerate_group(n: int, q: int, allow_large: bool = False) -> Iterator[Matrix]:
    """Every element of U(n, q) once, built column by column as orthonormal frames."""
    _check_enum_guard(n, q, allow_large)
    F = working_field(q)
    unit = [v for v in _all_vectors(F, n) if hermitian(F, v, v) == 1]

    def extend(cols):
        if len(cols) == n:
            yield Matrix.from_columns(F, cols)
            return
        for v in unit:
            if all(hermitian(F, v, c) == 0 for c in cols):
                yield from extend(cols + [v])

    yield from extend([])


def brute_force_group(n: int, q: int) -> Iterator[Matrix]:
    """Filter all (q^2)^{n^2} matrices for unitarity; an oracle for tiny cases."""
    F = working_field(q)
    if F.order ** (n * n) > 10**5:
        raise GuardError(f"brute-force guard: {F.order}^{n * n} matrices")
    for flat in _all_vectors(F, n * n):
        A = Matrix(F, [flat[i * n : (i + 1) * n] for i in range(n)])
        if is_unitary(A):
            yield A


def _rng(seed: int, index: int):
    return np.random.default_rng([seed & (2**64 - 1), index])


def sample_uniform(n: int, q: int, seed: int = 0, index: int = 0) -> Matrix:
    """Exactly uniform element of U(n, q), reproducible from (seed, index).

    Column k is uniform among unit vectors orthogonal to columns 1..k-1:
    a uniform vector of the orthogonal complement is drawn from a basis of
    that subspace and rejected unless its norm is 1.
    """
    if n < 1 or n > SAMPLER_MAX_N or q > SAMPLER_MAX_Q:
        raise GuardError(f"sampler guard: n <= {SAMPLER_MAX_N}, q <= {SAMPLER_MAX_Q}")
    F = working_field(q)
    Q, at, mt, inv, neg = F.order, F.add_table, F.mul_table, F.inv_table, F.neg_table
    rng = _rng(seed, index)
    basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    cols = []
    for k in range(n):
        for _ in range(64 * q):
            coeffs = rng.integers(0, Q, size=len(basis)).tolist()
            v = [0] * n
            for c, w in zip(coeffs, basis):
                if c:
                    row = c * Q
                    v = [at[a * Q + mt[row + b]] if b else a for a, b in zip(v, w)]
            if hermitian(F, v, v) == 1:
                break
        else:
            raise RuntimeError(f"sampler rejected {64 * q} draws for column {k}")
        cols.append(v)
        alphas = [hermitian(F, w, v) for w in basis]
        i0 = next(i for i, a in enumerate(alphas) if a)
        w0, a0inv = basis[i0], inv[alphas[i0]]
        new = []
        for i, (w, a) in enumerate(zip(basis, alphas)):
            if i == i0:
                continue
            if a:
                row = neg[mt[a * Q + a0inv]] * Q
                w = [at[x * Q + mt[row + y]] if y else x for x, y in zip(w, w0)]
            new.append(w)
        basis = new
    return Matrix.from_columns(F, cols)


# -- characteristic and minimal polynomials ---------------------------------

def char_poly(A: Matrix) -> MonicPoly:
    """det(xI - A) via reduction to Hessenberg form and the standard recurrence."""
    F, n = A.spec, A.n
    Q, at, mt, inv, neg = F.order, F.add_table, F.mul_table, F.inv_table, F.neg_table
    H = [list(r) for r in A.rows]
    for k in range(n - 2):
        piv = next((i for i in range(k + 1, n) if H[i][k]), None)
        if piv is None:
            continue
        if piv != k + 1:
            H[piv], H[k + 1] = H[k + 1], H[piv]
            for row in H:
                row[piv], row[k + 1] = row[k + 1], row[piv]
        pinv = inv[H[k + 1][k]]
        for j in range(k + 2, n):
            if not H[j][k]:
                continue
            u = mt[H[j][k] * Q + pinv]
            nu = neg[u] * Q
            rj, rk = H[j], H[k + 1]
            for c in range(n):
                if rk[c]:
                    rj[c] = at[rj[c] * Q + mt[nu + rk[c]]]
            # column update keeps the transformation a similarity
            uu = u * Q
            for row in H:
                if row[j]:
                    row[k + 1] = at[row[k + 1] * Q + mt[uu + row[j]]]
    polys = [[1]]
    for m in range(1, n + 1):
        # (x - h_mm) p_{m-1}
        prev = polys[m - 1]
        cur = _mul(F, [neg[H[m - 1][m - 1]], 1], prev)
        prod = 1
        for i in range(1, m):
            prod = mt[prod * Q + H[m - i][m - i - 1]]
            if not prod:
                break
            coef = mt[prod * Q + H[m - i - 1][m - 1]]
            if coef:
                row = neg[coef] * Q
                for t, c in enumerate(polys[m - i - 1]):
                    if c:
                        if t >= len(cur):
                            cur.extend([0] * (t + 1 - len(cur)))
                        cur[t] = at[cur[t] * Q + mt[row + c]]
        polys.append(cur)
    return MonicPoly.from_full(F, polys[n])


def _reduce(F, v, echelon, track=None):
    """Reduce v against an echelon list of (pivot, vec[, poly]) in insertion order."""
    Q, at, mt, neg = F.order, F.add_table, F.mul_table, F.neg_table
    v = list(v)
    for entry in echelon:
        piv, u = entry[0], entry[1]
        c = v[piv]
        if c:
            row = neg[c] * Q
            v = [at[a * Q + mt[row + b]] if b else a for a, b in zip(v, u)]
            if track is not None:
                pu = entry[2]
                if len(track) < len(pu):
                    track = track + [0] * (len(pu) - len(track))
                for t, b in enumerate(pu):
                    if b:
                        track[t] = at[track[t] * Q + mt[row + b]]
    return v, track


def min_poly(A: Matrix) -> MonicPoly:
    """Minimal polynomial as the lcm of local minimal polynomials of basis vectors.

    Basis vectors already inside the span of earlier Krylov spaces are
    skipped since the running lcm annihilates them.
    """
    F, n = A.spec, A.n
    Q, mt, inv = F.order, F.mul_table, F.inv_table
    rows = A.rows
    span = []
    m = [1]
    for i in range(n):
        e = [1 if j == i else 0 for j in range(n)]
        r, _ = _reduce(F, e, span)
        if not any(r):
            continue
        local = []
        v, track = e, [1]
        while True:
            v, track = _reduce(F, v, local, track)
            piv = next((j for j, c in enumerate(v) if c), None)
            if piv is None:
                while track and track[-1] == 0:
                    track.pop()
                track = _make_monic(F, track)
                break
            s = inv[v[piv]]
            v = [mt[s * Q + c] for c in v]
            track = [mt[s * Q + c] for c in track]
            local.append((piv, v, track))
            v = _matvec(F, rows, v)
            track = [0] + track
        m = _divmod(F, _mul(F, m, track), _gcd(F, m, track))[0]
        for piv, vec, _ in local:
            r, _ = _reduce(F, vec, span)
            pr = next((j for j, c in enumerate(r) if c), None)
            if pr is not None:
                s = inv[r[pr]]
                span.append((pr, [mt[s * Q + c] for c in r]))
        if len(span) == n:
            break
    return MonicPoly.from_full(F, m)


# -- element orders ---------------------------------------------------------

def _ceil_log(e: int, p: int) -> int:
    k, pk = 0, 1
    while pk < e:
        pk *= p
        k += 1
    return k


def order_from_min_poly(mp: MonicPoly) -> int:
    """lcm over phi^e || min_poly of tau(phi) * p^ceil(log_p e)."""
    if mp.degree > 0 and mp.coeffs[0] == 0:
        raise ValueError("singular matrix has no multiplicative order")
    p = mp.spec.p
    return lcm(*(tau(f.phi) * p ** _ceil_log(f.m, p) for f in factorize(mp).factors))


def element_order(A: Matrix) -> int:
    return order_from_min_poly(min_poly(A))


def naive_order(A: Matrix, limit: int | None = None) -> int:
    """Least e >= 1 with A^e = I by repeated multiplication."""
    F, n = A.spec, A.n
    if limit is None:
        limit = F.p * n * F.order**n
    ident = Matrix.identity(F, n).rows
    P = A.rows
    for e in range(1, limit + 1):
        if P == ident:
            return e
        P = tuple(tuple(r) for r in _matmul(F, P, A.rows))
    raise ValueError("matrix did not return to the identity within the limit")


# -- census and sampling statistics ------------------------------------------

@dataclass
class GroupCensus:
    n: int
    q: int
    order: int
    order_histogram: dict[int, int]
    mu: Fraction
    charpoly_counts: dict[MonicPoly, int] = field(repr=False)


def check_order_bounds(V: int, stats, n: int, q: int, p: int) -> list[str]:
    """Names of the order bounds that V violates (empty when all hold)."""
    bad = []
    if V > p * stats.M * stats.T:
        bad.append("V <= p*M*T")
    if V > 3 * p * stats.M * q**n:
        bad.append("V <= 3*p*M*q^n")
    if V >= p * n * q ** (2 * n):
        bad.append("V < p*n*q^(2n)")
    if stats.X % stats.T:
        bad.append("T | X")
    return bad


def group_census(n: int, q: int, method: str = "minpoly", allow_large: bool = False) -> GroupCensus:
    """Exact order statistics of U(n, q) by full enumeration.

    Every element is checked against V <= p*M*T and V <= 3*p*M*q^n;
    any failure raises :class:`BoundViolation`.
    """
    F = working_field(q)
    p = F.p
    hist: Counter = Counter()
    cps: Counter = Counter()
    total = 0
    for A in enumerate_group(n, q, allow_large=allow_large):
        cp = char_poly(A)
        if method == "naive":
            V = naive_order(A)
        else:
            V = element_order(A)
        stats = poly_stats(factorize(cp))
        bad = check_order_bounds(V, stats, n, q, p)
        if bad:
            raise BoundViolation(f"U({n},{q}) element {A!r}: order {V} violates {bad}")
        hist[V] += 1
        cps[cp] += 1
        total += 1
    mu = Fraction(sum(V * c for V, c in hist.items()), total)
    return GroupCensus(n, q, total, dict(sorted(hist.items())), mu,
                       dict(sorted(cps.items(), key=lambda kv: kv[0].key)))


@dataclass
class MonteCarloSummary:
    n: int
    q: int
    samples: int
    seed: int
    mean_V: Fraction
    mean_T: Fraction
    mean_X: Fraction
    max_V: int
    max_M: int
    violations: int
    violation_kinds: dict[str, int]


def monte_carlo_stats(n: int, q: int, samples: int, seed: int = 0) -> MonteCarloSummary:
    F = working_field(q)
    p = F.p
    sv = st = sx = 0
    max_v = max_m = 0
    violations = 0
    kinds: Counter = Counter()
    for i in range(samples):
        A = sample_uniform(n, q, seed, i)
        stats = poly_stats(factorize(char_poly(A)))
        V = element_order(A)
        bad = check_order_bounds(V, stats, n, q, p)
        if bad:
            violations += 1
            kinds.update(bad)
        sv += V
        st += stats.T
        sx += stats.X
        max_v = max(max_v, V)
        max_m = max(max_m, stats.M)
    return MonteCarloSummary(n, q, samples, seed, Fraction(sv, samples), Fraction(st, samples),
                             Fraction(sx, samples), max_v, max_m, violations, dict(kinds))
