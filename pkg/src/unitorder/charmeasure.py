"""Fulman's measure on characteristic polynomials of U(n, q), exactly.

P_n({f}) is a product over the distinct irreducible factors of f: each
self-conjugate factor phi of degree d and multiplicity m contributes
q^{d(m^2-m)} / |U(m, q^d)|, and each conjugate pair {theta, tilde(theta)}
contributes q^{2d(m^2-m)} / |GL(m, q^{2d})|.  All arithmetic here is in
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .intmath import GuardError, lcm
from .matrixgrp import BoundViolation, gl_order, unitary_order
from .polyring import (
    Factor,
    FactorClass,
    Factorization,
    MonicPoly,
    factorize,
    is_in_omega,
    j_polys,
    k_pairs,
    poly_stats,
    tau,
    tilde,
    working_field,
)

OMEGA_GUARD = {2: 16, 3: 10}
DEFAULT_OMEGA_GUARD = 6
STATS = ("X", "X1", "X2", "T", "M")


@lru_cache(maxsize=None)
def j_weight(q: int, d: int, m: int) -> Fraction:
    return Fraction(q ** (d * (m * m - m)), unitary_order(m, q**d))


@lru_cache(maxsize=None)
def k_weight(q: int, d: int, m: int) -> Fraction:
    return Fraction(q ** (2 * d * (m * m - m)), gl_order(m, q ** (2 * d)))


@dataclass(frozen=True)
class Atom:
    """A conjugate-closed irreducible unit: one J polynomial or a K+/K- pair."""

    cls: str  # "J" or "K"
    degree: int  # degree of phi (the unit has degree 2*degree for K)
    phi: MonicPoly
    partner: MonicPoly | None = None

    @property
    def unit_degree(self) -> int:
        return self.degree if self.cls == "J" else 2 * self.degree

    def weight(self, m: int) -> Fraction:
        q = self.phi.spec.q
        if self.cls == "J":
            return j_weight(q, self.degree, m)
        return k_weight(q, self.degree, m)

    @cached_property
    def x_value(self) -> int:
        q = self.phi.spec.q
        return q**self.degree + 1 if self.cls == "J" else q ** (2 * self.degree) - 1

    @cached_property
    def tau(self) -> int:
        if self.partner is None:
            return tau(self.phi)
        return lcm(tau(self.phi), tau(self.partner))

    @property
    def unit_poly(self) -> MonicPoly:
        return self.phi if self.partner is None else self.phi * self.partner


@lru_cache(maxsize=None)
def atoms(q: int, max_degree: int) -> tuple[Atom, ...]:
    """All atoms of unit degree <= max_degree, sorted by unit degree then canonically."""
    out = []
    for d in range(1, max_degree + 1):
        out += [Atom("J", d, phi) for phi in j_polys(q, d)]
        if d % 2 == 0:
            out += [Atom("K", d // 2, th, tb) for th, tb in k_pairs(q, d // 2)]
    out.sort(key=lambda a: (a.unit_degree, a.phi.key))
    return tuple(out)


class OmegaEntry:
    __slots__ = ("parts", "weight", "q", "_poly")

    def __init__(self, q, parts, weight):
        self.q = q
        self.parts = parts  # tuple of (Atom, multiplicity)
        self.weight = weight
        self._poly = None

    @property
    def poly(self) -> MonicPoly:
        if self._poly is None:
            out = MonicPoly.one(working_field(self.q))
            for atom, m in self.parts:
                out = out * atom.unit_poly**m
            self._poly = out
        return self._poly

    @property
    def factorization(self) -> Factorization:
        facs = []
        for atom, m in self.parts:
            if atom.cls == "J":
                facs.append(Factor(atom.phi, m, FactorClass.J))
            else:
                facs.append(Factor(atom.phi, m, FactorClass.KPLUS))
                facs.append(Factor(atom.partner, m, FactorClass.KMINUS))
        facs.sort(key=lambda f: f.phi.key)
        return Factorization(self.poly, tuple(facs))

    def stat(self, name: str) -> int:
        if name == "M":
            return max((m for _, m in self.parts), default=0)
        x1 = lcm(*(a.x_value for a, _ in self.parts if a.cls == "J"))
        if name == "X1":
            return x1
        x2 = lcm(*(a.x_value for a, _ in self.parts if a.cls == "K"))
        if name == "X2":
            return x2
        if name == "X":
            return lcm(x1, x2)
        if name == "T":
            return lcm(*(a.tau for a, _ in self.parts))
        raise ValueError(f"unknown statistic {name!r}; expected one of {STATS}")


@dataclass
class OmegaTable:
    n: int
    q: int
    entries: list[OmegaEntry] = field(repr=False)

    def total(self) -> Fraction:
        return sum((e.weight for e in self.entries), Fraction(0))

    @cached_property
    def by_poly(self) -> dict[MonicPoly, OmegaEntry]:
        return {e.poly: e for e in self.entries}

    def __len__(self):
        return len(self.entries)


def check_omega_guard(n: int, q: int, allow_large: bool = False):
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > OMEGA_GUARD.get(q, DEFAULT_OMEGA_GUARD) and not allow_large:
        raise GuardError(f"omega guard: n={n} too large for q={q}")


def _compose(n, atom_list, q):
    entries = []
    parts: list = []

    def rec(start, rem, weight):
        if rem == 0:
            entries.append(OmegaEntry(q, tuple(parts), weight))
            return
        for j in range(start, len(atom_list)):
            a = atom_list[j]
            du = a.unit_degree
            if du > rem:
                break
            for m in range(1, rem // du + 1):
                parts.append((a, m))
                rec(j + 1, rem - m * du, weight * a.weight(m))
                parts.pop()

    rec(0, n, Fraction(1))
    return entries


@lru_cache(maxsize=32)
def enumerate_omega(n: int, q: int, allow_large: bool = False) -> OmegaTable:
    """Omega_n with exact weights, built by composing conjugate-closed factor multisets.

    Raises AssertionError when the weights do not sum to exactly 1.
    """
    check_omega_guard(n, q, allow_large)
    table = OmegaTable(n, q, _compose(n, atoms(q, n), q))
    total = table.total()
    if total != 1:
        raise AssertionError(f"Omega_{n} weights for q={q} sum to {total}, not 1")
    return table


def _weight_from_factorization(fact: Factorization) -> Fraction:
    q = fact.base.spec.q
    w = Fraction(1)
    for f in fact.factors:
        if f.cls is FactorClass.J:
            w *= j_weight(q, f.phi.degree, f.m)
        elif f.cls is FactorClass.KPLUS:
            w *= k_weight(q, f.phi.degree, f.m)
    return w


def measure_of(f: MonicPoly, n: int | None = None) -> Fraction:
    """P_n({f}) from the closed form; f must lie in Omega_n."""
    if n is not None and f.degree != n:
        raise ValueError(f"degree {f.degree} polynomial is not in Omega_{n}")
    if not is_in_omega(f):
        raise ValueError(f"{f!r} is not in Omega")
    return _weight_from_factorization(factorize(f))


def expect_stat(stat: str, n: int, q: int) -> Fraction:
    if stat not in STATS:
        raise ValueError(f"unknown statistic {stat!r}; expected one of {STATS}")
    table = enumerate_omega(n, q)
    return sum((e.weight * e.stat(stat) for e in table.entries), Fraction(0))


def tail_bound(q: int, xi) -> Fraction:
    return Fraction(40) * Fraction(q) ** (1 - xi) if isinstance(xi, int) else 40 * q ** (1 - xi)


def tail_M(n: int, q: int, xi: int) -> Fraction:
    """Exact P_n(M > xi); for xi > 2 also checks it against 40 q^{1-xi}."""
    table = enumerate_omega(n, q)
    value = sum((e.weight for e in table.entries if e.stat("M") > xi), Fraction(0))
    if xi > 2 and value > tail_bound(q, xi):
        raise BoundViolation(f"P_{n}(M > {xi}) = {value} exceeds 40 q^(1-xi)")
    return value


# -- key factorization ---------------------------------------------------------

@dataclass(frozen=True)
class PiSplit:
    f: MonicPoly
    g: MonicPoly
    h: MonicPoly
    x_f: int
    x_g: int


def _classes(fact: Factorization):
    """Conjugate-closed classes of f's factors as Atoms, canonical ascending."""
    out = []
    for fac in fact.factors:
        if fac.cls is FactorClass.J:
            out.append(Atom("J", fac.phi.degree, fac.phi))
        elif fac.cls is FactorClass.KPLUS:
            out.append(Atom("K", fac.phi.degree, fac.phi, tilde(fac.phi)))
    out.sort(key=lambda a: a.phi.key)
    return out


def _x_of(classes) -> int:
    return lcm(*(a.x_value for a in classes))


def minimal_classes(classes) -> list[Atom]:
    """Greedy deletion: drop each class in order whenever X stays unchanged."""
    target = _x_of(classes)
    kept = list(classes)
    for a in list(classes):
        rest = [b for b in kept if b is not a]
        if _x_of(rest) == target:
            kept = rest
    return kept


def pi_factor(f: MonicPoly) -> PiSplit:
    """A divisibility-minimal conjugate-closed divisor g of f with X(g) = X(f), and h = f/g."""
    if not is_in_omega(f):
        raise ValueError(f"{f!r} is not in Omega")
    classes = _classes(factorize(f))
    kept = minimal_classes(classes)
    g = MonicPoly.one(f.spec)
    for a in kept:
        g = g * a.unit_poly
    return PiSplit(f, g, f // g, _x_of(classes), _x_of(kept))


@dataclass
class SubLemmaReport:
    n: int
    q: int
    ratios: list[tuple[MonicPoly, Fraction, bool]] = field(repr=False)  # (f, ratio, k_only)
    max_ratio: Fraction
    count_above_one: int
    worst: MonicPoly | None
    max_ratio_k_only: Fraction | None


def check_sub_lemma(n: int, q: int) -> SubLemmaReport:
    """Exact P_n({f}) / (P_|g|({g}) P_{n-|g|}({h})) for every f whose pi(f) has degree < n.

    Reports the ratios; it does not assert that they are at most 1.
    """
    table = enumerate_omega(n, q)
    rows = []
    for e in table.entries:
        split = pi_factor(e.poly)
        if split.g.degree >= n:
            continue
        denom = measure_of(split.g) * measure_of(split.h)
        k_only = all(a.cls == "K" for a, _ in e.parts)
        rows.append((e.poly, e.weight / denom, k_only))
    rows.sort(key=lambda r: r[0].key)
    max_ratio = max((r[1] for r in rows), default=Fraction(0))
    worst = next((r[0] for r in rows if r[1] == max_ratio), None)
    k_ratios = [r[1] for r in rows if r[2]]
    return SubLemmaReport(n, q, rows, max_ratio, sum(1 for r in rows if r[1] > 1), worst,
                          max(k_ratios) if k_ratios else None)


# -- sampling ------------------------------------------------------------------

def sample_charpoly(n: int, q: int, seed: int = 0, count: int = 1) -> list[MonicPoly]:
    """i.i.d. draws from P_n by inverse CDF over exact cumulative weights."""
    table = enumerate_omega(n, q)
    den = lcm(*(e.weight.denominator for e in table.entries))
    cum, acc = [], 0
    for e in table.entries:
        acc += e.weight.numerator * (den // e.weight.denominator)
        cum.append(acc)
    assert acc == den
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        u = rng.randrange(den)
        out.append(table.entries[bisect.bisect_right(cum, u)].poly)
    return out


def omega_by_filter(n: int, q: int) -> list[MonicPoly]:
    """Omega_n by testing every monic of degree n; the oracle for small n."""
    from .polyring import all_monics

    if n > 3:
        raise GuardError("filter oracle only runs for n <= 3")
    return [f for f in all_monics(q, n) if is_in_omega(f)]


def stats_of(f: MonicPoly):
    return poly_stats(factorize(f))
