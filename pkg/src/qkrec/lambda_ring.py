"""Truncated lambda-algebra of coefficients with Adams operations.

A scalar is a finite sum of monomials in generator symbols ``psi^k(g)`` with
exact rational coefficients.  The symbol ``psi^k(g)`` carries weight ``k``;
every product whose total weight exceeds the ring's ``cap`` is discarded, so
all exponentials of positive-weight elements are finite sums.

Two lambda-structures are supported:

``free``
    the generators are free as a lambda-algebra: ``psi^k`` sends the symbol
    ``(g, m)`` to ``(g, k*m)``.
``symmetric``
    every base generator is treated as a line element, ``psi^k(g) = g**k``;
    only level-1 symbols occur.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping

Symbol = tuple[str, int]
Monomial = tuple[tuple[Symbol, int], ...]

ONE: Monomial = ()

_RESERVED = re.compile(r"^(q|[PuQT]\d*|psi\d*)$")

FREE = "free"
SYMMETRIC = "symmetric"


class StructureError(ValueError):
    """Operands live in incompatible rings."""


class DomainError(ValueError):
    """An operation was called outside of its domain (e.g. exp of a unit)."""


@lru_cache(maxsize=None)
def mono_weight(m: Monomial) -> int:
    return sum(sym[1] * e for sym, e in m)


@lru_cache(maxsize=None)
def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


@lru_cache(maxsize=1 << 16)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for sym, e in b:
        out[sym] = out.get(sym, 0) + e
    return tuple(sorted(out.items()))


@lru_cache(maxsize=1 << 16)
def mono_adams(k: int, m: Monomial, mode: str) -> Monomial:
    if mode == FREE:
        return tuple(((name, lvl * k), e) for (name, lvl), e in m)
    return tuple(((name, lvl), e * k) for (name, lvl), e in m)


@lru_cache(maxsize=1 << 16)
def mono_specialize(m: Monomial) -> Monomial:
    """Replace every ``psi^l(g)`` by ``g**l``."""
    out: dict[Symbol, int] = {}
    for (name, lvl), e in m:
        out[(name, 1)] = out.get((name, 1), 0) + lvl * e
    return tuple(sorted(out.items()))


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if hasattr(c, "p") and hasattr(c, "q"):  # flint.fmpq
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


@dataclass(frozen=True)
class LambdaRing:
    """Parameters of a truncated lambda-algebra.

    ``names`` is the declared generator alphabet; its order is the order used
    when printing.  ``cap`` is the weight truncation bound.
    """

    names: tuple[str, ...]
    cap: int
    mode: str = FREE

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if self.cap < 0:
            raise ValueError("weight cap must be non-negative")
        if self.mode not in (FREE, SYMMETRIC):
            raise ValueError(f"unknown lambda-structure mode {self.mode!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for n in self.names:
            if not n.isidentifier() or _RESERVED.match(n):
                raise ValueError(f"invalid generator name {n!r}")

    def zero(self) -> LambdaScalar:
        return LambdaScalar(self, {})

    def one(self) -> LambdaScalar:
        return self.scalar(1)

    def scalar(self, c) -> LambdaScalar:
        return LambdaScalar(self, {ONE: as_fraction(c)})

    def gen(self, name: str, level: int = 1) -> LambdaScalar:
        """The symbol ``psi^level(name)``; in symmetric mode this is ``name**level``."""
        if name not in self.names:
            raise StructureError(f"generator {name!r} not in alphabet {self.names}")
        if level < 1:
            raise ValueError("adams level must be positive")
        if self.mode == SYMMETRIC:
            mono = (((name, 1), level),)
        else:
            mono = (((name, level), 1),)
        return LambdaScalar(self, {mono: Fraction(1)})

    def symmetric(self) -> LambdaRing:
        return LambdaRing(self.names, self.cap, SYMMETRIC)

    def with_cap(self, cap: int) -> LambdaRing:
        return LambdaRing(self.names, cap, self.mode)

    def sort_key(self, m: Monomial):
        """Printing order: weight, number of factors, then symbols by alphabet position."""
        idx = {n: i for i, n in enumerate(self.names)}
        syms = sorted(((idx[name], lvl, e) for (name, lvl), e in m))
        return (mono_weight(m), mono_degree(m), tuple(syms))

    def check_monomial(self, m: Monomial) -> None:
        for (name, lvl), e in m:
            if name not in self.names:
                raise StructureError(f"generator {name!r} not in alphabet {self.names}")
            if self.mode == SYMMETRIC and lvl != 1:
                raise StructureError("symmetric mode only has level-1 symbols")
            if lvl < 1 or e < 1:
                raise ValueError(f"malformed monomial {m!r}")


class LambdaScalar:
    """Element of a truncated lambda-algebra.

    Immutable.  ``terms`` maps monomials to non-zero Fractions; monomials of
    weight above ``ring.cap`` are dropped on construction.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: LambdaRing, terms: Mapping[Monomial, Fraction] | None = None):
        self.ring = ring
        cap = ring.cap
        self.terms = {
            m: as_fraction(c) for m, c in (terms or {}).items() if c and mono_weight(m) <= cap
        }
        self._hash = None

    # ---------------------------------------------------------------- basics
    def _coerce(self, other) -> LambdaScalar:
        if isinstance(other, LambdaScalar):
            if other.ring != self.ring:
                raise StructureError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LambdaScalar(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaScalar(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            c = as_fraction(other)
            return LambdaScalar(self.ring, {m: c * v for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap = self.ring.cap
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            w1 = mono_weight(m1)
            for m2, c2 in other.terms.items():
                if w1 + mono_weight(m2) > cap:
                    continue
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return LambdaScalar(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in general")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self.ring.scalar(other)
        if not isinstance(other, LambdaScalar):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LambdaScalar({self})"

    def __str__(self):
        return format_scalar(self)

    # ------------------------------------------------------------ structure
    @property
    def constant(self) -> Fraction:
        """Weight-0 part (the augmentation)."""
        return self.terms.get(ONE, Fraction(0))

    def in_positive_filtration(self) -> bool:
        return ONE not in self.terms

    def min_weight(self) -> int | None:
        return min((mono_weight(m) for m in self.terms), default=None)

    def homogeneous_parts(self) -> dict[int, LambdaScalar]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_weight(m), {})[m] = c
        return {w: LambdaScalar(self.ring, t) for w, t in sorted(parts.items())}

    def truncate(self, cap: int) -> LambdaScalar:
        """Re-express in the ring with a (smaller or larger) weight cap."""
        return LambdaScalar(self.ring.with_cap(cap), self.terms)

    def adams(self, k: int) -> LambdaScalar:
        return adams(k, self)

    def exp(self) -> LambdaScalar:
        return exp_scalar(self)


def adams(k: int, x: LambdaScalar) -> LambdaScalar:
    """Adams operation ``psi^k``; results above the weight cap are dropped silently."""
    if k < 1:
        raise ValueError("Adams operations are indexed by k >= 1")
    if k == 1:
        return x
    mode = x.ring.mode
    out: dict[Monomial, Fraction] = {}
    for m, c in x.terms.items():
        if mono_weight(m) * k > x.ring.cap:
            continue
        mk = mono_adams(k, m, mode)
        out[mk] = out.get(mk, 0) + c
    return LambdaScalar(x.ring, out)


def exp_scalar(x: LambdaScalar) -> LambdaScalar:
    """Truncated Taylor series ``sum x**n / n!`` for ``x`` in the positive filtration."""
    if not x.in_positive_filtration():
        raise DomainError("exp is only defined on the positive filtration (zero constant term)")
    result = x.ring.one()
    w = x.min_weight()
    if w is None:
        return result
    power = x.ring.one()
    for n in range(1, x.ring.cap // w + 1):
        power = power * x
        if not power:
            break
        result = result + power * Fraction(1, factorial(n))
    return result


def specialize_symmetric(x: LambdaScalar) -> LambdaScalar:
    """Map a free-mode scalar to the symmetrized theory, ``psi^k(g) -> g**k``."""
    ring = x.ring.symmetric()
    if x.ring.mode == SYMMETRIC:
        return x
    out: dict[Monomial, Fraction] = {}
    for m, c in x.terms.items():
        s = mono_specialize(m)
        out[s] = out.get(s, 0) + c
    return LambdaScalar(ring, out)


def lsum(ring: LambdaRing, items: Iterable[LambdaScalar]) -> LambdaScalar:
    out: dict[Monomial, Fraction] = {}
    for x in items:
        for m, c in x.terms.items():
            out[m] = out.get(m, 0) + c
    return LambdaScalar(ring, out)


# ------------------------------------------------------------------ printing
def format_monomial(m: Monomial, ring: LambdaRing) -> str:
    idx = {n: i for i, n in enumerate(ring.names)}
    parts = []
    for (name, lvl), e in sorted(m, key=lambda t: (idx[t[0][0]], t[0][1])):
        base = name if lvl == 1 else f"psi{lvl}({name})"
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts)


def format_term(c: Fraction, factors: list[str]) -> tuple[str, str]:
    """Return (sign, body) for one printed term ``c * f1 * f2 ...``."""
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not factors:
        return sign, str(a)
    body = "*".join(factors)
    return sign, body if a == 1 else f"{a}*{body}"


def join_terms(terms: list[tuple[str, str]]) -> str:
    if not terms:
        return "0"
    out = []
    for i, (sign, body) in enumerate(terms):
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_scalar(x: LambdaScalar) -> str:
    ring = x.ring
    terms = []
    for m in sorted(x.terms, key=ring.sort_key):
        mono = format_monomial(m, ring)
        terms.append(format_term(x.terms[m], [mono] if mono else []))
    return join_terms(terms)
