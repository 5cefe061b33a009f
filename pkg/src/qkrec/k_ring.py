"""K-ring of a product of projective spaces with coefficients in a truncated lambda-ring.

Elements are stored over the nilpotent basis ``u^j = prod_i (1 - P_i)^{j_i}``,
``0 <= j_i <= N_i``, where ``P_i = O(-1)`` pulled back from the i-th factor.
The relation ``u_i^{N_i+1} = 0`` holds by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Mapping, Sequence

from .lambda_ring import (
    ONE,
    DomainError,
    LambdaRing,
    LambdaScalar,
    Monomial,
    StructureError,
    as_fraction,
    format_monomial,
    format_term,
    join_terms,
    mono_adams,
    mono_mul,
    mono_specialize,
    mono_weight,
)

Multi = tuple[int, ...]
# Residues at P = 1 come out as -sum(coefficients); chi(1) = 1 fixes the orientation.
_ORIENTATION = -1


@dataclass(frozen=True)
class KRingSpec:
    """``X = CP^{N_1} x ... x CP^{N_K}``."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        if not self.factors or any(n < 1 for n in self.factors):
            raise ValueError("need at least one factor CP^N with N >= 1")

    @classmethod
    def parse(cls, text: str) -> KRingSpec:
        """Parse ``CP:1`` or ``CP:1,2`` (also ``CP1xCP2``)."""
        t = text.strip().replace(" ", "")
        if t.upper().startswith("CP:"):
            return cls(tuple(int(x) for x in t[3:].split(",")))
        parts = t.upper().split("X")
        if all(p.startswith("CP") and p[2:].isdigit() for p in parts):
            return cls(tuple(int(p[2:]) for p in parts))
        raise ValueError(f"cannot parse space {text!r}; expected e.g. CP:1 or CP:1,2")

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def zero_index(self) -> Multi:
        return (0,) * len(self.factors)

    def basis(self) -> list[Multi]:
        return list(itertools.product(*(range(n + 1) for n in self.factors)))

    def pname(self, i: int) -> str:
        return "P" if self.rank == 1 else f"P{i + 1}"

    def uname(self, i: int) -> str:
        return "u" if self.rank == 1 else f"u{i + 1}"

    def qname(self, i: int) -> str:
        return "Q" if self.rank == 1 else f"Q{i + 1}"

    def label(self) -> str:
        return "CP:" + ",".join(map(str, self.factors))


def add_multi(a: Multi, b: Multi) -> Multi:
    return tuple(x + y for x, y in zip(a, b))


def _fits(j: Multi, factors: tuple[int, ...]) -> bool:
    return all(x <= n for x, n in zip(j, factors))


class KClass:
    """Element of ``K^0(X) (x) Lambda``.

    ``terms`` maps ``(j, monomial)`` to a Fraction: the coefficient of
    ``u^j * monomial``.
    """

    __slots__ = ("spec", "ring", "terms", "_hash")

    def __init__(self, spec: KRingSpec, ring: LambdaRing, terms: Mapping[tuple[Multi, Monomial], Fraction] | None = None):
        self.spec = spec
        self.ring = ring
        cap, factors = ring.cap, spec.factors
        self.terms = {
            k: as_fraction(c)
            for k, c in (terms or {}).items()
            if c and mono_weight(k[1]) <= cap and _fits(k[0], factors)
        }
        self._hash = None

    # ----------------------------------------------------------- constructors
    @classmethod
    def zero(cls, spec, ring) -> KClass:
        return cls(spec, ring, {})

    @classmethod
    def one(cls, spec, ring) -> KClass:
        return cls(spec, ring, {(spec.zero_index, ONE): Fraction(1)})

    @classmethod
    def from_scalar(cls, spec, x: LambdaScalar) -> KClass:
        z = spec.zero_index
        return cls(spec, x.ring, {(z, m): c for m, c in x.terms.items()})

    @classmethod
    def from_coeffs(cls, spec, ring, coeffs: Mapping[Multi, LambdaScalar]) -> KClass:
        """Build from a map ``j -> LambdaScalar`` over the ``u^j`` basis."""
        terms = {}
        for j, s in coeffs.items():
            j = tuple(j)
            if len(j) != spec.rank:
                raise StructureError("multi-index length does not match the space")
            if s.ring != ring:
                raise StructureError("coefficient lives in a different lambda-ring")
            for m, c in s.terms.items():
                terms[(j, m)] = c
        return cls(spec, ring, terms)

    @classmethod
    def u(cls, spec, ring, i: int, power: int = 1) -> KClass:
        j = [0] * spec.rank
        j[i] = power
        return cls(spec, ring, {(tuple(j), ONE): Fraction(1)})

    # ----------------------------------------------------------------- access
    def coeff(self, j: Multi) -> LambdaScalar:
        j = tuple(j)
        return LambdaScalar(self.ring, {m: c for (jj, m), c in self.terms.items() if jj == j})

    def coeffs(self) -> dict[Multi, LambdaScalar]:
        return {j: self.coeff(j) for j in self.spec.basis()}

    @property
    def augmentation(self) -> Fraction:
        return self.terms.get((self.spec.zero_index, ONE), Fraction(0))

    def is_scalar(self) -> bool:
        z = self.spec.zero_index
        return all(j == z for j, _ in self.terms)

    def scalar_part(self) -> LambdaScalar:
        """The ``u^0`` coefficient."""
        return self.coeff(self.spec.zero_index)

    # ------------------------------------------------------------- arithmetic
    def _coerce(self, other):
        if isinstance(other, KClass):
            if other.spec != self.spec or other.ring != self.ring:
                raise StructureError("K-classes over different spaces or lambda-rings")
            return other
        if isinstance(other, LambdaScalar):
            if other.ring != self.ring:
                raise StructureError("lambda-ring mismatch")
            return KClass.from_scalar(self.spec, other)
        if isinstance(other, (int, Rational)):
            return KClass(self.spec, self.ring, {(self.spec.zero_index, ONE): as_fraction(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return KClass(self.spec, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return KClass(self.spec, self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = as_fraction(other)
            return KClass(self.spec, self.ring, {k: c * v for k, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return kmul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return invert_unit(self) ** (-n)
        out = KClass.one(self.spec, self.ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Rational, LambdaScalar)):
            other = self._coerce(other)
        if not isinstance(other, KClass):
            return NotImplemented
        return self.spec == other.spec and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"KClass({self})"

    def __str__(self):
        return self.format()

    def format(self, basis: str = "u") -> str:
        return format_kterms({(0, j, m): c for (j, m), c in self.terms.items()}, self.spec, self.ring, basis)

    def adams(self, k: int) -> KClass:
        return kadams(k, self)


def kmul(x: KClass, y: KClass) -> KClass:
    """Product reduced modulo ``(1 - P_i)^{N_i + 1}``."""
    if x.spec != y.spec or x.ring != y.ring:
        raise StructureError("K-classes over different spaces or lambda-rings")
    cap, factors = x.ring.cap, x.spec.factors
    out: dict = {}
    for (j1, m1), c1 in x.terms.items():
        w1 = mono_weight(m1)
        for (j2, m2), c2 in y.terms.items():
            if w1 + mono_weight(m2) > cap:
                continue
            j = add_multi(j1, j2)
            if not _fits(j, factors):
                continue
            key = (j, mono_mul(m1, m2))
            out[key] = out.get(key, 0) + c1 * c2
    return KClass(x.spec, x.ring, out)


@lru_cache(maxsize=None)
def _binomial_u(a: int, n: int) -> tuple[Fraction, ...]:
    """Coefficients of ``(1 - u)^a`` modulo ``u^{n+1}`` (generalized binomial series)."""
    out = []
    for j in range(n + 1):
        # binom(a, j) for arbitrary integer a
        num = 1
        for t in range(j):
            num *= a - t
        out.append(Fraction(num * (-1) ** j, _fact(j)))
    return tuple(out)


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return 1 if n < 2 else n * _fact(n - 1)


def line_class(a: Sequence[int], spec: KRingSpec, ring: LambdaRing) -> KClass:
    """``P^a = prod_i P_i^{a_i}`` expanded over the ``u`` basis; negative ``a_i`` allowed."""
    a = tuple(int(x) for x in a)
    if len(a) != spec.rank:
        raise StructureError("exponent vector length does not match the space")
    per_factor = [_binomial_u(ai, n) for ai, n in zip(a, spec.factors)]
    terms = {}
    for j in spec.basis():
        c = Fraction(1)
        for ji, coeffs in zip(j, per_factor):
            c *= coeffs[ji]
        terms[(j, ONE)] = c
    return KClass(spec, ring, terms)


def invert_unit(x: KClass) -> KClass:
    """Two-sided inverse via the finite Neumann series of the nilpotent part."""
    a0 = x.augmentation
    if a0 == 0:
        raise DomainError("K-class with zero augmentation is not invertible")
    one = KClass.one(x.spec, x.ring)
    n = one - x * (1 / a0)  # x = a0 (1 - n), n nilpotent
    result = one
    power = one
    # nilpotency index is bounded by sum(N_i) + cap + 1
    for _ in range(sum(x.spec.factors) + x.ring.cap + 1):
        power = power * n
        if not power:
            break
        result = result + power
    return result * (1 / a0)


@lru_cache(maxsize=None)
def _residue_u_basis(j: int, n: int) -> Fraction:
    """``Res_{P=1} (1-P)^j / (1-P)^{n+1} dP/P`` computed in the local coordinate ``u = 1 - P``.

    ``dP/P = -du / (1 - u) = -sum_m u^m du``; the residue is the coefficient
    of ``u^{-1}`` in ``-u^{j-n-1} sum_m u^m``.
    """
    m = n - j  # exponent of the geometric series hitting u^{-1}
    return Fraction(-1) if m >= 0 else Fraction(0)


def chi(x: KClass) -> LambdaScalar:
    """Euler characteristic as the iterated residue at ``P_i = 1``, normalized so ``chi(1) = 1``."""
    out: dict[Monomial, Fraction] = {}
    factors = x.spec.factors
    for (j, m), c in x.terms.items():
        r = Fraction(1)
        for ji, n in zip(j, factors):
            r *= _ORIENTATION * _residue_u_basis(ji, n)
        if r:
            out[m] = out.get(m, 0) + c * r
    return LambdaScalar(x.ring, out)


@lru_cache(maxsize=None)
def _adams_basis(k: int, j: Multi, factors: tuple[int, ...]) -> tuple[tuple[Multi, Fraction], ...]:
    """Image of ``u^j`` under ``P_i -> P_i^k``, i.e. ``u_i -> 1 - (1 - u_i)^k``."""
    per_factor = []
    for ji, n in zip(j, factors):
        img = [-c for c in _binomial_u(k, n)]
        img[0] += 1  # 1 - (1-u)^k
        poly = [Fraction(1)] + [Fraction(0)] * n
        for _ in range(ji):
            new = [Fraction(0)] * (n + 1)
            for s, a in enumerate(poly):
                if a:
                    for t, b in enumerate(img):
                        if b and s + t <= n:
                            new[s + t] += a * b
            poly = new
        per_factor.append(poly)
    out = []
    for jj in itertools.product(*(range(n + 1) for n in factors)):
        c = Fraction(1)
        for t, poly in zip(jj, per_factor):
            c *= poly[t]
        if c:
            out.append((jj, c))
    return tuple(out)


def kadams(k: int, x: KClass) -> KClass:
    """Adams operation on ``K^0(X) (x) Lambda``: ``P^a -> P^{ka}`` and ``psi^k`` on coefficients."""
    if k < 1:
        raise ValueError("Adams operations are indexed by k >= 1")
    if k == 1:
        return x
    cap, mode, factors = x.ring.cap, x.ring.mode, x.spec.factors
    out: dict = {}
    for (j, m), c in x.terms.items():
        if mono_weight(m) * k > cap:
            continue
        mk = mono_adams(k, m, mode)
        for jj, b in _adams_basis(k, j, factors):
            key = (jj, mk)
            out[key] = out.get(key, 0) + c * b
    return KClass(x.spec, x.ring, out)


def kspecialize(x: KClass) -> KClass:
    out: dict = {}
    for (j, m), c in x.terms.items():
        key = (j, mono_specialize(m))
        out[key] = out.get(key, 0) + c
    return KClass(x.spec, x.ring.symmetric(), out)


# ------------------------------------------------------------------ printing
@lru_cache(maxsize=None)
def _u_to_p(j: Multi) -> tuple[tuple[Multi, int], ...]:
    """``u^j = prod (1 - P_i)^{j_i}`` expanded in monomials ``P^a``."""
    out = []
    for a in itertools.product(*(range(x + 1) for x in j)):
        c = 1
        for ai, ji in zip(a, j):
            c *= comb(ji, ai) * (-1) ** ai
        out.append((a, c))
    return tuple(out)


def _format_basis(j: Multi, spec: KRingSpec, basis: str) -> list[str]:
    out = []
    for i, e in enumerate(j):
        if e:
            name = spec.uname(i) if basis == "u" else spec.pname(i)
            out.append(name if e == 1 else f"{name}^{e}")
    return out


def format_q(e: int) -> list[str]:
    if e == 0:
        return []
    return ["q" if e == 1 else f"q^{e}"]


def format_kterms(terms: Mapping[tuple[int, Multi, Monomial], Fraction], spec: KRingSpec,
                  ring: LambdaRing, basis: str = "u") -> str:
    """Print ``sum c * mono * basis * q^e`` with keys ``(e, j, mono)`` over the ``u`` basis.

    With ``basis="P"`` the ``u^j`` are re-expanded into monomials ``P^a``.
    """
    if basis == "P":
        conv: dict = {}
        for (e, j, m), c in terms.items():
            for a, b in _u_to_p(j):
                key = (e, a, m)
                conv[key] = conv.get(key, 0) + c * b
        terms = {k: v for k, v in conv.items() if v}
    order = sorted(terms, key=lambda k: (ring.sort_key(k[2]), k[0], k[1]))
    out = []
    for e, j, m in order:
        factors = []
        mono = format_monomial(m, ring)
        if mono:
            factors.append(mono)
        factors += _format_basis(j, spec, basis)
        factors += format_q(e)
        out.append(format_term(terms[(e, j, m)], factors))
    return join_terms(out)
