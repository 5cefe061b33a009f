"""Rational functions of q with K-ring coefficients.

A :class:`QRat` is stored as ``q^shift * sum_key key * p_key(q) / D(q)`` where
each ``key = (j, monomial)`` names a basis element ``u^j * monomial`` of the
coefficient algebra, ``p_key`` is an exact rational polynomial, and
``D = prod_n Phi_n(q)^{e_n}`` is a product of cyclotomic polynomials.

The coefficient algebra is a finite-dimensional Q-vector space, so a QRat is
a vector of ordinary rational functions with a common denominator; removing
every cyclotomic factor that divides all numerators yields a unique reduced
form.  The public denominator alphabet ``prod_r (1 - q^r)^{m_r}`` is derived
from the reduced form deterministically, so equality of canonical forms is
equality of rational functions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

from flint import fmpq, fmpq_poly

from .k_ring import KClass, KRingSpec, Multi, _fits, add_multi, chi, format_kterms, kadams, kspecialize
from .lambda_ring import (
    ONE,
    DomainError,
    LambdaRing,
    LambdaScalar,
    Monomial,
    StructureError,
    as_fraction,
    mono_mul,
    mono_specialize,
    mono_weight,
)

Key = tuple[Multi, Monomial]

_ZERO = fmpq_poly([])
_ONE = fmpq_poly([1])


def _q(c) -> fmpq:
    c = as_fraction(c)
    return fmpq(c.numerator, c.denominator)


def _frac(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> fmpq_poly:
    """``Phi_n(q)``, from ``q^n - 1 = prod_{d | n} Phi_d(q)``."""
    p = fmpq_poly([-1] + [0] * (n - 1) + [1])
    for d in divisors(n)[:-1]:
        p, r = divmod(p, cyclotomic(d))
        assert r.is_zero()
    return p


def _cyc_poly(cyc: Mapping[int, int]) -> fmpq_poly:
    out = _ONE
    for n, e in cyc.items():
        for _ in range(e):
            out = out * cyclotomic(n)
    return out


def _low_index(p: fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    return 0


def _inv_series(p: fmpq_poly, n: int) -> fmpq_poly:
    """Power series inverse of ``p`` modulo ``x^n`` (requires ``p(0) != 0``)."""
    c = p.coeffs()
    if not c or c[0] == 0:
        raise ZeroDivisionError("series not invertible")
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, n):
        s = fmpq(0)
        for i in range(1, min(k, len(c) - 1) + 1):
            s += c[i] * out[k - i]
        out.append(-s * inv0)
    return fmpq_poly(out)


def _geometric(r: int, m: int, n: int) -> fmpq_poly:
    """``(1 - x^r)^{-m}`` modulo ``x^n``."""
    if n <= 0:
        return _ZERO
    g = fmpq_poly([1 if i % r == 0 else 0 for i in range(n)])
    return g.pow_trunc(m, n) if m > 1 else g


class QRat:
    """Rational function of q with coefficients in ``K^0(X) (x) Lambda``; immutable."""

    __slots__ = ("spec", "ring", "shift", "cyc", "terms", "_hash")

    def __init__(self, spec: KRingSpec, ring: LambdaRing, terms: Mapping[Key, fmpq_poly],
                 shift: int = 0, cyc: Mapping[int, int] | None = None, *, reduce: bool = True):
        self.spec = spec
        self.ring = ring
        cap, factors = ring.cap, spec.factors
        t = {k: p for k, p in terms.items()
             if not p.is_zero() and mono_weight(k[1]) <= cap and _fits(k[0], factors)}
        cyc = {n: e for n, e in sorted((cyc or {}).items()) if e}
        if not t:
            shift, cyc = 0, {}
        elif reduce:
            for n in list(cyc):
                phi = cyclotomic(n)
                while cyc[n]:
                    quots = {}
                    for k, p in t.items():
                        qq, r = divmod(p, phi)
                        if not r.is_zero():
                            break
                        quots[k] = qq
                    else:
                        t = quots
                        cyc[n] -= 1
                        continue
                    break
                if not cyc[n]:
                    del cyc[n]
            low = min(_low_index(p) for p in t.values())
            if low:
                t = {k: p.right_shift(low) for k, p in t.items()}
                shift += low
        self.terms = t
        self.shift = shift
        self.cyc = cyc
        self._hash = None

    # ----------------------------------------------------------- constructors
    @classmethod
    def zero(cls, spec, ring) -> QRat:
        return cls(spec, ring, {})

    @classmethod
    def one(cls, spec, ring) -> QRat:
        return cls(spec, ring, {(spec.zero_index, ONE): _ONE})

    @classmethod
    def q_power(cls, spec, ring, n: int) -> QRat:
        return cls(spec, ring, {(spec.zero_index, ONE): _ONE}, shift=n)

    @classmethod
    def from_kclass(cls, x: KClass, qexp: int = 0) -> QRat:
        return cls(x.spec, x.ring, {k: fmpq_poly([_q(c)]) for k, c in x.terms.items()}, shift=qexp)

    @classmethod
    def from_scalar(cls, spec, x: LambdaScalar) -> QRat:
        return cls.from_kclass(KClass.from_scalar(spec, x))

    @classmethod
    def from_laurent(cls, spec, ring, coeffs: Mapping[int, KClass]) -> QRat:
        """``sum_e coeffs[e] * q^e``."""
        if not coeffs:
            return cls.zero(spec, ring)
        low = min(coeffs)
        buckets: dict[Key, list] = {}
        for e, x in coeffs.items():
            if x.spec != spec or x.ring != ring:
                raise StructureError("coefficient over a different space or lambda-ring")
            for k, c in x.terms.items():
                buckets.setdefault(k, {})[e - low] = c
        terms = {}
        for k, cs in buckets.items():
            deg = max(cs)
            terms[k] = fmpq_poly([_q(cs.get(i, 0)) for i in range(deg + 1)])
        return cls(spec, ring, terms, shift=low)

    @classmethod
    def from_alphabet(cls, spec, ring, num: Mapping[int, KClass], den: Mapping[int, int]) -> QRat:
        """``sum_e num[e] q^e / prod_r (1 - q^r)^{m_r}``."""
        f = cls.from_laurent(spec, ring, num)
        cyc: dict[int, int] = {}
        sign = 1
        for r, m in den.items():
            if r < 1 or m < 0:
                raise ValueError(f"bad denominator factor (1-q^{r})^{m}")
            for d in divisors(r):
                cyc[d] = cyc.get(d, 0) + m
            if m % 2:
                sign = -sign
        # 1 - q^r = -prod_{d|r} Phi_d(q)
        terms = f.terms if sign > 0 else {k: -p for k, p in f.terms.items()}
        return cls(spec, ring, terms, f.shift, cyc)

    # -------------------------------------------------------------- structure
    def _coerce(self, other) -> QRat:
        if isinstance(other, QRat):
            if other.spec != self.spec or other.ring != self.ring:
                raise StructureError("QRat operands over different spaces or lambda-rings")
            return other
        if isinstance(other, QLaurent):
            return self._coerce(other.to_qrat())
        if isinstance(other, KClass):
            if other.spec != self.spec or other.ring != self.ring:
                raise StructureError("K-class over a different space or lambda-ring")
            return QRat.from_kclass(other)
        if isinstance(other, LambdaScalar):
            if other.ring != self.ring:
                raise StructureError("lambda-ring mismatch")
            return QRat.from_scalar(self.spec, other)
        if isinstance(other, (int, Rational)):
            return QRat(self.spec, self.ring, {(self.spec.zero_index, ONE): fmpq_poly([_q(other)])})
        return NotImplemented

    def is_laurent(self) -> bool:
        return not self.cyc

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def den_alphabet(self) -> tuple[dict[int, int], dict[int, int]]:
        """Greedy cover of the reduced cyclotomic denominator by factors ``1 - q^r``.

        Returns ``(den, surplus)``: ``den`` maps r to m_r, ``surplus`` lists
        the cyclotomic factors the cover introduces beyond the reduced form.
        """
        need = dict(self.cyc)
        den: dict[int, int] = {}
        surplus: dict[int, int] = {}
        while need:
            n = max(need)
            den[n] = den.get(n, 0) + 1
            for d in divisors(n):
                if need.get(d):
                    need[d] -= 1
                    if not need[d]:
                        del need[d]
                else:
                    surplus[d] = surplus.get(d, 0) + 1
        return dict(sorted(den.items())), surplus

    @property
    def den(self) -> dict[int, int]:
        return self.den_alphabet()[0]

    def _alphabet_terms(self) -> tuple[dict[Key, fmpq_poly], dict[int, int]]:
        den, surplus = self.den_alphabet()
        mult = _cyc_poly(surplus)
        if sum(den.values()) % 2:
            mult = -mult
        return {k: p * mult for k, p in self.terms.items()}, den

    @property
    def num(self) -> QLaurent:
        """Numerator over the alphabet denominator :attr:`den`."""
        terms, _ = self._alphabet_terms()
        return QLaurent._from_polys(self.spec, self.ring, terms, self.shift)

    # ------------------------------------------------------------- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        shift = min(self.shift, other.shift)
        cyc = {n: max(self.cyc.get(n, 0), other.cyc.get(n, 0)) for n in set(self.cyc) | set(other.cyc)}
        out: dict[Key, fmpq_poly] = {}
        for f in (self, other):
            cof = _cyc_poly({n: e - f.cyc.get(n, 0) for n, e in cyc.items()})
            cof = cof.left_shift(f.shift - shift) if f.shift > shift else cof
            for k, p in f.terms.items():
                v = p * cof
                prev = out.get(k)
                out[k] = v if prev is None else prev + v
        return QRat(self.spec, self.ring, out, shift, cyc)

    __radd__ = __add__

    def __neg__(self):
        return QRat(self.spec, self.ring, {k: -p for k, p in self.terms.items()}, self.shift, self.cyc, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = _q(other)
            if c == 0:
                return QRat.zero(self.spec, self.ring)
            return QRat(self.spec, self.ring, {k: p * c for k, p in self.terms.items()}, self.shift, self.cyc, reduce=False)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap, factors = self.ring.cap, self.spec.factors
        out: dict[Key, fmpq_poly] = {}
        for (j1, m1), p1 in self.terms.items():
            w1 = mono_weight(m1)
            for (j2, m2), p2 in other.terms.items():
                if w1 + mono_weight(m2) > cap:
                    continue
                j = add_multi(j1, j2)
                if not _fits(j, factors):
                    continue
                key = (j, mono_mul(m1, m2))
                v = p1 * p2
                prev = out.get(key)
                out[key] = v if prev is None else prev + v
        cyc = dict(self.cyc)
        for n, e in other.cyc.items():
            cyc[n] = cyc.get(n, 0) + e
        return QRat(self.spec, self.ring, out, self.shift + other.shift, cyc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use invert_one_minus_pq / alphabet constructors for inverses")
        out = QRat.one(self.spec, self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, QRat):
            try:
                other = self._coerce(other)
            except StructureError:
                return False
            if other is NotImplemented:
                return NotImplemented
        return (self.spec == other.spec and self.ring == other.ring and self.shift == other.shift
                and self.cyc == other.cyc and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self.ring, self.shift, tuple(self.cyc.items()),
                               frozenset((k, str(p)) for k, p in self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"QRat({self})"

    def __str__(self):
        return self.format()

    def format(self, basis: str = "u") -> str:
        num, den = self._alphabet_terms()
        text = format_kterms(_flatten(num, self.shift), self.spec, self.ring, basis)
        if not den:
            return text
        fac = []
        for r, m in den.items():
            base = "(1-q)" if r == 1 else f"(1-q^{r})"
            fac.append(base if m == 1 else f"{base}^{m}")
        dtext = fac[0] if len(fac) == 1 else "(" + "*".join(fac) + ")"
        ntext = text if _is_atomic(text) else f"({text})"
        return f"{ntext}/{dtext}"

    # ------------------------------------------------------------- operations
    def map_keys(self, fn, spec=None, ring=None) -> QRat:
        """Apply a Q[q]-linear map given on basis keys as ``key -> [(key', coefficient)]``."""
        out: dict[Key, fmpq_poly] = {}
        for k, p in self.terms.items():
            for k2, c in fn(k):
                v = p * _q(c)
                prev = out.get(k2)
                out[k2] = v if prev is None else prev + v
        return QRat(spec or self.spec, ring or self.ring, out, self.shift, self.cyc)

    def adams(self, k: int) -> QRat:
        """``psi^k``: adams on coefficients, ``P -> P^k`` and ``q -> q^k``."""
        if k == 1:
            return self
        num, den = self._alphabet_terms()
        f = QRat(self.spec, self.ring, num, self.shift, reduce=False)
        coeffs = {e: kadams(k, x) for e, x in f.laurent_coefficients().items()}
        return QRat.from_alphabet(self.spec, self.ring, {k * e: x for e, x in coeffs.items()},
                                  {k * r: m for r, m in den.items()})

    def specialize_symmetric(self) -> QRat:
        ring = self.ring.symmetric()
        return self.map_keys(lambda k: [((k[0], mono_specialize(k[1])), 1)], ring=ring)

    def chi(self) -> QRat:
        """Apply the Euler characteristic pointwise in q; the result has only ``u^0`` terms."""
        z = self.spec.zero_index
        cache: dict[Multi, Fraction] = {}

        def fn(k):
            j, m = k
            if j not in cache:
                cache[j] = chi(KClass(self.spec, self.ring, {(j, ONE): 1})).constant
            return [((z, m), cache[j])] if cache[j] else []

        return self.map_keys(fn)

    def substitute_inverse_q(self) -> QRat:
        """``f(q) -> f(1/q)``."""
        num, den = self._alphabet_terms()
        coeffs = QRat(self.spec, self.ring, num, self.shift, reduce=False).laurent_coefficients()
        R = sum(r * m for r, m in den.items())
        sign = -1 if sum(den.values()) % 2 else 1
        return QRat.from_alphabet(self.spec, self.ring, {R - e: x * sign for e, x in coeffs.items()}, den)

    def laurent_coefficients(self) -> dict[int, KClass]:
        """Coefficients of a Laurent polynomial (raises if there is a denominator)."""
        if self.cyc:
            raise DomainError("not a Laurent polynomial")
        out: dict[int, dict] = {}
        for k, p in self.terms.items():
            for i, c in enumerate(p.coeffs()):
                if c != 0:
                    out.setdefault(i + self.shift, {})[k] = _frac(c)
        return {e: KClass(self.spec, self.ring, t) for e, t in sorted(out.items())}

    def to_laurent(self) -> QLaurent:
        return QLaurent(self.spec, self.ring, self.laurent_coefficients())

    def weight_parts(self) -> dict[int, QRat]:
        parts: dict[int, dict] = {}
        for k, p in self.terms.items():
            parts.setdefault(mono_weight(k[1]), {})[k] = p
        return {w: QRat(self.spec, self.ring, t, self.shift, self.cyc) for w, t in sorted(parts.items())}

    def evaluate(self, q) -> KClass:
        """Exact value at a rational ``q``."""
        qv = _q(q)
        d = _cyc_poly(self.cyc)(qv)
        if d == 0:
            raise ZeroDivisionError(f"pole at q = {q}")
        scale = qv ** self.shift / d if self.shift >= 0 else 1 / (qv ** (-self.shift) * d)
        return KClass(self.spec, self.ring, {k: _frac(p(qv) * scale) for k, p in self.terms.items()})

    def pole_order_at_one(self) -> int:
        return self.cyc.get(1, 0)

    def weight_truncate(self, ring: LambdaRing) -> QRat:
        return QRat(self.spec, ring, self.terms, self.shift, self.cyc)


def _is_atomic(text: str) -> bool:
    body = text[1:] if text.startswith("-") else text
    return " " not in body


def _flatten(terms: Mapping[Key, fmpq_poly], shift: int) -> dict:
    out = {}
    for (j, m), p in terms.items():
        for i, c in enumerate(p.coeffs()):
            if c != 0:
                out[(i + shift, j, m)] = _frac(c)
    return out


class QLaurent:
    """Laurent polynomial in q with K-class coefficients (finite map exponent -> KClass)."""

    __slots__ = ("spec", "ring", "coeffs")

    def __init__(self, spec: KRingSpec, ring: LambdaRing, coeffs: Mapping[int, KClass] | None = None):
        self.spec = spec
        self.ring = ring
        self.coeffs = {int(e): x for e, x in sorted((coeffs or {}).items()) if x}

    @classmethod
    def _from_polys(cls, spec, ring, terms, shift) -> QLaurent:
        return QRat(spec, ring, terms, shift, reduce=False).to_laurent()

    @classmethod
    def of(cls, x) -> QLaurent:
        if isinstance(x, QLaurent):
            return x
        if isinstance(x, QRat):
            return x.to_laurent()
        if isinstance(x, KClass):
            return cls(x.spec, x.ring, {0: x})
        raise TypeError(f"cannot view {type(x).__name__} as a Laurent polynomial")

    def to_qrat(self) -> QRat:
        return QRat.from_laurent(self.spec, self.ring, self.coeffs)

    def __getitem__(self, e: int) -> KClass:
        return self.coeffs.get(e, KClass.zero(self.spec, self.ring))

    def __iter__(self):
        return iter(self.coeffs.items())

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, QLaurent):
            return self.spec == other.spec and self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, QRat):
            return self.to_qrat() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.ring, tuple(self.coeffs.items())))

    def __add__(self, other):
        return QLaurent.of(self.to_qrat() + _as_qrat_operand(other))

    __radd__ = __add__

    def __sub__(self, other):
        return QLaurent.of(self.to_qrat() - _as_qrat_operand(other))

    def __neg__(self):
        return QLaurent(self.spec, self.ring, {e: -x for e, x in self.coeffs.items()})

    def __mul__(self, other):
        r = self.to_qrat() * _as_qrat_operand(other)
        return QLaurent.of(r) if r.is_laurent() else r

    __rmul__ = __mul__

    def adams(self, k: int) -> QLaurent:
        return QLaurent(self.spec, self.ring, {k * e: kadams(k, x) for e, x in self.coeffs.items()})

    def specialize_symmetric(self) -> QLaurent:
        return QLaurent(self.spec, self.ring.symmetric(), {e: kspecialize(x) for e, x in self.coeffs.items()})

    def substitute_inverse_q(self) -> QLaurent:
        return QLaurent(self.spec, self.ring, {-e: x for e, x in self.coeffs.items()})

    def __repr__(self):
        return f"QLaurent({self})"

    def __str__(self):
        return self.format()

    def format(self, basis: str = "u") -> str:
        flat = {(e, j, m): c for e, x in self.coeffs.items() for (j, m), c in x.terms.items()}
        return format_kterms(flat, self.spec, self.ring, basis)


def _as_qrat_operand(x):
    return x.to_qrat() if isinstance(x, QLaurent) else x


def as_qrat(x, spec: KRingSpec, ring: LambdaRing) -> QRat:
    """Coerce numbers, scalars, K-classes and Laurent polynomials to a QRat."""
    if isinstance(x, QRat):
        out = x
    elif isinstance(x, QLaurent):
        out = x.to_qrat()
    elif isinstance(x, KClass):
        out = QRat.from_kclass(x)
    elif isinstance(x, LambdaScalar):
        if x.ring != ring:
            raise StructureError("lambda-ring mismatch")
        out = QRat.from_scalar(spec, x)
    elif isinstance(x, (int, Rational)):
        out = QRat.one(spec, ring) * x
    else:
        raise TypeError(f"cannot interpret {type(x).__name__} as a rational function of q")
    if out.spec != spec or out.ring != ring:
        raise StructureError("operand over a different space or lambda-ring")
    return out


# ---------------------------------------------------------------- operations
def invert_one_minus_pq(a, r: int, m: int, spec: KRingSpec, ring: LambdaRing) -> QRat:
    """``1 / (1 - P^a q^r)^m`` in canonical form.

    With ``P^a = 1 - w`` (``w`` nilpotent), ``1 - P^a q^r = (1 - q^r) + w q^r``,
    so the inverse power is the finite sum
    ``sum_n binom(m+n-1, n) (-w q^r)^n / (1 - q^r)^{m+n}``.
    """
    from .k_ring import line_class

    if r < 1:
        raise DomainError("1 - P^a q^0 has no inverse (nilpotent or zero-augmentation factor)")
    if m < 0:
        raise ValueError("m must be non-negative")
    one = KClass.one(spec, ring)
    w = one - line_class(a, spec, ring)
    total = QRat.zero(spec, ring)
    wn = one
    n = 0
    while wn:
        c = Fraction(_binom(m + n - 1, n)) * (-1) ** n
        total = total + QRat.from_alphabet(spec, ring, {r * n: wn * c}, {r: m + n} if m + n else {})
        wn = wn * w
        n += 1
    return total


def _binom(a: int, b: int) -> int:
    from math import comb

    return comb(a, b) if a >= 0 else (1 if b == 0 else 0)


def expand_at_zero(f: QRat, order: int) -> QLaurent:
    """Coefficients of ``q^n`` for ``n <= order`` in the expansion of ``f`` at ``q = 0``."""
    num, den = f._alphabet_terms()
    length = order - f.shift + 1
    if length <= 0 or not num:
        return QLaurent(f.spec, f.ring, {})
    g = _ONE
    for r, m in den.items():
        g = g.mul_low(_geometric(r, m, length), length)
    terms = {k: p.mul_low(g, length) for k, p in num.items()}
    return QLaurent._from_polys(f.spec, f.ring, terms, f.shift)


def expand_at_infinity(f: QRat, order: int) -> QLaurent:
    """Coefficients of ``q^n`` for ``n >= -order`` in the expansion of ``f`` at ``q = infinity``.

    With ``q = 1/w``: ``1 - q^{-r} = -w^{-r}(1 - w^r)``, so
    ``f = (-1)^M w^{R - shift - deg} rev(num)(w) / prod (1 - w^r)^{m_r}``.
    """
    num, den = f._alphabet_terms()
    if not num:
        return QLaurent(f.spec, f.ring, {})
    deg = max(p.degree() for p in num.values())
    R = sum(r * m for r, m in den.items())
    sign = -1 if sum(den.values()) % 2 else 1
    low = R - f.shift - deg  # lowest power of w
    length = order - low + 1
    if length <= 0:
        return QLaurent(f.spec, f.ring, {})
    g = _ONE * sign
    for r, m in den.items():
        g = g.mul_low(_geometric(r, m, length), length)
    out: dict[int, dict] = {}
    for k, p in num.items():
        c = p.coeffs()
        rev = fmpq_poly(list(reversed(c + [fmpq(0)] * (deg + 1 - len(c)))))
        s = rev.mul_low(g, length)
        for i, v in enumerate(s.coeffs()):
            if v != 0:
                out.setdefault(-(low + i), {})[k] = _frac(v)
    return QLaurent(f.spec, f.ring, {e: KClass(f.spec, f.ring, t) for e, t in out.items()})


def expand_at_one(f: QRat, order: int) -> dict[int, KClass]:
    """Laurent expansion in ``s = q - 1``: map from power of s (``>= -pole order``) to coefficient."""
    e1 = f.pole_order_at_one()
    length = order + e1 + 1
    if length <= 0 or not f.terms:
        return {}
    shift_poly = fmpq_poly([1, 1])
    rest = {n: e for n, e in f.cyc.items() if n != 1}
    inv = _inv_series(_cyc_poly(rest)(shift_poly), length)
    if f.shift >= 0:
        qs = shift_poly ** f.shift
    else:
        qs = _inv_series(shift_poly ** (-f.shift), length)
    g = inv.mul_low(qs, length)
    out: dict[int, dict] = {}
    for k, p in f.terms.items():
        s = p(shift_poly).mul_low(g, length)
        for i, v in enumerate(s.coeffs()):
            if v != 0:
                out.setdefault(i - e1, {})[k] = _frac(v)
    return {e: KClass(f.spec, f.ring, t) for e, t in sorted(out.items())}


def project_plus(f: QRat) -> QLaurent:
    """``[f]_+``: the unique Laurent polynomial with ``f - [f]_+`` regular at 0 and vanishing at infinity."""
    at_inf = expand_at_infinity(f, 0)
    at_zero = expand_at_zero(f, -1)
    coeffs = {e: x for e, x in at_inf if e >= 0}
    coeffs.update({e: x for e, x in at_zero if e < 0})
    return QLaurent(f.spec, f.ring, coeffs)


def residue_zero_infty(f: QRat) -> KClass:
    """``Res_{q=0} f dq/q + Res_{q=inf} f dq/q``; the residue at infinity is oriented so all residues sum to zero."""
    return expand_at_zero(f, 0)[0] - expand_at_infinity(f, 0)[0]


def qexp(x: QRat) -> QRat:
    """Exponential of a QRat whose coefficients lie in the positive weight filtration.

    Uses the weight-grading derivation: ``E_w = (1/w) sum_{v=1}^{w} v x_v E_{w-v}``.
    """
    parts = x.weight_parts()
    if 0 in parts:
        raise DomainError("exponent has a weight-0 part; exp would not terminate")
    cap = x.ring.cap
    E = [QRat.one(x.spec, x.ring)]
    for w in range(1, cap + 1):
        acc = QRat.zero(x.spec, x.ring)
        for v in range(1, w + 1):
            xv = parts.get(v)
            if xv is not None and E[w - v]:
                acc = acc + xv * E[w - v] * v
        E.append(acc / w)
    total = E[0]
    for e in E[1:]:
        total = total + e
    return total


def q_exponent_sum(items: Iterable[tuple[int, object]], spec: KRingSpec, ring: LambdaRing) -> QRat:
    """``sum_k numerator_k / (k (1 - q^k))``."""
    total = QRat.zero(spec, ring)
    for k, numerator in items:
        num = as_qrat(numerator, spec, ring)
        total = total + num * QRat.from_alphabet(spec, ring, {0: KClass.one(spec, ring)}, {k: 1}) / k
    return total


def exp_qseries(items: Iterable[tuple[int, object]], spec: KRingSpec, ring: LambdaRing) -> QRat:
    """``exp(sum_k numerator_k / (k (1 - q^k)))`` for numerators in the positive filtration."""
    return qexp(q_exponent_sum(items, spec, ring))


def q_pochhammer_inverse(m: int, spec: KRingSpec, ring: LambdaRing) -> QRat:
    """``1 / prod_{t=1}^m (1 - q^t)``."""
    return QRat.from_alphabet(spec, ring, {0: KClass.one(spec, ring)}, {t: 1 for t in range(1, m + 1)})


def exp_q(x, spec: KRingSpec, ring: LambdaRing) -> QRat:
    """Euler's q-exponential ``sum_m x^m / prod_{t<=m}(1 - q^t)``, truncated by weight."""
    x = as_qrat(x, spec, ring)
    total = QRat.one(spec, ring)
    power = QRat.one(spec, ring)
    for m in range(1, ring.cap + 1):
        power = power * x
        if not power:
            break
        total = total + power * q_pochhammer_inverse(m, spec, ring)
    return total
