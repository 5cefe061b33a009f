"""Series in Novikov variables and finite q-difference operators acting on them.

A :class:`NovikovSeries` stores ``sum_d Q^d f_d`` for multidegrees ``d`` inside
a box ``0 <= d_i <= cap_i``; contributions that leave the box are dropped and
counted in :attr:`NovikovSeries.dropped`.

A :class:`DiffOp` is a finite sum of normal-ordered terms
``c(q) Q^e prod_i (P_i q^{Q_i d/dQ_i})^{a_i}`` (Q-multiplication to the left
of translations).  On a monomial the translation part acts by
``(P q^{Q d/dQ})^a Q^d f = Q^d P^a q^{a.d} f``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .k_ring import KRingSpec, Multi, add_multi, line_class
from .lambda_ring import LambdaRing, StructureError
from .q_algebra import QLaurent, QRat, as_qrat, project_plus

log = logging.getLogger(__name__)


def dot(a: Sequence[int], d: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, d))


class NovikovSeries:
    """``sum_d Q^d f_d`` truncated to the degree box ``cap``; immutable."""

    __slots__ = ("spec", "ring", "cap", "terms", "dropped")

    def __init__(self, spec: KRingSpec, ring: LambdaRing, cap: Sequence[int],
                 terms: Mapping[Multi, QRat] | None = None, dropped: int = 0):
        self.spec = spec
        self.ring = ring
        self.cap = tuple(int(c) for c in cap)
        if len(self.cap) != spec.rank:
            raise StructureError("Novikov cap must have one entry per factor")
        if any(c < 0 for c in self.cap):
            raise ValueError("Novikov caps must be non-negative")
        out = {}
        for d, f in (terms or {}).items():
            d = tuple(d)
            if not self.contains(d):
                dropped += 1
                continue
            if f.spec != spec or f.ring != ring:
                raise StructureError("coefficient over a different space or lambda-ring")
            if f:
                out[d] = f
        self.terms = dict(sorted(out.items()))
        self.dropped = dropped

    def contains(self, d: Multi) -> bool:
        return len(d) == len(self.cap) and all(0 <= x <= c for x, c in zip(d, self.cap))

    def degrees(self) -> list[Multi]:
        return list(itertools.product(*(range(c + 1) for c in self.cap)))

    def __getitem__(self, d) -> QRat:
        if isinstance(d, int):
            d = (d,)
        return self.terms.get(tuple(d), QRat.zero(self.spec, self.ring))

    def map(self, fn) -> NovikovSeries:
        """Apply ``fn(d, f_d)`` degree by degree."""
        return NovikovSeries(self.spec, self.ring, self.cap,
                             {d: fn(d, f) for d, f in self.terms.items()}, self.dropped)

    def _check(self, other: NovikovSeries):
        if (self.spec, self.ring, self.cap) != (other.spec, other.ring, other.cap):
            raise StructureError("Novikov series with different spaces, rings or caps")

    def __add__(self, other: NovikovSeries) -> NovikovSeries:
        self._check(other)
        out = dict(self.terms)
        for d, f in other.terms.items():
            out[d] = out[d] + f if d in out else f
        return NovikovSeries(self.spec, self.ring, self.cap, out, self.dropped + other.dropped)

    def __neg__(self):
        return self.map(lambda d, f: -f)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> NovikovSeries:
        """Multiplication by a Q-independent coefficient."""
        c = as_qrat(c, self.spec, self.ring)
        return self.map(lambda d, f: f * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self.spec, self.ring, self.cap) == (other.spec, other.ring, other.cap) and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, self.ring, self.cap, tuple(self.terms.items())))

    def __repr__(self):
        return f"NovikovSeries({self})"

    def __str__(self):
        return self.format()

    def format(self, basis: str = "u") -> str:
        if not self.terms:
            return "0"
        parts = []
        for d, f in self.terms.items():
            body = f.format(basis)
            qmono = "*".join(
                self.spec.qname(i) if e == 1 else f"{self.spec.qname(i)}^{e}"
                for i, e in enumerate(d) if e
            )
            parts.append(body if not qmono else f"{qmono}*({body})")
        return " + ".join(parts)

    def truncate(self, cap: Sequence[int]) -> NovikovSeries:
        """Restrict to a smaller degree box."""
        cap = tuple(cap)
        return NovikovSeries(self.spec, self.ring, cap,
                             {d: f for d, f in self.terms.items() if all(x <= c for x, c in zip(d, cap))})

    def specialize_symmetric(self) -> NovikovSeries:
        return NovikovSeries(self.spec, self.ring.symmetric(), self.cap,
                             {d: f.specialize_symmetric() for d, f in self.terms.items()}, self.dropped)


def constant_series(f, spec: KRingSpec, ring: LambdaRing, cap: Sequence[int]) -> NovikovSeries:
    return NovikovSeries(spec, ring, cap, {spec.zero_index: as_qrat(f, spec, ring)})


@dataclass(frozen=True)
class DiffTerm:
    coef: QLaurent
    qshift: Multi
    trans: Multi


class DiffOp:
    """Normal-ordered finite q-difference operator ``sum c(q) Q^e (P q^{Q d/dQ})^a``."""

    __slots__ = ("spec", "ring", "terms")

    def __init__(self, spec: KRingSpec, ring: LambdaRing, terms: Iterable[DiffTerm | tuple] = ()):
        self.spec = spec
        self.ring = ring
        acc: dict[tuple[Multi, Multi], QRat] = {}
        for t in terms:
            if not isinstance(t, DiffTerm):
                coef, e, a = t
                t = DiffTerm(QLaurent.of(as_qrat(coef, spec, ring)) if not isinstance(coef, QLaurent) else coef,
                             tuple(e), tuple(a))
            if len(t.qshift) != spec.rank or len(t.trans) != spec.rank:
                raise StructureError("operator multi-indices do not match the space")
            if any(x < 0 for x in t.qshift):
                raise ValueError("Q-shifts must be non-negative")
            key = (t.qshift, t.trans)
            c = t.coef.to_qrat()
            acc[key] = acc[key] + c if key in acc else c
        self.terms = tuple(
            DiffTerm(QLaurent.of(c), e, a) for (e, a), c in sorted(acc.items()) if c
        )

    @classmethod
    def translation(cls, spec, ring, a: Sequence[int], coef=1) -> DiffOp:
        """``coef * (P q^{Q d/dQ})^a``."""
        return cls(spec, ring, [(as_qrat(coef, spec, ring), spec.zero_index, tuple(a))])

    @classmethod
    def multiplication(cls, spec, ring, e: Sequence[int], coef=1) -> DiffOp:
        """``coef * Q^e``."""
        return cls(spec, ring, [(as_qrat(coef, spec, ring), tuple(e), spec.zero_index)])

    @classmethod
    def scalar(cls, spec, ring, coef) -> DiffOp:
        z = spec.zero_index
        return cls(spec, ring, [(as_qrat(coef, spec, ring), z, z)])

    def _check(self, other):
        if (self.spec, self.ring) != (other.spec, other.ring):
            raise StructureError("operators over different spaces or lambda-rings")

    def __add__(self, other: DiffOp) -> DiffOp:
        self._check(other)
        return DiffOp(self.spec, self.ring, self.terms + other.terms)

    def __neg__(self):
        return DiffOp(self.spec, self.ring, [DiffTerm(-t.coef, t.qshift, t.trans) for t in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: DiffOp) -> DiffOp:
        """Composition ``self o other`` in normal order, using ``q^{Q d/dQ} Q = q Q q^{Q d/dQ}``."""
        self._check(other)
        out = []
        for t1 in self.terms:
            c1 = t1.coef.to_qrat()
            for t2 in other.terms:
                c = c1 * t2.coef.to_qrat() * QRat.q_power(self.spec, self.ring, dot(t1.trans, t2.qshift))
                out.append((c, add_multi(t1.qshift, t2.qshift), add_multi(t1.trans, t2.trans)))
        return DiffOp(self.spec, self.ring, out)

    def __pow__(self, n: int) -> DiffOp:
        z = self.spec.zero_index
        out = DiffOp(self.spec, self.ring, [(QRat.one(self.spec, self.ring), z, z)])
        for _ in range(n):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return (self.spec, self.ring, self.terms) == (other.spec, other.ring, other.terms)

    def __hash__(self):
        return hash((self.spec, self.ring, self.terms))

    def __call__(self, series: NovikovSeries) -> NovikovSeries:
        return apply_diffop(self, series)

    def is_constant_coefficient(self) -> bool:
        return all(not any(t.qshift) for t in self.terms)

    def __repr__(self):
        return f"DiffOp({self})"

    def __str__(self):
        parts = []
        for t in self.terms:
            ops = []
            for i, e in enumerate(t.qshift):
                if e:
                    ops.append(self.spec.qname(i) + (f"^{e}" if e != 1 else ""))
            for i, a in enumerate(t.trans):
                if a:
                    base = f"T{i + 1}" if self.spec.rank > 1 else "T"
                    ops.append(base + (f"^{a}" if a != 1 else ""))
            parts.append(f"({t.coef})" + "".join("*" + o for o in ops))
        return " + ".join(parts) or "0"


def apply_diffop(D: DiffOp, series: NovikovSeries) -> NovikovSeries:
    """Apply ``D`` degree by degree: a term sends ``Q^d f`` to ``Q^{d+e} c(q) P^a q^{a.d} f``."""
    if (D.spec, D.ring) != (series.spec, series.ring):
        raise StructureError("operator and series over different spaces or lambda-rings")
    spec, ring = series.spec, series.ring
    out: dict[Multi, QRat] = {}
    dropped = 0
    for t in D.terms:
        pa = QRat.from_kclass(line_class(t.trans, spec, ring))
        base = t.coef.to_qrat() * pa
        for d, f in series.terms.items():
            nd = add_multi(d, t.qshift)
            if not series.contains(nd):
                dropped += 1
                continue
            v = base * QRat.q_power(spec, ring, dot(t.trans, d)) * f
            out[nd] = out[nd] + v if nd in out else v
    if dropped:
        log.warning("apply_diffop: %d contribution(s) left the Novikov cap %s", dropped, series.cap)
    return NovikovSeries(spec, ring, series.cap, out, series.dropped + dropped)


def adams_on_series(k: int, series: NovikovSeries) -> NovikovSeries:
    """``psi^k`` with ``Q -> Q^k``, ``P -> P^k``, ``q -> q^k`` and Adams operations on coefficients."""
    if k < 1:
        raise ValueError("Adams operations are indexed by k >= 1")
    out = {}
    dropped = 0
    for d, f in series.terms.items():
        nd = tuple(k * x for x in d)
        if not series.contains(nd):
            dropped += 1
            continue
        out[nd] = f.adams(k)
    if dropped:
        log.warning("adams_on_series: %d degree(s) left the Novikov cap %s", dropped, series.cap)
    return NovikovSeries(series.spec, series.ring, series.cap, out, series.dropped + dropped)


def project_plus_series(series: NovikovSeries) -> NovikovSeries:
    """Termwise projection to Laurent polynomials along the functions vanishing at infinity."""
    return series.map(lambda d, f: project_plus(f).to_qrat())
