"""Small J-functions of products of projective spaces and the reconstruction flows.

Every reconstruction here is a per-degree multiplication: a point
``I = sum_d I_d Q^d`` is sent to ``sum_d I_d Q^d F_d(q)`` where ``F_d`` is an
exponential of q-Adams sums evaluated at translation eigenvalues ``q^{a.d}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .k_ring import KClass, KRingSpec, Multi, kadams, line_class
from .lambda_ring import DomainError, LambdaRing, LambdaScalar, StructureError, adams
from .novikov import DiffOp, NovikovSeries, dot
from .q_algebra import (
    QLaurent,
    QRat,
    as_qrat,
    exp_q,
    exp_qseries,
    invert_one_minus_pq,
    q_exponent_sum,
    qexp,
)


def one_minus_q(spec: KRingSpec, ring: LambdaRing) -> QRat:
    one = KClass.one(spec, ring)
    return QRat.from_laurent(spec, ring, {0: one, 1: -one})


def small_j(spec: KRingSpec, ring: LambdaRing, cap: Sequence[int]) -> NovikovSeries:
    """``(1-q) sum_d Q^d prod_i prod_{r=1}^{d_i} (1 - P_i q^r)^{-(N_i+1)}``."""
    cap = tuple(cap)
    factor_products = []
    for i, n in enumerate(spec.factors):
        e = [0] * spec.rank
        e[i] = 1
        prods = [QRat.one(spec, ring)]
        for r in range(1, cap[i] + 1):
            prods.append(prods[-1] * invert_one_minus_pq(e, r, n + 1, spec, ring))
        factor_products.append(prods)
    base = one_minus_q(spec, ring)
    out = {}
    for d in NovikovSeries(spec, ring, cap).degrees():
        f = base
        for i, di in enumerate(d):
            f = f * factor_products[i][di]
        out[d] = f
    return NovikovSeries(spec, ring, cap, out)


_BUILTIN = re.compile(r"^((?:cp\d+)(?:x(?:cp\d+))*)-small-j$")


def load_seed_series(source, ring: LambdaRing | None = None, cap: Sequence[int] | None = None) -> NovikovSeries:
    """Load a seed point: a built-in name like ``cp1-small-j`` / ``cp1xcp2-small-j``,
    a JSON document (dict or text), or a path to a JSON file."""
    from . import serialize

    if isinstance(source, NovikovSeries):
        series = source
    elif isinstance(source, Mapping):
        series = serialize.series_from_json(source)
    elif isinstance(source, (str, Path)):
        m = _BUILTIN.match(str(source).lower())
        if m:
            if ring is None or cap is None:
                raise ValueError("built-in seeds need a lambda-ring and a Novikov cap")
            spec = KRingSpec(tuple(int(p[2:]) for p in m.group(1).split("x")))
            cap = tuple(cap) if len(tuple(cap)) == spec.rank else tuple(cap) * spec.rank
            return small_j(spec, ring, cap)
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(source).read_text()
        series = serialize.series_from_json(json.loads(text))
    else:
        raise TypeError(f"cannot load a seed from {type(source).__name__}")
    if ring is not None and series.ring != ring:
        raise StructureError(f"seed lambda-ring {series.ring} does not match {ring}")
    if cap is not None and tuple(cap) != series.cap:
        raise StructureError(f"seed Novikov cap {series.cap} does not match {tuple(cap)}")
    return series


# ---------------------------------------------------------------- parameters
def _multi(a, rank: int) -> Multi:
    if isinstance(a, int):
        a = (a,)
    a = tuple(int(x) for x in a)
    if len(a) != rank:
        raise StructureError(f"basis exponent {a} does not match the space")
    return a


@dataclass
class ReconParams:
    """Parameters of the reconstructed families, keyed by basis exponents ``a``.

    ``eps`` and ``tau`` values are lambda-scalars in the positive filtration;
    ``c`` values are Laurent polynomials in q (anything :func:`as_qrat` accepts).
    An empty ``c`` means ``{0: 1}``.
    """

    eps: dict = field(default_factory=dict)
    tau: dict = field(default_factory=dict)
    c: dict = field(default_factory=dict)

    def normalized(self, spec: KRingSpec, ring: LambdaRing) -> ReconParams:
        def basis_key(a):
            a = _multi(a, spec.rank)
            if any(x < 0 or x > n for x, n in zip(a, spec.factors)):
                raise ValueError(f"basis exponent {a} outside 0 <= a_i <= N_i")
            return a

        eps = {}
        for a, v in self.eps.items():
            v = _scalar(v, ring)
            if not v.in_positive_filtration():
                raise DomainError(f"eps[{a}] must lie in the positive filtration")
            eps[basis_key(a)] = v
        tau = {}
        for a, v in self.tau.items():
            v = _scalar(v, ring)
            if not v.in_positive_filtration():
                raise DomainError(f"tau[{a}] needs a zero weight-0 part for the exponential to terminate")
            tau[basis_key(a)] = v
        c = {basis_key(a): as_qrat(v, spec, ring) for a, v in self.c.items()}
        if not self.c:
            c = {spec.zero_index: QRat.one(spec, ring)}
        for a, v in c.items():
            if not v.is_laurent():
                raise DomainError(f"c[{a}] must be a Laurent polynomial in q")
        return ReconParams(eps, tau, c)


def _scalar(v, ring: LambdaRing) -> LambdaScalar:
    if isinstance(v, LambdaScalar):
        if v.ring != ring:
            raise StructureError("parameter lives in a different lambda-ring")
        return v
    return ring.scalar(v)


# ---------------------------------------------------------------- the flows
def _adams_coef(coef: QLaurent, k: int, raise_q: bool) -> QRat:
    if raise_q:
        return coef.to_qrat().adams(k)
    return QLaurent(coef.spec, coef.ring, {e: kadams(k, x) for e, x in coef.coeffs.items()}).to_qrat()


def theorem1_flow(series: NovikovSeries, D: DiffOp, *, adams_raises_q: bool = True) -> NovikovSeries:
    """``exp(sum_k psi^k(D(P q^{k Q d/dQ}, q)) / k(1-q^k))`` applied to ``series``.

    ``D`` must have constant coefficients (no Q-shifts) in the positive
    filtration.  A term ``c(q) (P q^{Q d/dQ})^a`` contributes
    ``psi^k(c) P^{ka} q^{k a.d} / k(1-q^k)`` at degree ``d``; with
    ``adams_raises_q`` the explicit powers of q in ``c`` are raised to ``q^k``.
    """
    spec, ring = series.spec, series.ring
    if (D.spec, D.ring) != (spec, ring):
        raise StructureError("operator and series over different spaces or lambda-rings")
    if not D.is_constant_coefficient():
        raise DomainError("the flow needs Q-independent operators without Q-shifts")
    pieces = []  # (k, psi^k(c) * P^{ka}, a)
    for t in D.terms:
        if 0 in t.coef.to_qrat().weight_parts():
            raise DomainError("operator coefficients must lie in the positive filtration")
        for k in range(1, ring.cap + 1):
            ck = _adams_coef(t.coef, k, adams_raises_q)
            if ck:
                pk = QRat.from_kclass(line_class(tuple(k * x for x in t.trans), spec, ring))
                pieces.append((k, ck * pk, t.trans))
    out = {}
    for d, f in series.terms.items():
        items = [(k, c * QRat.q_power(spec, ring, k * dot(a, d))) for k, c, a in pieces]
        out[d] = f * qexp(q_exponent_sum(items, spec, ring))
    return NovikovSeries(spec, ring, series.cap, out, series.dropped)


def string_factor(eps: LambdaScalar, spec: KRingSpec) -> QRat:
    """``exp(sum_k psi^k(eps) / k(1-q^k))``."""
    if not eps.in_positive_filtration():
        raise DomainError("the string parameter must lie in the positive filtration")
    ring = eps.ring
    return exp_qseries([(k, adams(k, eps)) for k in range(1, ring.cap + 1)], spec, ring)


def q_string(series: NovikovSeries, eps: LambdaScalar) -> NovikovSeries:
    """Multiplication by the q-string factor ``exp(sum_k psi^k(eps) / k(1-q^k))``."""
    eps = _scalar(eps, series.ring)
    factor = string_factor(eps, series.spec)
    return series.map(lambda d, f: f * factor)


def _t2_exponent(d: Multi, eps: Mapping[Multi, LambdaScalar], spec, ring) -> QRat:
    items = []
    for a, e in eps.items():
        for k in range(1, ring.cap + 1):
            ek = adams(k, e)
            if not ek:
                continue
            ka = tuple(k * x for x in a)
            num = QRat.from_kclass(line_class(ka, spec, ring) * ek, qexp=k * dot(a, d))
            items.append((k, num))
    return q_exponent_sum(items, spec, ring)


def _c_factor(d: Multi, c: Mapping[Multi, QRat], spec, ring) -> QRat:
    total = QRat.zero(spec, ring)
    for a, ca in c.items():
        total = total + ca * QRat.from_kclass(line_class(a, spec, ring), qexp=dot(a, d))
    return total


def reconstruct_t2(series: NovikovSeries, params: ReconParams) -> NovikovSeries:
    """``sum_d I_d Q^d exp(sum_k sum_a psi^k(eps_a) P^{ka} q^{k a.d} / k(1-q^k)) sum_a c_a(q) P^a q^{a.d}``."""
    spec, ring = series.spec, series.ring
    p = params.normalized(spec, ring)
    out = {}
    for d, f in series.terms.items():
        g = f * qexp(_t2_exponent(d, p.eps, spec, ring)) if p.eps else f
        out[d] = g * _c_factor(d, p.c, spec, ring)
    return NovikovSeries(spec, ring, series.cap, out, series.dropped)


def reconstruct_t3(series: NovikovSeries, params: ReconParams) -> NovikovSeries:
    """:func:`reconstruct_t2` followed by the factor ``exp(sum_a tau_a P^a q^{a.d} / (1-q))``."""
    spec, ring = series.spec, series.ring
    p = params.normalized(spec, ring)
    base = reconstruct_t2(series, p)
    if not p.tau:
        return base
    one = KClass.one(spec, ring)
    inv = QRat.from_alphabet(spec, ring, {0: one}, {1: 1})

    def step(d, f):
        x = QRat.zero(spec, ring)
        for a, t in p.tau.items():
            x = x + QRat.from_kclass(line_class(a, spec, ring) * t, qexp=dot(a, d)) * inv
        return f * qexp(x)

    return base.map(step)


# ------------------------------------------------------------------ CP^1 sym
CP1 = KRingSpec((1,))


def jsym_operator(lam: LambdaScalar, eps: LambdaScalar) -> DiffOp:
    """``D = lam + eps P q^{Q d/dQ}`` on CP^1."""
    ring = lam.ring
    return DiffOp(CP1, ring, [(lam, (0,), (0,)), (eps, (0,), (1,))])


def jsym_cp1(lam: LambdaScalar, eps: LambdaScalar, novikov_cap: int) -> NovikovSeries:
    """The two-parameter family of CP^1 obtained by the flow of
    ``lam + eps P q^{Q d/dQ}`` on the small J-function, specialized to the
    symmetrized theory (``psi^k(x) = x^k``)."""
    if lam.ring != eps.ring:
        raise StructureError("lam and eps must share a lambda-ring")
    ring = lam.ring
    seed = small_j(CP1, ring, (novikov_cap,))
    flowed = theorem1_flow(seed, jsym_operator(lam, eps))
    return flowed.specialize_symmetric()


def _cp1_pieces(eps: LambdaScalar, d: int, power: int) -> QRat:
    ring = eps.ring
    P = line_class((1,), CP1, ring)
    num = QRat.one(CP1, ring)
    for r in range(d):
        num = num * (QRat.one(CP1, ring) - QRat.from_kclass(P * eps, qexp=r))
    for r in range(1, d + 1):
        num = num * invert_one_minus_pq((1,), r, power, CP1, ring)
    return num


def jsym_cp1_simplified(lam: LambdaScalar, eps: LambdaScalar, novikov_cap: int) -> NovikovSeries:
    """Closed form ``(1-q) e^{sum (lam^k + eps^k P^k)/k(1-q^k)} sum_d Q^d prod_{r<d}(1 - eps P q^r) / prod_{r<=d}(1 - P q^r)^2``
    (symmetric mode)."""
    ring = lam.ring
    if ring.mode != "symmetric":
        raise DomainError("the simplified closed form lives in the symmetrized theory")
    P = line_class((1,), CP1, ring)
    glob = exp_qseries([(k, lam ** k + P ** k * eps ** k) for k in range(1, ring.cap + 1)], CP1, ring)
    base = one_minus_q(CP1, ring) * glob
    return NovikovSeries(CP1, ring, (novikov_cap,),
                         {(d,): base * _cp1_pieces(eps, d, 2) for d in range(novikov_cap + 1)})


def jsym_cp1_display(lam: LambdaScalar, eps: LambdaScalar, novikov_cap: int, power: int = 1) -> NovikovSeries:
    """The triple-sum display
    ``(1-q) sum_{m,l,d} lam^m eps^l P^l Q^d prod_{r<d}(1 - eps P q^r) / ((q;q)_m (q;q)_l prod_{r<=d}(1 - P q^r)^power)``."""
    ring = lam.ring
    P = line_class((1,), CP1, ring)
    glob = exp_q(lam, CP1, ring) * exp_q(P * eps, CP1, ring)
    base = one_minus_q(CP1, ring) * glob
    return NovikovSeries(CP1, ring, (novikov_cap,),
                         {(d,): base * _cp1_pieces(eps, d, power) for d in range(novikov_cap + 1)})
