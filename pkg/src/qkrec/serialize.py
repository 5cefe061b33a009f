"""JSON forms of scalars, K-classes, q-rational functions, series, operators and parameters.

Every ``*_to_json`` returns plain dicts/lists in a canonical order, so
``json.dumps(to_json(from_json(doc)))`` reproduces ``json.dumps(doc)`` byte for byte.
Wherever a value object is expected, a string is accepted too and parsed with
:func:`qkrec.parsing.parse_expression`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .jfun import ReconParams
from .k_ring import KClass, KRingSpec, Multi
from .lambda_ring import LambdaRing, LambdaScalar, StructureError
from .novikov import DiffOp, DiffTerm, NovikovSeries
from .parsing import parse_qrat
from .q_algebra import QLaurent, QRat, as_qrat


class FormatError(ValueError):
    """Malformed JSON document."""


def ring_to_json(ring: LambdaRing) -> dict:
    return {"names": list(ring.names), "cap": ring.cap, "mode": ring.mode}


def ring_from_json(doc: dict) -> LambdaRing:
    try:
        return LambdaRing(tuple(doc["names"]), int(doc["cap"]), doc.get("mode", "free"))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad lambda-ring description: {doc!r}") from exc


# ------------------------------------------------------------------- scalars
def scalar_to_json(x: LambdaScalar) -> dict:
    ring = x.ring
    terms = []
    for m in sorted(x.terms, key=ring.sort_key):
        mono = [[name, lvl] for (name, lvl), e in m for _ in range(e)]
        terms.append({"coef": str(x.terms[m]), "mono": mono})
    return {"terms": terms, "cap": ring.cap, "mode": ring.mode}


def scalar_from_json(doc, ring: LambdaRing) -> LambdaScalar:
    if isinstance(doc, str):
        return QRatText.scalar(doc, ring)
    if isinstance(doc, (int, float)) and not isinstance(doc, bool):
        return ring.scalar(Fraction(str(doc)))
    try:
        if doc.get("cap", ring.cap) != ring.cap or doc.get("mode", ring.mode) != ring.mode:
            raise StructureError(f"scalar cap/mode {doc.get('cap')}/{doc.get('mode')} does not match {ring}")
        terms: dict = {}
        for t in doc["terms"]:
            counts: dict = {}
            for name, lvl in t["mono"]:
                key = (str(name), int(lvl))
                counts[key] = counts.get(key, 0) + 1
            mono = tuple(sorted(counts.items()))
            ring.check_monomial(mono)
            terms[mono] = terms.get(mono, 0) + Fraction(t["coef"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise FormatError(f"bad scalar document: {doc!r}") from exc
    return LambdaScalar(ring, terms)


# ----------------------------------------------------------------- K-classes
def kclass_to_json(x: KClass):
    def build(prefix: tuple, depth: int):
        if depth == x.spec.rank:
            return scalar_to_json(x.coeff(prefix))
        return [build(prefix + (j,), depth + 1) for j in range(x.spec.factors[depth] + 1)]

    return build((), 0)


def kclass_from_json(doc, spec: KRingSpec, ring: LambdaRing) -> KClass:
    if isinstance(doc, str):
        return QRatText.kclass(doc, ring, spec)
    coeffs: dict[Multi, LambdaScalar] = {}

    def walk(node, prefix: tuple, depth: int):
        if depth == spec.rank:
            coeffs[prefix] = scalar_from_json(node, ring)
            return
        if not isinstance(node, list) or len(node) != spec.factors[depth] + 1:
            raise FormatError(f"K-class array has wrong shape for {spec.label()}")
        for j, child in enumerate(node):
            walk(child, prefix + (j,), depth + 1)

    walk(doc, (), 0)
    return KClass.from_coeffs(spec, ring, coeffs)


# ------------------------------------------------------------- q-functions
def laurent_to_json(x: QLaurent) -> dict:
    return {str(e): kclass_to_json(c) for e, c in x.coeffs.items()}


def laurent_from_json(doc, spec, ring) -> QLaurent:
    if isinstance(doc, str):
        f = parse_qrat(doc, ring, spec)
        if not f.is_laurent():
            raise FormatError(f"expected a Laurent polynomial, got {doc!r}")
        return f.to_laurent()
    try:
        return QLaurent(spec, ring, {int(e): kclass_from_json(v, spec, ring) for e, v in doc.items()})
    except (AttributeError, ValueError) as exc:
        if isinstance(exc, (StructureError, FormatError)):
            raise
        raise FormatError(f"bad Laurent polynomial document: {doc!r}") from exc


def qrat_to_json(f: QRat) -> dict:
    return {"num": laurent_to_json(f.num), "den": {str(r): m for r, m in f.den.items()}}


def qrat_from_json(doc, spec, ring) -> QRat:
    if isinstance(doc, str):
        return parse_qrat(doc, ring, spec)
    try:
        num = laurent_from_json(doc["num"], spec, ring)
        den = {int(r): int(m) for r, m in doc.get("den", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"bad rational function document: {doc!r}") from exc
    return QRat.from_alphabet(spec, ring, num.coeffs, den)


# ------------------------------------------------------------------- series
def degree_key(d: Multi) -> str:
    return ",".join(map(str, d))


def parse_degree_key(key: str, rank: int) -> Multi:
    try:
        d = tuple(int(x) for x in str(key).split(","))
    except ValueError as exc:
        raise FormatError(f"invalid degree key {key!r}") from exc
    if len(d) != rank or any(x < 0 for x in d):
        raise FormatError(f"invalid degree key {key!r} for a space of rank {rank}")
    return d


def series_to_json(s: NovikovSeries) -> dict:
    return {
        "space": list(s.spec.factors),
        "cap": list(s.cap),
        "lambda": ring_to_json(s.ring),
        "terms": {degree_key(d): qrat_to_json(f) for d, f in s.terms.items()},
    }


def series_from_json(doc: dict) -> NovikovSeries:
    try:
        spec = KRingSpec(tuple(doc["space"]))
        ring = ring_from_json(doc["lambda"])
        cap = tuple(int(c) for c in doc["cap"])
        raw = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise FormatError("series document needs space, cap, lambda and terms") from exc
    terms = {}
    for key, v in raw.items():
        d = parse_degree_key(key, spec.rank)
        if len(cap) != spec.rank or any(x > c for x, c in zip(d, cap)):
            raise FormatError(f"degree {key!r} lies outside the Novikov cap {cap}")
        terms[d] = qrat_from_json(v, spec, ring)
    return NovikovSeries(spec, ring, cap, terms)


# ---------------------------------------------------------------- operators
def diffop_to_json(D: DiffOp) -> dict:
    return {
        "terms": [
            {"coef": laurent_to_json(t.coef), "qshift": list(t.qshift), "trans": list(t.trans)}
            for t in D.terms
        ]
    }


def diffop_from_json(doc: dict, spec, ring) -> DiffOp:
    try:
        terms = [
            DiffTerm(laurent_from_json(t["coef"], spec, ring), tuple(t.get("qshift", spec.zero_index)),
                     tuple(t.get("trans", spec.zero_index)))
            for t in doc["terms"]
        ]
    except (KeyError, TypeError) as exc:
        raise FormatError("operator document needs terms with coef/qshift/trans") from exc
    return DiffOp(spec, ring, terms)


# --------------------------------------------------------------- parameters
def params_to_json(p: ReconParams, spec, ring) -> dict:
    def key(a):
        return degree_key(a if isinstance(a, tuple) else (a,))

    return {
        "eps": {key(a): scalar_to_json(v) for a, v in p.eps.items()},
        "tau": {key(a): scalar_to_json(v) for a, v in p.tau.items()},
        "c": {key(a): laurent_to_json(as_qrat(v, spec, ring).to_laurent()) for a, v in p.c.items()},
    }


def params_from_json(doc: dict, spec, ring) -> ReconParams:
    unknown = set(doc) - {"eps", "tau", "c"}
    if unknown:
        raise FormatError(f"unknown parameter groups: {sorted(unknown)}")

    def keyed(group, conv):
        return {parse_degree_key(k, spec.rank): conv(v) for k, v in doc.get(group, {}).items()}

    return ReconParams(
        eps=keyed("eps", lambda v: scalar_from_json(v, ring)),
        tau=keyed("tau", lambda v: scalar_from_json(v, ring)),
        c=keyed("c", lambda v: laurent_from_json(v, spec, ring)),
    )


class QRatText:
    """String-valued JSON entries."""

    @staticmethod
    def scalar(text: str, ring: LambdaRing) -> LambdaScalar:
        f = parse_qrat(text, ring)
        if not f.is_laurent() or set(f.laurent_coefficients()) - {0} or not f.to_laurent()[0].is_scalar():
            raise FormatError(f"expected a lambda-scalar, got {text!r}")
        return f.to_laurent()[0].scalar_part()

    @staticmethod
    def kclass(text: str, ring: LambdaRing, spec: KRingSpec) -> KClass:
        f = parse_qrat(text, ring, spec)
        if not f.is_laurent() or set(f.laurent_coefficients()) - {0}:
            raise FormatError(f"expected a K-class, got {text!r}")
        return f.to_laurent()[0]


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1)
