"""Parser for the canonical text form of scalars, K-classes and q-rational functions.

Grammar (whitespace-insensitive)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | primary ['^' ['-'] INT]
    primary := INT | 'q' | 'P'[i] | 'u'[i] | GEN | 'psi'K '(' expr ')' | '(' expr ')'

Division is allowed by non-zero rationals and by products of factors
``(1 - q^r)`` (more generally: cyclotomic polynomials times ``+-q^n``).
"""

from __future__ import annotations

import re
from typing import Iterable

from .k_ring import KClass, KRingSpec, line_class
from .lambda_ring import ONE, LambdaRing
from .q_algebra import QLaurent, QRat, _cyc_poly, cyclotomic

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
_SPECIAL = re.compile(r"^(q|[PuQ]\d*|psi\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1):
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def scan_generators(texts: Iterable[str]) -> list[str]:
    """Generator names used in the given expressions, in order of first appearance."""
    seen: list[str] = []
    for text in texts:
        for kind, val, _ in _tokenize(text):
            if kind == "name" and not _SPECIAL.match(val) and val not in seen:
                seen.append(val)
    return seen


class _Parser:
    def __init__(self, text: str, spec: KRingSpec, ring: LambdaRing, has_spec: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.spec = spec
        self.ring = ring
        self.has_spec = has_spec

    # -- token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos, self.text)

    def error(self, msg):
        raise ParseError(msg, self.peek()[2], self.text)

    # -- grammar
    def parse(self) -> QRat:
        if self.peek()[0] == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self) -> QRat:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        v = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                v = v + t if val == "+" else v - t
            else:
                return v

    def term(self) -> QRat:
        v = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                v = v * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                v = v * self.invert(self.factor(), pos)
            else:
                return v

    def factor(self) -> QRat:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base, unit = self.primary()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            if self.peek()[:2] == ("op", "-"):
                self.take()
                neg = True
            kind, n, pos = self.take()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos, self.text)
            if neg:
                if unit is None:
                    raise ParseError("negative powers are only allowed for q and P", pos, self.text)
                return unit(-n)
            return unit(n) if unit is not None else base ** n
        return base

    def primary(self):
        """Return ``(value, power_fn)``; ``power_fn`` handles integer (possibly negative) powers of units."""
        kind, val, pos = self.take()
        spec, ring = self.spec, self.ring
        if kind == "int":
            return QRat.one(spec, ring) * val, None
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect_op(")")
            return v, None
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        if kind != "name":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        if val == "q":
            return QRat.q_power(spec, ring, 1), lambda n: QRat.q_power(spec, ring, n)
        m = re.fullmatch(r"([Pu])(\d*)", val)
        if m:
            idx = self._factor_index(m.group(2), pos)
            a = [0] * spec.rank
            if m.group(1) == "P":
                def power(n, idx=idx):
                    e = list(a)
                    e[idx] = n
                    return QRat.from_kclass(line_class(e, spec, ring))
                return power(1), power
            return QRat.from_kclass(KClass.u(spec, ring, idx)), None
        m = re.fullmatch(r"psi(\d+)", val)
        if m:
            k = int(m.group(1))
            if k < 1:
                raise ParseError("Adams operations are indexed by k >= 1", pos, self.text)
            self.expect_op("(")
            inner = self.expr()
            self.expect_op(")")
            return inner.adams(k), None
        if val not in ring.names:
            raise ParseError(f"unknown generator {val!r}", pos, self.text)
        return QRat.from_scalar(spec, ring.gen(val)), None

    def _factor_index(self, digits: str, pos: int) -> int:
        if not self.has_spec:
            raise ParseError("K-ring symbols need a target space", pos, self.text)
        if not digits:
            if self.spec.rank != 1:
                raise ParseError("ambiguous symbol; use an index like P1", pos, self.text)
            return 0
        idx = int(digits) - 1
        if not 0 <= idx < self.spec.rank:
            raise ParseError(f"factor index {digits} out of range", pos, self.text)
        return idx

    def invert(self, f: QRat, pos: int) -> QRat:
        """Inverse of a scalar that is ``c q^n prod Phi^e``; anything else is rejected."""
        z = (self.spec.zero_index, ONE)
        if not f.terms:
            raise ParseError("division by zero", pos, self.text)
        if set(f.terms) != {z}:
            raise ParseError("division only by rationals and products of (1-q^r)", pos, self.text)
        p = f.terms[z]
        cyc: dict[int, int] = {}
        n = 1
        while p.degree() > 0:
            if n > p.degree() * 12 + 12:
                raise ParseError("division only by rationals and products of (1-q^r)", pos, self.text)
            phi = cyclotomic(n)
            if phi.degree() <= p.degree():
                quo, rem = divmod(p, phi)
                if rem.is_zero():
                    p = quo
                    cyc[n] = cyc.get(n, 0) + 1
                    continue
            n += 1
        c = p.coeffs()[0]
        num = _cyc_poly(f.cyc) * (1 / c)
        return QRat(self.spec, self.ring, {z: num}, -f.shift, cyc)


def parse_qrat(text: str, ring: LambdaRing, spec: KRingSpec | None = None) -> QRat:
    has_spec = spec is not None
    return _Parser(text, spec or KRingSpec((1,)), ring, has_spec).parse()


def narrow(f: QRat, has_spec: bool = True):
    """Return the most specific value kind: LambdaScalar, KClass, QLaurent or QRat."""
    if f.cyc:
        return f
    coeffs = f.laurent_coefficients()
    if set(coeffs) - {0}:
        return QLaurent(f.spec, f.ring, coeffs)
    x = coeffs.get(0, KClass.zero(f.spec, f.ring))
    if x.is_scalar() or not has_spec:
        return x.scalar_part()
    return x


def parse_expression(text: str, ring: LambdaRing, spec: KRingSpec | None = None):
    """Parse ``text`` and return a LambdaScalar, KClass, QLaurent or QRat."""
    return narrow(parse_qrat(text, ring, spec), spec is not None)
