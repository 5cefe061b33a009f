from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CP1, RING, SYM, qrats, scalars
from qkrec.k_ring import KClass
from qkrec.lambda_ring import DomainError, LambdaRing
from qkrec.parsing import parse_qrat
from qkrec.q_algebra import (
    QLaurent,
    QRat,
    exp_q,
    exp_qseries,
    expand_at_infinity,
    expand_at_one,
    expand_at_zero,
    invert_one_minus_pq,
    project_plus,
    q_exponent_sum,
    qexp,
    residue_zero_infty,
)

R0 = LambdaRing((), 1)


def Q(text, ring=R0, spec=CP1):
    return parse_qrat(text, ring, spec)


def K(text, ring=R0, spec=CP1):
    return Q(text, ring, spec).to_laurent()[0]


def test_invert_one_minus_pq_examples():
    f = invert_one_minus_pq((0,), 1, 1, CP1, R0)
    assert f.den == {1: 1} and f.num == Q("1").to_laurent()
    g = invert_one_minus_pq((1,), 1, 1, CP1, R0)
    assert g * Q("1 - P*q") == 1
    assert invert_one_minus_pq((1,), 1, 2, CP1, R0) == g * g
    h = invert_one_minus_pq((-1,), 3, 2, CP1, R0)
    assert h * Q("(1 - P^-1*q^3)^2") == 1
    with pytest.raises(DomainError):
        invert_one_minus_pq((1,), 0, 1, CP1, R0)


def test_ring_ops_examples():
    f = Q("1/(1-q)")
    assert f + 0 == f
    assert Q("1/(q*(1-q))") == Q("q^-1") + f
    assert Q("(1-q)") * f == 1


def test_canonical_form_is_unique():
    assert Q("(1+q)/(1-q^2)") == Q("1/(1-q)")
    assert str(Q("(1+q)/(1-q^2)")) == "1/(1-q)"
    assert Q("1/(1-q^2)").den == {2: 1}
    f = Q("(1 - q^3)/((1-q)^2*(1-q^3))")
    assert f.den == {1: 2} and f.num == Q("1").to_laurent()


def test_expand_at_zero_examples():
    assert expand_at_zero(Q("1/(1-q)"), 3) == Q("1 + q + q^2 + q^3").to_laurent()
    assert expand_at_zero(Q("q^-1"), 0) == Q("q^-1").to_laurent()
    small_j1 = Q("1-q") * invert_one_minus_pq((1,), 1, 2, CP1, R0)
    assert expand_at_zero(small_j1, 1)[1] == K("2*P - 1")


def test_expand_at_infinity_examples():
    assert expand_at_infinity(Q("1/(1-q)"), 3) == Q("-q^-1 - q^-2 - q^-3").to_laurent()
    lp = Q("q^2 - 3 + q^-1")
    assert expand_at_infinity(lp, 5) == lp.to_laurent()
    small_j1 = Q("1-q") * invert_one_minus_pq((1,), 1, 2, CP1, R0)
    assert expand_at_infinity(small_j1, 0)[0] == 0


def test_expand_at_one_examples():
    s = expand_at_one(Q("1/(1-q^2)"), 1)
    assert s[-1] == KClass.one(CP1, R0) * Fraction(-1, 2)
    assert s[0] == KClass.one(CP1, R0) * Fraction(1, 4)
    assert expand_at_one(Q("1-q"), 3) == {1: -KClass.one(CP1, R0)}
    for k in range(1, 6):
        assert Q(f"1/(1-q^{k})").pole_order_at_one() == 1


def test_project_plus_examples():
    lp = Q("q^2 - 3 + q^-1")
    assert project_plus(lp) == lp.to_laurent()
    assert project_plus(Q("1/(1-q)")) == QLaurent(CP1, R0, {})
    assert project_plus(Q("1/(q*(1-q))")) == Q("q^-1").to_laurent()


def test_residue_examples():
    assert residue_zero_infty(Q("q^3 - 2 + q^-4")) == 0
    assert residue_zero_infty(Q("1/(1-q)")) == 1


def test_exp_qseries_examples():
    assert exp_qseries([], CP1, R0) == 1
    lam = SYM.gen("a")
    lhs = exp_qseries([(k, lam ** k) for k in range(1, SYM.cap + 1)], CP1, SYM)
    assert lhs == exp_q(lam, CP1, SYM)
    with pytest.raises(DomainError):
        exp_qseries([(1, SYM.one())], CP1, SYM)


@pytest.mark.parametrize("E", [1, 2, 4, 6, 8])
def test_euler_identity(E):
    r = LambdaRing(("lam",), E)
    lam = r.gen("lam")
    lhs = qexp(q_exponent_sum([(k, lam ** k) for k in range(1, E + 1)], CP1, r))
    rhs = QRat.zero(CP1, r)
    for m in range(E + 1):
        rhs = rhs + QRat.from_alphabet(CP1, r, {0: KClass.from_scalar(CP1, lam ** m)}, {t: 1 for t in range(1, m + 1)})
    assert lhs == rhs and str(lhs) == str(rhs)


def test_adams_raises_q():
    f = Q("1/(1-q)")
    assert f.adams(2) == Q("1/(1-q^2)")
    r = LambdaRing(("lam",), 4)
    g = parse_qrat("lam*P*q/(1-q)", r, CP1)
    assert g.adams(2) == parse_qrat("psi2(lam)*P^2*q^2/(1-q^2)", r, CP1)


# ---------------------------------------------------------------- properties
@given(qrats(), qrats())
def test_ring_axioms(f, g):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) - g == f
    assert f * (g + 1) == f * g + f


@given(qrats())
def test_decomposition(f):
    plus = project_plus(f)
    rest = f - plus.to_qrat()
    assert all(e >= 0 for e in expand_at_zero(rest, 4).coeffs)
    at_inf = expand_at_infinity(rest, 4)
    assert all(e < 0 for e in at_inf.coeffs)


@given(qrats(), qrats(), st.integers(-3, 3))
def test_project_plus_linear_and_idempotent(f, g, c):
    assert project_plus(project_plus(f).to_qrat()) == project_plus(f)
    assert project_plus(f + g * c) == project_plus(f) + project_plus(g) * QRat.one(CP1, RING) * c


@given(qrats())
def test_laurent_residue_vanishes(f):
    assert residue_zero_infty(project_plus(f).to_qrat()) == 0


@given(qrats(), qrats(), st.sampled_from([Fraction(2), Fraction(1, 3), Fraction(-5, 2)]))
def test_evaluation_is_homomorphism(f, g, q):
    assert (f * g).evaluate(q) == f.evaluate(q) * g.evaluate(q)
    assert (f + g).evaluate(q) == f.evaluate(q) + g.evaluate(q)


@given(qrats())
def test_evaluation_matches_alphabet_form(f):
    num, den = f.num, f.den
    for q in (Fraction(2), Fraction(1, 3)):
        n = sum((c * q ** e for e, c in num.coeffs.items()), KClass.zero(CP1, RING))
        d = 1
        for r, m in den.items():
            d *= (1 - q ** r) ** m
        assert f.evaluate(q) == n / d


@given(qrats())
def test_expansions_agree_with_denominator(f):
    """The series at 0 times the denominator reproduces the numerator through the computed order."""
    order = 6
    series = expand_at_zero(f, order).to_qrat()
    assert expand_at_zero(series * _den_poly(f), order) == expand_at_zero(f.num.to_qrat(), order)


@given(qrats())
def test_expansion_at_infinity_agrees_with_denominator(f):
    order = 6
    den = _den_poly(f)
    R = sum(r * m for r, m in f.den.items())
    got = expand_at_infinity(expand_at_infinity(f, order).to_qrat() * den, order)
    want = f.num
    assert {e: c for e, c in got.coeffs.items() if e >= R - order} == \
        {e: c for e, c in want.coeffs.items() if e >= R - order}


def _binom_series(e, n):
    """Coefficients of ``(1+s)^e`` up to ``s^n`` for any integer ``e``."""
    out, c = [], Fraction(1)
    for i in range(n + 1):
        out.append(c)
        c = c * (e - i) / (i + 1)
    return out


def _mul(a, b, n):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j <= n:
                out[i + j] = out.get(i + j, 0) + x * y
    return out


@given(qrats())
def test_expansion_at_one_agrees_with_denominator(f):
    """Multiply the series in ``s = q - 1`` by the denominator written in ``s``; the numerator comes back."""
    order = 4
    series = expand_at_one(f, order)
    pole = f.pole_order_at_one()
    den = {0: Fraction(1)}
    for r, m in f.den.items():
        one_minus = {i: -c for i, c in enumerate(_binom_series(r, order + pole)) if i}
        for _ in range(m):
            den = _mul(den, one_minus, order + pole)
    prod = {}
    for i, c in series.items():
        for j, d in den.items():
            if i + j <= order:
                prod[i + j] = prod.get(i + j, 0) + c * d
    want = {}
    for e, c in f.num.coeffs.items():
        for i, b in enumerate(_binom_series(e, order)):
            want[i] = want.get(i, 0) + c * b
    for i in range(order - pole + 1):
        assert prod.get(i, 0) == want.get(i, 0)


def _den_poly(f):
    out = QRat.one(CP1, RING)
    for r, m in f.den.items():
        out = out * Q(f"(1-q^{r})^{m}", RING)
    return out


@given(qrats(), st.integers(1, 3), st.integers(1, 2))
def test_adams_is_homomorphism_on_qrat(f, k, m):
    g = Q("1/(1-q^2) + P*q", RING)
    assert (f * g).adams(k) == f.adams(k) * g.adams(k)
    assert f.adams(k).adams(m) == f.adams(k * m)


@given(scalars(positive=True), scalars(positive=True))
def test_exp_qseries_additive(x, y):
    items = lambda z: [(k, z.adams(k)) for k in range(1, RING.cap + 1)]
    assert exp_qseries(items(x + y), CP1, RING) == exp_qseries(items(x), CP1, RING) * exp_qseries(items(y), CP1, RING)
