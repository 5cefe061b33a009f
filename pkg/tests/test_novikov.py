import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CP1, CP1xCP1, RING, qrats
from qkrec.jfun import small_j
from qkrec.k_ring import line_class
from qkrec.lambda_ring import LambdaRing, StructureError
from qkrec.novikov import (
    DiffOp,
    NovikovSeries,
    adams_on_series,
    apply_diffop,
    constant_series,
    project_plus_series,
)
from qkrec.parsing import parse_qrat

R = LambdaRing(("lam",), 4)


def Q(text, ring=R, spec=CP1):
    return parse_qrat(text, ring, spec)


def series(spec, ring, cap, terms):
    return NovikovSeries(spec, ring, cap, {d: Q(t, ring, spec) if isinstance(t, str) else t for d, t in terms.items()})


def test_translation_on_constant():
    T = DiffOp.translation(CP1, R, (1,))
    one = constant_series(1, CP1, R, (2,))
    assert apply_diffop(T, one) == constant_series(Q("P"), CP1, R, (2,))


def test_multiplication_shifts_degree():
    I = series(CP1, R, (3,), {(0,): "1 - q", (1,): "lam/(1-q)"})
    out = apply_diffop(DiffOp.multiplication(CP1, R, (1,)), I)
    assert out == series(CP1, R, (3,), {(1,): "1 - q", (2,): "lam/(1-q)"})


def test_overflow_is_counted_and_logged(caplog):
    I = series(CP1, R, (1,), {(0,): "1", (1,): "q"})
    with caplog.at_level(logging.WARNING):
        out = apply_diffop(DiffOp.multiplication(CP1, R, (1,)), I)
    assert out.dropped == 1
    assert out == series(CP1, R, (1,), {(1,): "1"})
    assert "Novikov cap" in caplog.text


def test_commutation_relation():
    """``q^{Q d/dQ} Q = q Q q^{Q d/dQ}`` as operators and on every monomial."""
    Tq = DiffOp(CP1, R, [(1, (0,), (1,))]) @ DiffOp.scalar(CP1, R, Q("P^-1"))
    Qm = DiffOp.multiplication(CP1, R, (1,))
    lhs = Tq @ Qm
    rhs = DiffOp.multiplication(CP1, R, (1,), Q("q")) @ Tq
    assert lhs == rhs
    for d in range(3):
        mono = series(CP1, R, (4,), {(d,): "1"})
        assert apply_diffop(lhs, mono) == series(CP1, R, (4,), {(d + 1,): Q(f"q^{d + 1}")})


def test_adams_on_series_examples():
    I = series(CP1, R, (4,), {(0,): "1 - q", (1,): "lam*P", (2,): "1/(1-q)"})
    assert adams_on_series(1, I) == I
    out = adams_on_series(2, I)
    assert out[(2,)] == Q("psi2(lam)*P^2")
    assert out[(4,)] == Q("1/(1-q^2)")
    assert out.dropped == 0


def test_project_plus_series_examples():
    c = constant_series(Q("1 - q"), CP1, R, (2,))
    assert project_plus_series(c) == c
    J = small_j(CP1, R, (4,))
    assert project_plus_series(J) == constant_series(Q("1 - q"), CP1, R, (4,))
    s = series(CP1, R, (2,), {(1,): "1/(q*(1-q))"})
    assert project_plus_series(s) == series(CP1, R, (2,), {(1,): "q^-1"})


def test_structure_mismatch():
    with pytest.raises(StructureError):
        apply_diffop(DiffOp.translation(CP1xCP1, R, (1, 0)), constant_series(1, CP1, R, (1,)))


# ---------------------------------------------------------------- properties
@st.composite
def diffops(draw, spec=CP1, ring=RING, max_terms=3, qshift=True):
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        coef = draw(qrats(spec, ring)).num  # Laurent coefficients
        e = tuple(draw(st.integers(0, 1 if qshift else 0)) for _ in range(spec.rank))
        a = tuple(draw(st.integers(-1, 2)) for _ in range(spec.rank))
        terms.append((coef.to_qrat(), e, a))
    return DiffOp(spec, ring, terms)


@st.composite
def novikov_series(draw, spec=CP1, ring=RING, cap=(3,)):
    degrees = draw(st.lists(st.tuples(*[st.integers(0, c) for c in cap]), max_size=3, unique=True))
    return NovikovSeries(spec, ring, cap, {d: draw(qrats(spec, ring, max_den=1)) for d in degrees})


@given(diffops(), diffops(), novikov_series())
def test_composition_matches_two_step_application(D1, D2, I):
    two_step = apply_diffop(D1, apply_diffop(D2, I))
    composed = apply_diffop(D1 @ D2, I)
    assert two_step == composed


@given(diffops(), diffops(), novikov_series(), novikov_series())
def test_apply_is_bilinear(D1, D2, I, J):
    assert apply_diffop(D1 + D2, I) == apply_diffop(D1, I) + apply_diffop(D2, I)
    assert apply_diffop(D1, I + J) == apply_diffop(D1, I) + apply_diffop(D1, J)


@given(novikov_series(cap=(6,)), st.integers(1, 3), st.integers(1, 2))
def test_adams_on_series_composes(I, k, m):
    assert adams_on_series(k, adams_on_series(m, I)) == adams_on_series(k * m, I)


@given(novikov_series(cap=(6,)), st.integers(1, 3))
def test_adams_commutes_with_translation(I, m):
    """``psi^m q^{Q d/dQ} = q^{Q d/dQ} psi^m`` and ``psi^m P = P^m psi^m`` with ``psi^m(q) = q^m``."""
    qshift = DiffOp(CP1, RING, [(line_class((-1,), CP1, RING), (0,), (1,))])
    assert adams_on_series(m, apply_diffop(qshift, I)) == apply_diffop(qshift, adams_on_series(m, I))
    T = DiffOp.translation(CP1, RING, (1,))
    Pm_shift = DiffOp.translation(CP1, RING, (1,), line_class((m - 1,), CP1, RING))
    assert adams_on_series(m, apply_diffop(T, I)) == apply_diffop(Pm_shift, adams_on_series(m, I))


def test_naive_power_form_of_commutation_fails():
    """``(q^{Q d/dQ})^m`` overshoots by ``q^{m(m-1)d}``; the relation above is the correct one."""
    I = series(CP1, R, (2,), {(1,): "1"})
    qshift = DiffOp(CP1, R, [(Q("P^-1"), (0,), (1,))])
    lhs = adams_on_series(2, apply_diffop(qshift, I))
    naive = apply_diffop(qshift ** 2, adams_on_series(2, I))
    assert lhs == series(CP1, R, (2,), {(2,): "q^2"})
    assert naive == series(CP1, R, (2,), {(2,): "q^4"})


@given(novikov_series(CP1xCP1, cap=(1, 2)), diffops(CP1xCP1, max_terms=2), diffops(CP1xCP1, max_terms=2))
def test_composition_two_factor_space(I, D1, D2):
    assert apply_diffop(D1, apply_diffop(D2, I)) == apply_diffop(D1 @ D2, I)
