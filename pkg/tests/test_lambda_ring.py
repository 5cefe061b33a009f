from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SYM, scalars
from qkrec.lambda_ring import (
    DomainError,
    LambdaRing,
    StructureError,
    adams,
    exp_scalar,
    specialize_symmetric,
)


def test_additive_inverse():
    lam = LambdaRing(("lam",), 3).gen("lam")
    assert lam + (-lam) == 0
    assert not (lam - lam).terms


def test_product_respects_cap():
    r2 = LambdaRing(("lam", "eps"), 2)
    prod = r2.gen("lam") * r2.gen("eps")
    assert prod.terms == {((("eps", 1), 1), (("lam", 1), 1)): 1}
    r1 = LambdaRing(("lam", "eps"), 1)
    assert r1.gen("lam") * r1.gen("eps") == 0


def test_mismatched_rings_raise():
    with pytest.raises(StructureError):
        LambdaRing(("lam",), 2).gen("lam") + LambdaRing(("lam",), 3).gen("lam")


def test_reserved_generator_names_rejected():
    for bad in ("q", "P", "u1", "psi2", "Q"):
        with pytest.raises(ValueError):
            LambdaRing((bad,), 2)


def test_adams_free_mode():
    r = LambdaRing(("lam", "eps"), 6)
    lam, eps = r.gen("lam"), r.gen("eps")
    assert adams(2, lam + eps) == r.gen("lam", 2) + r.gen("eps", 2)
    assert adams(3, adams(2, lam)) == r.gen("lam", 6)


def test_adams_symmetric_mode():
    r = LambdaRing(("lam",), 4, "symmetric")
    lam = r.gen("lam")
    assert adams(2, lam) == lam * lam
    assert adams(2, lam + 3) == lam ** 2 + 3


def test_adams_truncates_silently():
    r = LambdaRing(("lam",), 3)
    assert adams(4, r.gen("lam")) == 0


def test_exp_scalar_examples():
    r = LambdaRing(("lam",), 2)
    lam = r.gen("lam")
    assert exp_scalar(r.zero()) == 1
    assert exp_scalar(lam) == 1 + lam + lam * lam / 2
    with pytest.raises(DomainError):
        exp_scalar(lam + 1)


def test_specialize_examples():
    r = LambdaRing(("lam", "eps"), 4)
    s = r.symmetric()
    assert specialize_symmetric(r.gen("lam", 2)) == s.gen("lam") ** 2
    assert specialize_symmetric(r.gen("lam")) == s.gen("lam")
    assert specialize_symmetric(r.gen("lam", 2) + r.gen("eps", 3)) == s.gen("lam") ** 2 + s.gen("eps") ** 3


def test_canonical_text():
    r = LambdaRing(("lam", "eps"), 6)
    x = 1 + r.gen("lam", 2) * Fraction(3, 2) + r.gen("lam") * r.gen("eps")
    assert str(x) == "1 + 3/2*psi2(lam) + lam*eps"


# ---------------------------------------------------------------- properties
ks = st.integers(1, 4)


@given(scalars(), scalars(), ks)
def test_adams_is_ring_homomorphism(x, y, k):
    assert adams(k, x * y) == adams(k, x) * adams(k, y)
    assert adams(k, x + y) == adams(k, x) + adams(k, y)


@given(scalars(SYM), scalars(SYM), ks)
def test_adams_is_ring_homomorphism_symmetric(x, y, k):
    assert adams(k, x * y) == adams(k, x) * adams(k, y)


@given(scalars(), ks, ks)
def test_adams_composition(x, k, m):
    assert adams(k, adams(m, x)) == adams(k * m, x)
    assert adams(1, x) == x


@given(scalars(), scalars(), ks)
def test_specialize_commutes(x, y, k):
    assert specialize_symmetric(x * y) == specialize_symmetric(x) * specialize_symmetric(y)
    assert specialize_symmetric(x + y) == specialize_symmetric(x) + specialize_symmetric(y)
    assert specialize_symmetric(adams(k, x)) == adams(k, specialize_symmetric(x))


@given(scalars(positive=True), scalars(positive=True))
def test_exp_is_multiplicative(x, y):
    assert exp_scalar(x + y) == exp_scalar(x) * exp_scalar(y)


@given(scalars(LambdaRing(("a", "b"), 6)), scalars(LambdaRing(("a", "b"), 6)), ks)
def test_truncation_coherence(x, y, k):
    small = LambdaRing(("a", "b"), 3)
    xs, ys = x.truncate(3), y.truncate(3)
    assert (x * y).truncate(3) == xs * ys
    assert adams(k, x).truncate(3) == adams(k, xs)
    assert xs.ring == small
    xp, yp = x - x.constant, y - y.constant
    assert exp_scalar(xp + yp).truncate(3) == exp_scalar(xp.truncate(3) + yp.truncate(3))
