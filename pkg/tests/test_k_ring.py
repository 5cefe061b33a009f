import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CP1, CP1xCP1, CP2, RING, kclasses, scalars
from qkrec.k_ring import KClass, KRingSpec, chi, invert_unit, kadams, kmul, line_class
from qkrec.lambda_ring import DomainError, LambdaRing, StructureError
from qkrec.oracle import chi_cpn_line

R0 = LambdaRing((), 1)


def u(spec, i=0, power=1):
    return KClass.u(spec, R0, i, power)


def test_line_class_examples():
    one = KClass.one(CP1, R0)
    assert line_class((0,), CP1, R0) == one
    assert line_class((1,), CP1, R0) == one - u(CP1)
    assert line_class((-1,), CP1, R0) == one + u(CP1)
    assert kmul(line_class((-1,), CP1, R0), line_class((1,), CP1, R0)) == one


def test_relations_annihilate():
    assert kmul(u(CP1), u(CP1)) == 0
    assert kmul(u(CP2, power=2), u(CP2)) == 0
    assert kmul(u(CP2), u(CP2)) == u(CP2, power=2)
    x = KClass.one(CP2, R0) * 3 - u(CP2)
    assert kmul(x, KClass.one(CP2, R0)) == x


def test_spec_mismatch_raises():
    with pytest.raises(StructureError):
        kmul(u(CP1), u(CP2))


def test_invert_unit_examples():
    one = KClass.one(CP1, R0)
    assert invert_unit(one) == one
    assert invert_unit(line_class((1,), CP1, R0)) == one + u(CP1)
    assert invert_unit(one * 2) == one / 2
    with pytest.raises(DomainError):
        invert_unit(u(CP1))


def test_chi_examples():
    for N in (1, 2, 3):
        assert chi(KClass.one(KRingSpec((N,)), R0)) == 1
    assert chi(line_class((1,), CP1, R0)) == 0
    assert chi(line_class((-1,), CP1, R0)) == 2


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_chi_matches_classical_values(N):
    spec = KRingSpec((N,))
    for m in range(-(N + 2), N + 3):
        assert chi(line_class((-m,), spec, R0)) == chi_cpn_line(N, m)


def test_chi_on_products_is_multiplicative():
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert chi(line_class((a, b), CP1xCP1, R0)) == chi_cpn_line(1, -a) * chi_cpn_line(1, -b)


def test_kadams_on_line_classes():
    for k in (1, 2, 3):
        for a in (-2, 1, 2):
            assert kadams(k, line_class((a,), CP2, R0)) == line_class((k * a,), CP2, R0)


def test_text_form():
    r = LambdaRing(("lam",), 2)
    x = KClass.from_scalar(CP1, r.gen("lam")) + KClass.u(CP1, r, 0) * 2
    assert str(x) == "2*u + lam"
    assert x.format("P") == "2 - 2*P + lam"


# ---------------------------------------------------------------- properties
@given(kclasses(CP2))
def test_top_power_annihilates(x):
    u1, u2 = KClass.u(CP2, RING, 0), KClass.u(CP2, RING, 0, 2)
    assert kmul(kmul(x, u2), u1) == 0
    assert kmul(x, u2) == u2 * x.coeff((0,))


@given(kclasses(CP1xCP1, RING), scalars())
def test_chi_linear_over_scalars(x, s):
    assert chi(x * s) == chi(x) * s


@given(kclasses(CP1xCP1, RING), kclasses(CP1xCP1, RING))
def test_chi_additive(x, y):
    assert chi(x + y) == chi(x) + chi(y)


@given(kclasses(CP2, RING), st.integers(-4, 4).filter(bool))
def test_invert_unit_two_sided(x, c):
    x = x - x.augmentation + c
    y = invert_unit(x)
    assert kmul(x, y) == 1 and kmul(y, x) == 1


@given(kclasses(CP1xCP1, RING), kclasses(CP1xCP1, RING), st.integers(1, 3))
def test_kadams_homomorphism(x, y, k):
    assert kadams(k, kmul(x, y)) == kmul(kadams(k, x), kadams(k, y))
