from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qkrec.k_ring import KClass, KRingSpec
from qkrec.lambda_ring import LambdaRing, LambdaScalar
from qkrec.q_algebra import QRat

settings.register_profile("qkrec", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qkrec")

RING = LambdaRing(("a", "b"), 4)
SYM = RING.symmetric()
CP1 = KRingSpec((1,))
CP2 = KRingSpec((2,))
CP1xCP1 = KRingSpec((1, 1))

small_fracs = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


def _monomials(ring):
    levels = (1,) if ring.mode == "symmetric" else (1, 2)
    symbol = st.tuples(st.sampled_from(ring.names), st.sampled_from(levels))
    return st.lists(symbol, max_size=3)


@st.composite
def scalars(draw, ring=RING, positive=False, max_terms=4):
    terms = {}
    for syms in draw(st.lists(_monomials(ring), max_size=max_terms)):
        if positive and not syms:
            continue
        counts = {}
        for s in syms:
            counts[s] = counts.get(s, 0) + 1
        mono = tuple(sorted(counts.items()))
        terms[mono] = terms.get(mono, 0) + draw(small_fracs)
    return LambdaScalar(ring, terms)


@st.composite
def kclasses(draw, spec=CP1, ring=RING):
    coeffs = {j: draw(scalars(ring, max_terms=2)) for j in spec.basis()}
    return KClass.from_coeffs(spec, ring, coeffs)


@st.composite
def qrats(draw, spec=CP1, ring=RING, max_den=2):
    num = {e: draw(kclasses(spec, ring)) for e in draw(st.lists(st.integers(-2, 3), max_size=3, unique=True))}
    den = draw(st.dictionaries(st.integers(1, 3), st.integers(1, max_den), max_size=2))
    return QRat.from_alphabet(spec, ring, num, den)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)
