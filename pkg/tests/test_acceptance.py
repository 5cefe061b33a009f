"""The ten acceptance identities at their pinned caps, with exact equality.

Each test records a ``PASS <name>`` or ``FAIL <name>`` line; the lines are
printed in the terminal summary (see ``conftest.py``).  Running this file
directly prints them without pytest.
"""

import time

from qkrec import verify
from qkrec.jfun import CP1, ReconParams, jsym_cp1, q_string, reconstruct_t2, small_j
from qkrec.k_ring import KClass, KRingSpec, chi, line_class
from qkrec.lambda_ring import LambdaRing
from qkrec.novikov import DiffOp, DiffTerm, apply_diffop, constant_series, project_plus_series
from qkrec.oracle import (
    adams_log_exp,
    chi_cpn_line,
    cycle_index_brute_force,
    cycle_index_sym_power,
    f0_degree1_cp1,
    sym_power_total,
)
from qkrec.parsing import parse_qrat
from qkrec.q_algebra import QRat, project_plus, q_exponent_sum, qexp

REPORT: list[str] = []


def record(name, ok, seconds=None, note=""):
    line = f"{'PASS' if ok else 'FAIL'} {name}"
    if seconds is not None:
        line += f" ({seconds:.2f}s)"
    if note:
        line += f" [{note}]"
    REPORT.append(line)
    print(line)
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_1_euler_q_exponential():
    E = 8

    def build():
        ring = LambdaRing(("lam",), E)
        lam = ring.gen("lam")
        lhs = qexp(q_exponent_sum([(k, lam ** k) for k in range(1, E + 1)], CP1, ring))
        rhs = QRat.zero(CP1, ring)
        for m in range(E + 1):
            rhs = rhs + QRat.from_alphabet(CP1, ring, {0: KClass.from_scalar(CP1, lam ** m)},
                                           {t: 1 for t in range(1, m + 1)})
        return lhs, rhs

    (lhs, rhs), secs = timed(build)
    ok = lhs == rhs and str(lhs) == str(rhs)
    record("1 euler-q-exponential", ok and secs < 5, secs)
    assert ok
    assert secs < 5


def test_2_sym_projection():
    def build():
        ring = LambdaRing(("lam", "eps"), 6)
        return project_plus_series(jsym_cp1(ring.gen("lam"), ring.gen("eps"), 3))

    got, secs = timed(build)
    sym = got.ring
    want = constant_series(parse_qrat("1 - q + lam + eps*P", sym, CP1), CP1, sym, (3,))
    ok = got == want and got.format("P") == "1 - q + lam + eps*P"
    record("2 sym-projection", ok and secs < 30, secs)
    assert ok
    assert secs < 30


def test_3_translation_factorization():
    ring = LambdaRing(("eps",), 6, "symmetric")
    eps = ring.gen("eps")
    P = line_class((1,), CP1, ring)

    def exponent(d):
        items = [(k, QRat.from_kclass(P ** k * eps ** k, qexp=k * d)) for k in range(1, ring.cap + 1)]
        return qexp(q_exponent_sum(items, CP1, ring))

    base = exponent(0)
    bad = []
    for d in range(5):
        rhs = base
        for r in range(d):
            rhs = rhs * (1 - QRat.from_kclass(P * eps, qexp=r))
        if exponent(d) != rhs:
            bad.append(d)
    record("3 translation-factorization", not bad, note=f"mismatch at d={bad}" if bad else "")
    assert not bad


def test_4_degree1_potential():
    ring = LambdaRing(("lam", "eps"), 6)
    lam, eps = ring.gen("lam"), ring.gen("eps")
    f0 = f0_degree1_cp1(lam, eps)
    ok = (f0 == adams_log_exp(lam)
          and f0 == sym_power_total(lam, 6)
          and f0 == f0_degree1_cp1(lam, ring.zero())
          and "eps" not in str(f0))
    record("4 degree1-potential", ok)
    assert ok


def test_5_cycle_index():
    ring = LambdaRing(("lam",), 8)
    lam = ring.gen("lam")
    bad = [n for n in range(7) if cycle_index_sym_power(n, lam) != cycle_index_brute_force(n, lam)]
    ok = not bad and sym_power_total(lam, 8) == adams_log_exp(lam)
    record("5 cycle-index", ok, note=f"brute force disagrees at n={bad}" if bad else "")
    assert ok


def test_6_degree0_family():
    bad = []
    for N in (1, 2):
        spec = KRingSpec((N,))
        names = tuple(f"eps{a}" for a in range(N + 1))
        ring = LambdaRing(names, 5)
        seed = constant_series(parse_qrat("1 - q", ring, spec), spec, ring, (0,))
        params = ReconParams(eps={(a,): ring.gen(n) for a, n in enumerate(names)}, c={(0,): 1})
        got = project_plus(reconstruct_t2(seed, params)[0])
        want = parse_qrat("1 - q" + "".join(f" + {n}*P^{a}" for a, n in enumerate(names)), ring, spec)
        if got.to_qrat() != want:
            bad.append(f"CP{N}")
    record("6 degree0-family", not bad, note=f"mismatch for {bad}" if bad else "CP1, CP2")
    assert not bad


def test_7_dq_closure():
    ring = LambdaRing(("eps0", "eps1", "c0", "c1"), 4)
    seed = small_j(CP1, ring, (3,))
    eps = {(0,): ring.gen("eps0"), (1,): ring.gen("eps1")}
    cprime = {(0,): parse_qrat("c0*(1 - q) + 2", ring, CP1).to_laurent(),
              (1,): parse_qrat("q^-1 + c1*q^2", ring, CP1).to_laurent()}
    D = DiffOp(CP1, ring, [DiffTerm(c, (0,), a) for a, c in cprime.items()])
    lhs = apply_diffop(D, reconstruct_t2(seed, ReconParams(eps=eps, c={(0,): 1})))
    rhs = reconstruct_t2(seed, ReconParams(eps=eps, c=cprime))
    ok = lhs == rhs and lhs.dropped == 0
    record("7 dq-closure", ok)
    assert ok


def test_8_q_string_shift():
    ring = LambdaRing(("eps0", "eps1", "x"), 4)
    seed = small_j(CP1, ring, (3,))
    e0, e1, x = ring.gen("eps0"), ring.gen("eps1"), ring.gen("x")
    lhs = q_string(reconstruct_t2(seed, ReconParams(eps={(0,): e0, (1,): e1})), x)
    rhs = reconstruct_t2(seed, ReconParams(eps={(0,): e0 + x, (1,): e1}))
    ok = lhs == rhs
    record("8 q-string-shift", ok)
    assert ok


def test_9_chi_pairing():
    ring = LambdaRing((), 1)
    bad = []
    for N in range(1, 5):
        spec = KRingSpec((N,))
        for m in range(-(N + 2), N + 3):
            if chi(line_class((-m,), spec, ring)) != chi_cpn_line(N, m):
                bad.append((N, m))
    ok = not bad and chi(line_class((1,), CP1, ring)) == 0
    record("9 chi-pairing", ok, note=f"mismatch at {bad}" if bad else "")
    assert ok


def test_10_closed_form_display():
    res = verify.closed_form_display(weight_cap=6, novikov_cap=3)
    ok = res["status"] == "pass"
    record("10 closed-form-display", ok, note=res["note"])
    assert ok
    assert "agreeing power: 2" in res["note"]


def test_verify_all_reports_every_criterion():
    results = verify.run_all()
    assert [r["identity"] for r in results] == list(verify.CHECKS)
    assert len(results) == 10
    assert all(r["status"] == "pass" for r in results), [r["identity"] for r in results if r["status"] != "pass"]


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and name[5].isdigit():
            try:
                fn()
            except AssertionError:
                pass
