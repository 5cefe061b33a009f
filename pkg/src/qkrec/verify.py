"""Identity checks run by ``qkrec verify``.

Each check builds both sides with exact arithmetic and compares canonical
forms.  Results are plain dicts ``{identity, status, lhs, rhs, caps, note}``
with ``status`` either ``"pass"`` or ``"fail"``.
"""

from __future__ import annotations

import time
from typing import Callable

from .jfun import (
    CP1,
    ReconParams,
    jsym_cp1,
    jsym_cp1_display,
    q_string,
    reconstruct_t2,
    small_j,
)
from .k_ring import KRingSpec, chi, line_class
from .lambda_ring import LambdaRing, specialize_symmetric
from .novikov import DiffOp, DiffTerm, apply_diffop, constant_series, project_plus_series
from .oracle import (
    adams_log_exp,
    chi_cpn_line,
    cycle_index_brute_force,
    cycle_index_sym_power,
    f0_degree1_cp1,
    sym_power_total,
)
from .parsing import parse_qrat
from .q_algebra import QRat, exp_q, project_plus, q_exponent_sum, qexp


def _result(name, ok, lhs, rhs, caps, note=""):
    return {"identity": name, "status": "pass" if ok else "fail",
            "lhs": str(lhs), "rhs": str(rhs), "caps": caps, "note": note}


def euler_q_exponential(weight_cap: int = 8, **_) -> dict:
    """``exp(sum_k lam^k / k(1-q^k)) = sum_m lam^m / (q;q)_m`` modulo ``lam^(E+1)``."""
    ring = LambdaRing(("lam",), weight_cap)
    lam = ring.gen("lam")
    items = [(k, lam ** k) for k in range(1, weight_cap + 1)]
    lhs = qexp(q_exponent_sum(items, CP1, ring))
    rhs = exp_q(lam, CP1, ring)
    return _result("euler-q-exponential", lhs == rhs and str(lhs) == str(rhs), lhs, rhs,
                   {"weight_cap": weight_cap})


def sym_projection(weight_cap: int = 6, novikov_cap: int = 3, **_) -> dict:
    ring = LambdaRing(("lam", "eps"), weight_cap)
    lhs = project_plus_series(jsym_cp1(ring.gen("lam"), ring.gen("eps"), novikov_cap))
    sym = ring.symmetric()
    rhs = constant_series(parse_qrat("1 - q + lam + eps*P", sym, CP1), CP1, sym, (novikov_cap,))
    return _result("sym-projection", lhs == rhs, lhs.format("P"), rhs.format("P"),
                   {"weight_cap": weight_cap, "novikov_cap": novikov_cap})


def translation_factorization(weight_cap: int = 6, novikov_cap: int = 4, **_) -> dict:
    """``e^{sum eps^k P^k q^{kd}/k(1-q^k)} = e^{sum eps^k P^k/k(1-q^k)} prod_{r<d}(1 - eps P q^r)``."""
    ring = LambdaRing(("eps",), weight_cap, "symmetric")
    eps = ring.gen("eps")
    P = line_class((1,), CP1, ring)
    one = QRat.one(CP1, ring)
    base = qexp(q_exponent_sum([(k, QRat.from_kclass(P ** k * eps ** k)) for k in range(1, weight_cap + 1)],
                               CP1, ring))
    bad = []
    lhs_all, rhs_all = [], []
    for d in range(novikov_cap + 1):
        items = [(k, QRat.from_kclass(P ** k * eps ** k, qexp=k * d)) for k in range(1, weight_cap + 1)]
        lhs = qexp(q_exponent_sum(items, CP1, ring))
        rhs = base
        for r in range(d):
            rhs = rhs * (one - QRat.from_kclass(P * eps, qexp=r))
        if lhs != rhs:
            bad.append(d)
        lhs_all.append(f"d={d}: {lhs}")
        rhs_all.append(f"d={d}: {rhs}")
    return _result("translation-factorization", not bad, "\n".join(lhs_all), "\n".join(rhs_all),
                   {"weight_cap": weight_cap, "novikov_cap": novikov_cap},
                   f"mismatch at d={bad}" if bad else "")


def degree1_potential(weight_cap: int = 6, **_) -> dict:
    ring = LambdaRing(("lam", "eps"), weight_cap)
    lam, eps = ring.gen("lam"), ring.gen("eps")
    f0 = f0_degree1_cp1(lam, eps)
    rhs = adams_log_exp(lam)
    total = sym_power_total(lam, weight_cap)
    eps_free = all(name != "eps" for m in f0.terms for (name, _), _e in m)
    ok = f0 == rhs and rhs == total and eps_free
    return _result("degree1-potential", ok, f0, rhs, {"weight_cap": weight_cap},
                   "" if ok else f"sym_power_total agrees: {rhs == total}; eps-free: {eps_free}")


def cycle_index(weight_cap: int = 8, brute_force_max: int = 6, **_) -> dict:
    ring = LambdaRing(("lam",), weight_cap)
    lam = ring.gen("lam")
    bad = [n for n in range(brute_force_max + 1)
           if cycle_index_sym_power(n, lam) != cycle_index_brute_force(n, lam)]
    lhs = sym_power_total(lam, weight_cap)
    rhs = adams_log_exp(lam)
    ok = not bad and lhs == rhs
    return _result("cycle-index", ok, lhs, rhs, {"weight_cap": weight_cap, "brute_force_max": brute_force_max},
                   f"brute force disagrees at n={bad}" if bad else "")


def degree0_family(weight_cap: int = 5, spaces=(1, 2), **_) -> dict:
    lhs_all, rhs_all, bad = [], [], []
    for N in spaces:
        spec = KRingSpec((N,))
        names = tuple(f"eps{a}" for a in range(N + 1))
        ring = LambdaRing(names, weight_cap)
        seed = small_j(spec, ring, (0,))
        params = ReconParams(eps={(a,): ring.gen(n) for a, n in enumerate(names)})
        got = project_plus(reconstruct_t2(seed, params)[0])
        want = QRat.one(spec, ring) - QRat.q_power(spec, ring, 1)
        for a, n in enumerate(names):
            want = want + QRat.from_kclass(line_class((a,), spec, ring) * ring.gen(n))
        if got.to_qrat() != want:
            bad.append(spec.label())
        lhs_all.append(f"{spec.label()}: {got.format('P')}")
        rhs_all.append(f"{spec.label()}: {want.format('P')}")
    return _result("degree0-family", not bad, "\n".join(lhs_all), "\n".join(rhs_all),
                   {"weight_cap": weight_cap, "novikov_cap": 0},
                   f"mismatch for {bad}" if bad else "")


def dq_closure(weight_cap: int = 4, novikov_cap: int = 3, **_) -> dict:
    """``sum_a c'_a P^a q^{a Q d/dQ}`` maps the ``c = 1`` member of the family to the ``c = c'`` member."""
    ring = LambdaRing(("eps0", "eps1", "c0", "c1"), weight_cap)
    seed = small_j(CP1, ring, (novikov_cap,))
    eps = {(0,): ring.gen("eps0"), (1,): ring.gen("eps1")}
    cprime = {(0,): parse_qrat("c0*(1 - q) + 2", ring, CP1).to_laurent(),
              (1,): parse_qrat("q^-1 + c1*q^2", ring, CP1).to_laurent()}
    D = DiffOp(CP1, ring, [DiffTerm(c, (0,), a) for a, c in cprime.items()])
    lhs = apply_diffop(D, reconstruct_t2(seed, ReconParams(eps=eps)))
    rhs = reconstruct_t2(seed, ReconParams(eps=eps, c=cprime))
    return _result("dq-closure", lhs == rhs and lhs.dropped == 0, lhs, rhs,
                   {"weight_cap": weight_cap, "novikov_cap": novikov_cap})


def q_string_shift(weight_cap: int = 4, novikov_cap: int = 2, **_) -> dict:
    ring = LambdaRing(("eps0", "eps1", "x"), weight_cap)
    seed = small_j(CP1, ring, (novikov_cap,))
    e0, e1, x = ring.gen("eps0"), ring.gen("eps1"), ring.gen("x")
    lhs = q_string(reconstruct_t2(seed, ReconParams(eps={(0,): e0, (1,): e1})), x)
    rhs = reconstruct_t2(seed, ReconParams(eps={(0,): e0 + x, (1,): e1}))
    return _result("q-string-shift", lhs == rhs, lhs, rhs,
                   {"weight_cap": weight_cap, "novikov_cap": novikov_cap})


def chi_pairing(max_dim: int = 4, **_) -> dict:
    """``chi(P^{-m})`` against the classical ``chi(CP^N, O(m))``; the tautological ``P`` is ``O(-1)``."""
    ring = LambdaRing((), 1)
    rows, bad = [], []
    for N in range(1, max_dim + 1):
        spec = KRingSpec((N,))
        for m in range(-(N + 2), N + 3):
            got = chi(line_class((-m,), spec, ring)).constant
            want = chi_cpn_line(N, m)
            rows.append((N, m, got, want))
            if got != want:
                bad.append((N, m))
    lhs = "; ".join(f"chi(CP{N},O({m}))={g}" for N, m, g, _ in rows)
    rhs = "; ".join(f"{w}" for *_, w in rows)
    return _result("chi-pairing", not bad, lhs, rhs, {"max_dim": max_dim},
                   f"mismatch at {bad}" if bad else "")


def closed_form_display(weight_cap: int = 6, novikov_cap: int = 3, **_) -> dict:
    """Compare the flowed family with the closed triple-sum display for both denominator powers."""
    ring = LambdaRing(("lam", "eps"), weight_cap)
    lam, eps = ring.gen("lam"), ring.gen("eps")
    flowed = jsym_cp1(lam, eps, novikov_cap)
    slam, seps = specialize_symmetric(lam), specialize_symmetric(eps)
    agree = {}
    for power in (1, 2):
        disp = jsym_cp1_display(slam, seps, novikov_cap, power)
        agree[power] = [d for d in range(novikov_cap + 1) if flowed[d] == disp[d]]
    full = [p for p, ds in agree.items() if len(ds) == novikov_cap + 1]
    note = "; ".join(f"power {p} agrees at d={ds}" for p, ds in agree.items())
    note += f"; agreeing power: {full[0] if full else 'none'}"
    return _result("closed-form-display", bool(full), flowed.format("P"),
                   jsym_cp1_display(slam, seps, novikov_cap, full[0] if full else 1).format("P"),
                   {"weight_cap": weight_cap, "novikov_cap": novikov_cap}, note)


CHECKS: dict[str, Callable[..., dict]] = {
    "euler-q-exponential": euler_q_exponential,
    "sym-projection": sym_projection,
    "translation-factorization": translation_factorization,
    "degree1-potential": degree1_potential,
    "cycle-index": cycle_index,
    "degree0-family": degree0_family,
    "dq-closure": dq_closure,
    "q-string-shift": q_string_shift,
    "chi-pairing": chi_pairing,
    "closed-form-display": closed_form_display,
}


def run(name: str, **caps) -> dict:
    if name not in CHECKS:
        raise KeyError(f"unknown identity {name!r}; choose from {', '.join(CHECKS)}")
    caps = {k: v for k, v in caps.items() if v is not None}
    t0 = time.perf_counter()
    out = CHECKS[name](**caps)
    out["seconds"] = round(time.perf_counter() - t0, 3)
    return out


def run_all(**caps) -> list[dict]:
    return [run(name, **caps) for name in CHECKS]
