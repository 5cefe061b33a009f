"""Independent checks: cycle indices, classical Euler characteristics, and the
degree-1 potential of CP^1 computed through a residue pairing.

Nothing here goes through the reconstruction flows in :mod:`qkrec.jfun`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator

from .k_ring import KClass, KRingSpec, line_class
from .lambda_ring import LambdaScalar, adams, exp_scalar, lsum
from .q_algebra import QLaurent, QRat, as_qrat, exp_qseries, invert_one_minus_pq, residue_zero_infty


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def centralizer_order(self) -> int:
        """``prod_k k^{m_k} m_k!`` -- the number of permutations commuting with one of this cycle type."""
        z = 1
        for k, m in self.multiplicities.items():
            z *= k ** m * factorial(m)
        return z


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` with parts in weakly decreasing order."""
    if largest is None:
        largest = n
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + rest.parts)


def _cycle_monomial(x: LambdaScalar, cycle_type: dict[int, int]) -> LambdaScalar:
    out = x.ring.one()
    for k, m in cycle_type.items():
        out = out * adams(k, x) ** m
    return out


def cycle_index_sym_power(n: int, x: LambdaScalar) -> LambdaScalar:
    """``(x^{(x)n})^{S_n} = sum_mu prod_k psi^k(x)^{m_k} / (prod_k k^{m_k} m_k!)``."""
    return lsum(x.ring, (
        _cycle_monomial(x, mu.multiplicities) * Fraction(1, mu.centralizer_order())
        for mu in partitions(n)
    ))


def cycle_type(perm: tuple[int, ...]) -> dict[int, int]:
    seen = [False] * len(perm)
    lengths = Counter()
    for i in range(len(perm)):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            lengths[length] += 1
    return dict(lengths)


def cycle_index_brute_force(n: int, x: LambdaScalar) -> LambdaScalar:
    """Average of ``prod_k psi^k(x)^{l_k(h)}`` over all ``n!`` permutations ``h``."""
    cache: dict[tuple, LambdaScalar] = {}
    total = x.ring.zero()
    for perm in itertools.permutations(range(n)):
        ct = cycle_type(perm)
        key = tuple(sorted(ct.items()))
        if key not in cache:
            cache[key] = _cycle_monomial(x, ct)
        total = total + cache[key]
    return total * Fraction(1, factorial(n))


def sym_power_total(x: LambdaScalar, n_max: int) -> LambdaScalar:
    """``sum_{n <= n_max} (x^{(x)n})^{S_n}``."""
    return lsum(x.ring, (cycle_index_sym_power(n, x) for n in range(n_max + 1)))


def adams_log_exp(x: LambdaScalar) -> LambdaScalar:
    """``exp(sum_{k <= cap} psi^k(x) / k)``."""
    return exp_scalar(lsum(x.ring, (adams(k, x) * Fraction(1, k) for k in range(1, x.ring.cap + 1))))


def chi_cpn_line(N: int, m: int) -> int:
    """``chi(CP^N, O(m))`` by the classical formula."""
    if m >= 0:
        return comb(N + m, N)
    if m >= -N:
        return 0
    return (-1) ** N * comb(-m - 1, N)


def omega_pair_example(f_plus, J_d: QRat) -> LambdaScalar:
    """``Res_{q=0,inf} chi(f_plus(1/q) * J_d(q)) dq/q``.

    This is the pairing instantiated with a Laurent polynomial ``f_plus`` and
    a Novikov coefficient ``J_d``; it equals ``-Omega(f_plus, J_d)``.
    """
    spec, ring = J_d.spec, J_d.ring
    f = as_qrat(f_plus, spec, ring)
    if not f.is_laurent():
        raise ValueError("f_plus must be a Laurent polynomial in q")
    form = (f.substitute_inverse_q() * J_d).chi()
    return residue_zero_infty(form).scalar_part()


CP1 = KRingSpec((1,))


def cp1_degree1_inputs(lam: LambdaScalar, eps: LambdaScalar) -> tuple[QLaurent, QRat]:
    """``[J]_+ = 1 - q + lam + eps P`` and ``J_1 = (1-q)/(1-Pq)^2 e^{A(q)}`` with
    ``A(q) = sum_k (psi^k(lam) + psi^k(eps) P^k q^k) / k(1-q^k)``."""
    ring = lam.ring
    P = line_class((1,), CP1, ring)
    one = KClass.one(CP1, ring)
    f_plus = QLaurent(CP1, ring, {0: one + lam + P * eps, 1: -one})
    items = []
    for k in range(1, ring.cap + 1):
        items.append((k, adams(k, lam)))
        items.append((k, QRat.from_kclass(P ** k * adams(k, eps), qexp=k)))
    A = exp_qseries(items, CP1, ring)
    J1 = QRat.from_laurent(CP1, ring, {0: one, 1: -one}) * invert_one_minus_pq((1,), 1, 2, CP1, ring) * A
    return f_plus, J1


def f0_degree1_cp1(lam: LambdaScalar, eps: LambdaScalar) -> LambdaScalar:
    """Degree-1 part of the genus-0 potential of CP^1 at ``t = lam + eps P``.

    ``F_0 = -1/2 Omega([J]_+, J) - 1/2 (psi^2(t(1)), 1)``; the second term has
    Novikov degree 0, so at degree 1 only the pairing contributes.
    """
    f_plus, J1 = cp1_degree1_inputs(lam, eps)
    return omega_pair_example(f_plus, J1) * Fraction(1, 2)
