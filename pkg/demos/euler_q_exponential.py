"""The q-exponential written two ways.

With psi^k(lam) = lam^k the plethystic exponential
exp(sum_k lam^k / k(1-q^k)) collapses to sum_m lam^m / (1-q)...(1-q^m).
Both sides are built here with exact arithmetic and compared term by term.
"""

from qkrec import KRingSpec, LambdaRing
from qkrec.q_algebra import exp_q, q_exponent_sum, qexp

E = 3
spec = KRingSpec((1,))
ring = LambdaRing(("lam",), E)
lam = ring.gen("lam")

lhs = qexp(q_exponent_sum([(k, lam ** k) for k in range(1, E + 1)], spec, ring))
rhs = exp_q(lam, spec, ring)

print(f"weight cap {E}")
print("exponential form :", lhs)
print("Pochhammer form  :", rhs)
print("equal:", lhs == rhs)
