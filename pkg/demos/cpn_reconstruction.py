"""Reconstructing a family of J-function values on CP^2 from the small one.

The parameters eps_a move the point along P^a; the Laurent coefficients c_a
come from q-difference operators, and applying sum_a c_a P^a q^{a Q d/dQ} to
the c = 1 member lands on the c = c_a member.
"""

from qkrec import DiffOp, KRingSpec, LambdaRing, ReconParams, apply_diffop, parse_qrat
from qkrec import project_plus_series, reconstruct_t2, small_j

spec = KRingSpec((2,))
ring = LambdaRing(("e0", "e1", "e2"), 1)
eps = {a: ring.gen(f"e{a}") for a in range(3)}

J = small_j(spec, ring, (2,))
family = reconstruct_t2(J, ReconParams(eps=eps))
print("input point:", project_plus_series(family)[0].format("P"))

c = {0: parse_qrat("1 + q", ring, spec).to_laurent(), 2: parse_qrat("q^-1", ring, spec).to_laurent()}
D = DiffOp(spec, ring, [(v, (0,), (a,)) for a, v in c.items()])
moved = apply_diffop(D, family)
print("operator lands on the c-member:", moved == reconstruct_t2(J, ReconParams(eps=eps, c=c)))
print("degree-0 projection after the operator:", project_plus_series(moved)[0].format("P"))
