"""Degree-1 genus-0 potential of CP^1 at t = lam + eps P.

The potential comes out of a residue pairing between [J]_+ and the degree-1
coefficient of J.  It does not depend on eps, and it equals the generating
function of symmetric powers, computed independently from cycle indices.
"""

from qkrec import LambdaRing
from qkrec.oracle import f0_degree1_cp1, sym_power_total

ring = LambdaRing(("lam", "eps"), 4)
lam, eps = ring.gen("lam"), ring.gen("eps")

f0 = f0_degree1_cp1(lam, eps)
print("F_0 at degree 1:", f0)
print("eps-independent:", f0 == f0_degree1_cp1(lam, ring.zero()))
print("sum of symmetric powers:", f0 == sym_power_total(lam, ring.cap))
