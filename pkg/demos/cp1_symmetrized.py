"""Two-parameter family on CP^1 in the symmetrized theory.

Start from the small J-function, flow along lam + eps P q^{Q d/dQ}, then set
psi^k(x) = x^k.  The projection to Laurent polynomials is the input point
1 - q + lam + eps*P, and each Novikov coefficient agrees with the closed
product formula.
"""

from qkrec import LambdaRing, jsym_cp1, jsym_cp1_simplified, project_plus_series, specialize_symmetric

ring = LambdaRing(("lam", "eps"), 2)
lam, eps = ring.gen("lam"), ring.gen("eps")
J = jsym_cp1(lam, eps, 2)

print("[J]_+ =", project_plus_series(J).format("P"))
for d in range(2):
    print(f"J_{d} =", J[d].format("P"))

closed = jsym_cp1_simplified(specialize_symmetric(lam), specialize_symmetric(eps), 2)
print("matches closed product form:", closed == J)
