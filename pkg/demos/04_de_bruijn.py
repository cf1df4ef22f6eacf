"""Relative entropy to the matching geometric along the flow.

D(Z_eta || G_eta), with G_eta the geometric of the same mean, changes with
eta at a rate given by two relative entropies between the size-biased
tilts of Z_eta.  The script compares that closed form with a numerical
derivative for a bimodal mixture of geometrics, then shows the two
degenerate cases: it vanishes for geometric inputs and is infinite for a
finite-support law.
"""

from beamsplit import (
    beamsplit_add,
    debruijn_lhs_numeric,
    debruijn_rhs,
    geometric_mixture_pmf,
    geometric_pmf,
    point_mass,
)

lambdaY = 1.0
Y = geometric_pmf(lambdaY, 1e-14)
X = geometric_mixture_pmf([0.5, 0.5], [0.5, 4.0], 1e-14)

print(" eta     numeric d/d eta      tilt formula     rel. diff")
for eta in (0.2, 0.35, 0.5, 0.65, 0.8):
    lhs = debruijn_lhs_numeric(X, lambdaY, eta, 1e-4)
    rhs = debruijn_rhs(beamsplit_add(X, Y, eta), eta, lambdaY)
    print(f"{eta:4.2f}   {lhs:16.10f}   {rhs:16.10f}   {abs(lhs - rhs) / rhs:.1e}")

G = geometric_pmf(2.0, 1e-14)
print("\ngeometric input:", debruijn_rhs(beamsplit_add(G, Y, 0.5), 0.5, lambdaY))
print("single photon:  ", debruijn_rhs(point_mass(1), 0.5, lambdaY))
