"""Adding thermal noise as a flow in eta.

Feeding X against Geom(lambda_Y) and lowering eta from 1 moves the output
law along a discrete heat equation.  Here the flow is integrated directly
and compared with the channel computed in one shot at each grid point.  The
trajectory is also written as CSV to the temporary directory.
"""

import tempfile
from pathlib import Path

import numpy as np

from beamsplit import EvolveConfig, beamsplit_add, evolve_heat, geometric_pmf, heat_rhs, make_pmf, total_variation
from beamsplit.io import write_trajectory_csv

X = make_pmf([0.1, 0.0, 0.6, 0.0, 0.3])
lambdaY = 1.0
grid = tuple(np.round(np.linspace(1.0, 0.2, 9), 12))

traj = evolve_heat(X, lambdaY, EvolveConfig(grid))
Y = geometric_pmf(lambdaY, 1e-14)
print(" eta   TV(flow, channel)")
for eta, p in traj:
    print(f"{eta:4.2f}   {total_variation(p, beamsplit_add(X, Y, eta)):.2e}")

# the right-hand side really is the eta-derivative of the channel output
eta, h = 0.5, 1e-4
fd = (beamsplit_add(X, Y, eta + h).probs - beamsplit_add(X, Y, eta - h).probs) / (2 * h)
rhs = heat_rhs(beamsplit_add(X, Y, eta), eta, lambdaY).values[: fd.size]
print(f"\nmax |central difference - heat_rhs| at eta = {eta}: {np.max(np.abs(fd - rhs)):.2e}")

out = Path(tempfile.gettempdir()) / "heat_flow_trajectory.csv"
write_trajectory_csv(traj, out)
print(f"trajectory written to {out}")
