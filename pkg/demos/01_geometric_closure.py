"""Thermal light stays thermal.

A geometric photon count is what a thermal source produces.  Mixing two
thermal beams on a beamsplitter gives a thermal beam again, with the mean
interpolated by the transmissivity.  This script checks that with both
backends and prints how far the output is from the predicted geometric.
"""

import time

from beamsplit import BeamsplitConfig, beamsplit_add, geometric_pmf, mean, total_variation

EPS = 1e-14

for lam_x, lam_y, eta in [(1.0, 1.0, 0.3), (0.5, 3.0, 0.5), (4.0, 0.2, 0.9)]:
    X = geometric_pmf(lam_x, EPS)
    Y = geometric_pmf(lam_y, EPS)
    predicted = geometric_pmf(eta * lam_x + (1 - eta) * lam_y, EPS)
    print(f"Geom({lam_x}) [+]_{eta} Geom({lam_y})  ->  expect Geom({eta * lam_x + (1 - eta) * lam_y:g})")
    for backend in ("quadrature", "exact_moments"):
        start = time.perf_counter()
        Z = beamsplit_add(X, Y, eta, BeamsplitConfig(backend=backend))
        secs = time.perf_counter() - start
        print(f"  {backend:>13}: mean {mean(Z):.12f}, TV to prediction {total_variation(Z, predicted):.1e}"
              f" ({secs * 1e3:.1f} ms, {Z.support_bound + 1} states)")
