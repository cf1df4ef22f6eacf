"""Entropy inequalities on random inputs.

Two families of bounds are checked on random laws:

* the log-Sobolev bounds, which control D(X || Geom(mean X)) by the tilts
  of X and by the Fisher-type sums of its score;
* the log-sum bound D(X_c || Y_c) <= D(X || Y) for the circularly
  symmetric continuous counterparts.

The closed-form case of the vacuum against Geom(1) is printed last.
"""

import math

import numpy as np

from beamsplit import (
    beamsplit_add,
    check_log_sobolev,
    check_log_sum,
    geometric_mixture_pmf,
    geometric_pmf,
    make_pmf,
    point_mass,
)

rng = np.random.default_rng(1)


def random_infinite_tail():
    if rng.random() < 0.5:
        k = rng.integers(1, 4)
        return geometric_mixture_pmf(rng.dirichlet(np.ones(k)), rng.uniform(0.05, 5, k), 1e-14)
    base = make_pmf(rng.dirichlet(np.ones(rng.integers(2, 10))))
    return beamsplit_add(base, geometric_pmf(rng.uniform(0.2, 3), 1e-14), rng.uniform(0.1, 0.9))


slack_e, slack_q = [], []
for _ in range(300):
    rep = check_log_sobolev(random_infinite_tail())
    assert rep.holds_entropic and rep.holds_quadratic
    slack_e.append(rep.rhs_entropic - rep.lhs)
    slack_q.append(rep.rhs_quadratic - rep.lhs)
print(f"log-Sobolev, 300 laws: smallest slack {min(slack_e):.2e} (tilts), {min(slack_q):.2e} (score)")

gaps = []
for _ in range(200):
    X, Y = random_infinite_tail(), random_infinite_tail()
    rep = check_log_sum(X, Y)
    assert rep.holds
    gaps.append(rep.discrete - rep.continuous)
print(f"log-sum, 200 pairs: smallest gap D(X||Y) - D(X_c||Y_c) = {min(gaps):.2e}")

rep = check_log_sum(point_mass(0), geometric_pmf(1.0, 1e-14))
print(f"vacuum vs Geom(1): {rep.continuous:.6f} <= {rep.discrete:.6f}"
      f"  (closed forms {math.log(2) - 0.5:.6f}, {math.log(2):.6f})")
