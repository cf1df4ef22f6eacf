"""Identity suite run by ``beamsplit check``.

Each check yields a record with its residual and the tolerance it was held
to.  ``kind`` is ``"identity"`` for proved results, whose failure is a
bug, and ``"empirical"`` for inequalities that are only cited; those are
reported but never decide the outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamsplitter import BeamsplitConfig, beamsplit_add
from .continuous import check_log_sum
from .dynamics import (
    divergence_along_flow,
    check_entropy_concavity,
    check_log_sobolev,
    debruijn_lhs_numeric,
    debruijn_rhs,
    heat_rhs,
)
from .pmf import Pmf, geometric_pmf, mean, total_variation
from .transforms import binomial_moments, continuous_moments, eval_H_tilde, eval_phi_tilde

__all__ = ["CheckResult", "TOLERANCES", "run_identity_checks"]

TOLERANCES = {
    "hphi_relation": 1e-10,
    "second_moment": 1e-10,
    "mean_linearity": 1e-10,
    "geometric_closure": 1e-10,
    "heat_equation": 1e-6,
    "de_bruijn": 1e-5,
    "de_bruijn_input": 1e-5,
    "log_sobolev_entropic": 1e-10,
    "log_sobolev_quadratic": 1e-10,
    "log_sum": 1e-8,
    "entropy_concavity": 1e-9,
}
HPHI_POINTS = (-0.1, -1.0, -5.0)
FD_STEP = 1e-4
GEOM_EPSILON = 1e-14
DEBRUIJN_FLOOR = 1e-8


@dataclass
class CheckResult:
    name: str
    kind: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""
    values: dict | None = None

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.values:
            out.update(self.values)
        if self.note:
            out["note"] = self.note
        return out


def _skip(name: str, why: str) -> CheckResult:
    return CheckResult(name, "identity", math.nan, TOLERANCES[name], True, f"skipped: {why}")


def _debruijn_record(name: str, lhs: float, r: float) -> CheckResult:
    values = {"lhs": lhs, "rhs": r}
    if math.isinf(r):
        return CheckResult(name, "identity", math.inf, TOLERANCES["de_bruijn"], True,
                           "right-hand side is +inf for finite support; consistent but uninformative", values)
    # relative tolerance, plus a floor for identities that vanish: D itself
    # carries ~1e-13 of round-off, which the difference quotient divides by h
    allowed = TOLERANCES["de_bruijn"] * abs(r) + DEBRUIJN_FLOOR
    res = abs(lhs - r)
    return CheckResult(name, "identity", res, allowed, res <= allowed, values=values)


def _debruijn_at_input(X: Pmf, Yg: Pmf, lambdaY: float, cfg: BeamsplitConfig) -> CheckResult:
    """De Bruijn identity at eta = 1, where Z_1 = X, with a one-sided difference."""
    if mean(X) <= 0:
        return _skip("de_bruijn_input", "X has zero mean")
    r = debruijn_rhs(X, 1.0, lambdaY)
    if math.isinf(r):
        return _debruijn_record("de_bruijn_input", math.nan, r)
    f0, f1, f2 = (divergence_along_flow(X, Yg, lambdaY, 1.0 - k * FD_STEP, cfg) for k in range(3))
    lhs = (3 * f0 - 4 * f1 + f2) / (2 * FD_STEP)
    return _debruijn_record("de_bruijn_input", lhs, r)


def run_identity_checks(X: Pmf, Y: Pmf | None, eta: float, lambdaY: float,
                        cfg: BeamsplitConfig | None = None, precision_bits: int = 256) -> list[CheckResult]:
    """Run every check on X (and Y, default Geom(lambdaY)) at the given eta."""
    cfg = cfg or BeamsplitConfig()
    if Y is None:
        Y = geometric_pmf(lambdaY, GEOM_EPSILON)
    results = []
    tol = TOLERANCES

    b = binomial_moments(X, precision_bits=precision_bits)
    c = continuous_moments(b)
    res = max(abs(eval_H_tilde(X, t) - math.exp(-t) * eval_phi_tilde(c, t)) for t in HPHI_POINTS)
    results.append(CheckResult("hphi_relation", "identity", res, tol["hphi_relation"], res <= tol["hphi_relation"]))
    res = abs(float(c.d[1]) - 1 - mean(X)) if c.order >= 1 else abs(mean(X))
    results.append(CheckResult("second_moment", "identity", res, tol["second_moment"], res <= tol["second_moment"]))

    Z = beamsplit_add(X, Y, eta, cfg)
    res = abs(mean(Z) - eta * mean(X) - (1 - eta) * mean(Y))
    results.append(CheckResult("mean_linearity", "identity", res, tol["mean_linearity"], res <= tol["mean_linearity"]))

    lam_x = mean(X)
    GZ = beamsplit_add(geometric_pmf(lam_x, GEOM_EPSILON), geometric_pmf(lambdaY, GEOM_EPSILON), eta, cfg)
    res = total_variation(GZ, geometric_pmf(eta * lam_x + (1 - eta) * lambdaY, GEOM_EPSILON))
    results.append(CheckResult("geometric_closure", "identity", res, tol["geometric_closure"],
                               res <= tol["geometric_closure"]))

    Yg = geometric_pmf(lambdaY, GEOM_EPSILON)
    if not (FD_STEP < eta <= 1 - FD_STEP):
        results.append(_skip("heat_equation", "eta too close to an endpoint for central differences"))
        results.append(_skip("de_bruijn", "eta too close to an endpoint for central differences"))
    else:
        zp = beamsplit_add(X, Yg, eta + FD_STEP, cfg).probs
        zm = beamsplit_add(X, Yg, eta - FD_STEP, cfg).probs
        fd = (zp - zm) / (2 * FD_STEP)
        rhs = heat_rhs(beamsplit_add(X, Yg, eta, cfg), eta, lambdaY).values[: fd.size]
        res = float(np.max(np.abs(fd - rhs)))
        results.append(CheckResult("heat_equation", "identity", res, tol["heat_equation"], res <= tol["heat_equation"]))

        Zg = beamsplit_add(X, Yg, eta, cfg)
        if mean(Zg) <= 0:
            results.append(_skip("de_bruijn", "Z_eta has zero mean"))
        else:
            r = debruijn_rhs(Zg, eta, lambdaY)
            lhs = debruijn_lhs_numeric(X, lambdaY, eta, FD_STEP, cfg, GEOM_EPSILON)
            results.append(_debruijn_record("de_bruijn", lhs, r))

    results.append(_debruijn_at_input(X, Yg, lambdaY, cfg))

    if lam_x > 0:
        ls = check_log_sobolev(X, tol["log_sobolev_entropic"])
        results.append(CheckResult("log_sobolev_entropic", "identity", ls.lhs - ls.rhs_entropic,
                                   tol["log_sobolev_entropic"], ls.holds_entropic))
        results.append(CheckResult("log_sobolev_quadratic", "identity", ls.lhs - ls.rhs_quadratic,
                                   tol["log_sobolev_quadratic"], ls.holds_quadratic))
    else:
        results.append(_skip("log_sobolev_entropic", "X has zero mean"))
        results.append(_skip("log_sobolev_quadratic", "X has zero mean"))

    lsum = check_log_sum(X, Y, tol["log_sum"])
    results.append(CheckResult("log_sum", "identity", lsum.continuous - lsum.discrete, tol["log_sum"], lsum.holds))

    lhs, rhs, ok = check_entropy_concavity(X, Y, eta, tol["entropy_concavity"], cfg)
    results.append(CheckResult("entropy_concavity", "empirical", rhs - lhs, tol["entropy_concavity"], ok))
    return results
