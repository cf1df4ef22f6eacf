"""Heat flow along Z_eta = X [+]_eta Geom(lambda_Y) and the entropy functionals it drives.

For a geometric Y the output masses obey the discrete heat equation

    d/d eta p[n] = Delta( (n/eta) (p[n-1] lambda_Y - p[n] (1 + lambda_Y)) ),

with Delta u[n] = u[n+1] - u[n].  Differentiating D(Z_eta || G_eta) along
this flow gives a de Bruijn identity in terms of the size-biased tilts p+ and
p-, and at eta = 1 a log-Sobolev inequality.  This module evaluates all of
these quantities and integrates the flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beamsplitter import BeamsplitConfig, beamsplit_add, check_eta
from .errors import DomainError, EtaZero, StepFailure, ValidationError, ZeroMean
from .pmf import DEFAULT_TOLERANCE, Pmf, entropy, geometric_pmf, mean, relative_entropy

__all__ = [
    "EvolveConfig",
    "LogSobolevReport",
    "ScoreProfile",
    "SignedSeq",
    "TiltedPair",
    "check_entropy_concavity",
    "check_log_sobolev",
    "debruijn_lhs_numeric",
    "debruijn_rhs",
    "divergence_along_flow",
    "evolve_heat",
    "heat_rhs",
    "score",
    "tilted_pair",
]


@dataclass(frozen=True, eq=False)
class SignedSeq:
    """Signed sequence indexed by n, here a rate of change of mass per unit eta."""

    values: np.ndarray

    @property
    def total(self) -> float:
        return math.fsum(self.values)


def _flux(probs: np.ndarray, lambdaY: float) -> np.ndarray:
    # u[n] = n (p[n-1] lambda_Y - p[n] (1 + lambda_Y)) for n = 0..len(probs)
    S = probs.size
    n = np.arange(S + 1)
    prev = np.concatenate(([0.0], probs))
    cur = np.concatenate((probs, [0.0]))
    return n * (prev * lambdaY - cur * (1.0 + lambdaY))


def heat_rhs(p: Pmf, eta: float, lambdaY: float) -> SignedSeq:
    """d p[n] / d eta on n = 0..N+1 for Z_eta = X [+]_eta Geom(lambdaY) at state ``p``."""
    eta = check_eta(eta)
    if eta == 0:
        raise EtaZero("the heat equation is singular at eta = 0")
    if lambdaY < 0:
        raise ValidationError("lambdaY must be non-negative")
    u = np.append(_flux(p.probs, lambdaY), 0.0) / eta
    return SignedSeq(np.diff(u))


@dataclass(frozen=True)
class EvolveConfig:
    """Integration settings for :func:`evolve_heat`.

    ``eta_grid`` is strictly decreasing inside (0, 1]; integration always
    starts from eta = 1.  ``support_bound`` defaults to the input support
    plus the geometric truncation point of lambda_Y at ``tail_epsilon``.
    """

    eta_grid: tuple[float, ...]
    step: float = 1e-3
    tail_epsilon: float = 1e-14
    support_bound: int | None = None
    clamp: float = 1e-12
    integrator: str = field(default="rk4_in_log_eta")

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eta_grid)
        if not grid:
            raise DomainError("eta grid is empty")
        if any(not 0 < e <= 1 for e in grid):
            raise DomainError("eta grid must lie in (0, 1]")
        if any(b >= a for a, b in zip(grid, grid[1:])):
            raise DomainError("eta grid must be strictly decreasing")
        if not self.step > 0:
            raise ValidationError("step must be positive")
        if not self.clamp >= 0:
            raise ValidationError("clamp must be non-negative")
        if self.integrator != "rk4_in_log_eta":
            raise ValidationError(f"unknown integrator {self.integrator!r}")
        object.__setattr__(self, "eta_grid", grid)


def evolve_heat(X: Pmf, lambdaY: float, cfg: EvolveConfig) -> list[tuple[float, Pmf]]:
    """Integrate the heat equation from eta = 1 (where Z = X) down the grid.

    In tau = -log(eta) the equation becomes dp/dtau = -Delta(n (p[n-1]
    lambda_Y - p[n] (1 + lambda_Y))), which has no eta left in it, and is
    stepped with classical RK4.  Mass flowing past the top state is dropped
    and each step renormalises.
    """
    if lambdaY < 0:
        raise ValidationError("lambdaY must be non-negative")
    S = cfg.support_bound
    if S is None:
        S = X.support_bound + geometric_pmf(lambdaY, cfg.tail_epsilon).support_bound
    if S < X.support_bound:
        raise ValidationError("support_bound is below the input support")
    p = X.padded(S + 1)
    truncated = X.truncated or lambdaY > 0

    def F(q):
        return -np.diff(_flux(q, lambdaY))

    # RK4 on this linear system is stable for h * ||A|| below ~2.78; Gershgorin bound on ||A||
    gersh = 2.0 * (S + 1) * (1.0 + 2.0 * lambdaY)
    h_max = min(cfg.step, 2.0 / gersh)
    tol = max(X.tail_tolerance, DEFAULT_TOLERANCE)

    traj = []
    tau = 0.0
    last_eta = 1.0
    for eta in cfg.eta_grid:
        target = -math.log(eta)
        nsteps = math.ceil((target - tau) / h_max - 1e-9) if target > tau else 0
        if nsteps:
            h = (target - tau) / nsteps
            for _ in range(nsteps):
                k1 = F(p)
                k2 = F(p + 0.5 * h * k1)
                k3 = F(p + 0.5 * h * k2)
                k4 = F(p + h * k3)
                p = p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                if not np.all(np.isfinite(p)) or np.any(p < -cfg.clamp) or np.any(p > 1 + cfg.clamp):
                    raise StepFailure(
                        f"masses left [-{cfg.clamp:g}, 1+{cfg.clamp:g}] between eta={last_eta} and eta={eta}",
                        last_good_eta=last_eta,
                    )
                p = np.where(p < 0, 0.0, p)
                p = p / math.fsum(p)
            tau = target
        traj.append((eta, Pmf(p.copy(), tol, truncated)))
        last_eta = eta
    return traj


@dataclass(frozen=True, eq=False)
class TiltedPair:
    """p+[n] = (n+1) p[n+1] / lambda and p-[n] = (n+1) p[n] / (1 + lambda)."""

    plus: Pmf
    minus: Pmf


def _mean_or_raise(p: Pmf) -> float:
    lam = mean(p)
    if not lam > 0:
        raise ZeroMean("the distribution has zero mean")
    return lam


def tilted_pair(p: Pmf) -> TiltedPair:
    """Size-biased tilts of ``p``.

    For a truncated law both tilts are cut to the states where p+ is known
    (one below the trustworthy prefix), so the stored top state does not
    masquerade as a support mismatch.
    """
    lam = _mean_or_raise(p)
    if p.truncated:
        L = p.effective_length()
        probs = p.probs[:L]
        k = np.arange(1, L)
        plus = k * probs[1:] / lam
        minus = k * probs[:-1] / (1 + lam)
    else:
        probs = p.probs
        plus = np.arange(1, probs.size) * probs[1:] / lam
        minus = np.arange(1, probs.size + 1) * probs / (1 + lam)
        if plus.size == 0:
            plus = np.zeros(1)
    out = []
    for v in (plus, minus):
        tol = max(p.tail_tolerance, DEFAULT_TOLERANCE, 2 * abs(math.fsum(v) - 1))
        out.append(Pmf(v, tol, p.truncated))
    return TiltedPair(*out)


def _weighted_kl_sum(cplus: float, dplus: float, cminus: float, dminus: float) -> float:
    total = 0.0
    for c, d in ((cplus, dplus), (cminus, dminus)):
        if c == 0:
            continue
        total += c * d
    return total


def debruijn_rhs(p: Pmf, eta: float, lambdaY: float) -> float:
    """lambda_Y (1+lam)/eta D(p- || p+) + (1+lambda_Y) lam/eta D(p+ || p-), lam = mean(p).

    ``p`` is the law of Z_eta; the value is the eta-derivative of
    D(Z_eta || G_eta).  Finite supports give ``inf``.
    """
    eta = check_eta(eta)
    if eta == 0:
        raise EtaZero("the de Bruijn identity is singular at eta = 0")
    lam = _mean_or_raise(p)
    tp = tilted_pair(p)
    d_mp = relative_entropy(tp.minus, tp.plus)
    d_pm = relative_entropy(tp.plus, tp.minus)
    return _weighted_kl_sum(lambdaY * (1 + lam) / eta, d_mp, (1 + lambdaY) * lam / eta, d_pm)


def divergence_along_flow(X: Pmf, Y: Pmf, lambdaY: float, eta: float, cfg: BeamsplitConfig | None) -> float:
    """D(Z_eta || G_eta) with G_eta the geometric of matching mean."""
    Z = beamsplit_add(X, Y, eta, cfg)
    G = geometric_pmf(eta * mean(X) + (1 - eta) * lambdaY)
    return relative_entropy(Z, G)


def debruijn_lhs_numeric(X: Pmf, lambdaY: float, eta: float, h: float = 1e-4,
                         cfg: BeamsplitConfig | None = None, tail_epsilon: float = 1e-14) -> float:
    """Central difference in eta of D(Z_eta || G_eta), Z from :func:`beamsplit_add`."""
    eta = check_eta(eta)
    if not (0 < eta - h and eta + h <= 1):
        raise DomainError(f"[eta - h, eta + h] = [{eta - h}, {eta + h}] must lie in (0, 1]")
    Y = geometric_pmf(lambdaY, tail_epsilon)
    hi = divergence_along_flow(X, Y, lambdaY, eta + h, cfg)
    lo = divergence_along_flow(X, Y, lambdaY, eta - h, cfg)
    return (hi - lo) / (2 * h)


@dataclass(frozen=True, eq=False)
class ScoreProfile:
    """Geometric-referenced score.

    ``rho[n]`` is NaN where p[n] = 0 (undefined); ``weighted[n]`` is the
    always-finite product p[n] rho[n] = n p[n-1] lam/(1+lam) - n p[n],
    one entry longer than the support.
    """

    rho: np.ndarray
    weighted: np.ndarray
    j_plus: float
    j_minus: float


def score(p: Pmf) -> ScoreProfile:
    """rho[n] = n p[n-1] lam / (p[n] (1+lam)) - n with rho[0] = 0, and the Fisher sums J+, J-.

    rho[n] is left undefined (NaN) where p[n] = 0.  Such a state adds
    nothing when p[n-1] = 0 too, but when p[n-1] > 0 its J+ term
    p[n] rho[n]^2 / n behaves like p[n-1]^2 / p[n] and J+ is infinite.  The
    stored top of a truncated law is not such a state.  A term with
    p[n] > 0 but p[n-1] = 0 has rho[n] = -n and makes J- infinite.
    """
    lam = _mean_or_raise(p)
    probs = p.probs[: p.effective_length()]
    L = probs.size
    n = np.arange(L + 1)
    prev = np.concatenate(([0.0], probs))
    cur = np.concatenate((probs, [0.0]))
    weighted = n * prev * lam / (1 + lam) - n * cur
    rho = np.full(L + 1, np.nan)
    pos = cur > 0
    rho[pos] = weighted[pos] / cur[pos]
    rho[0] = 0.0

    j_plus = 0.0
    j_minus = 0.0
    k = np.flatnonzero(pos[1:]) + 1
    if k.size:
        ratio = prev[k] * lam / (cur[k] * (1 + lam))
        plus_terms = cur[k] * k * (ratio - 1) ** 2
        j_plus = math.fsum(plus_terms)
        if np.any(ratio == 0):
            j_minus = math.inf
        else:
            j_minus = math.fsum(plus_terms / ratio)
    edge = (cur == 0) & (prev > 0)
    if p.truncated:
        edge[L] = False
    if np.any(edge):
        j_plus = math.inf
    return ScoreProfile(rho, weighted, float(j_plus), float(j_minus))


@dataclass(frozen=True)
class LogSobolevReport:
    lhs: float
    rhs_entropic: float
    rhs_quadratic: float
    holds_entropic: bool
    holds_quadratic: bool


def check_log_sobolev(p: Pmf, tol: float = 1e-10) -> LogSobolevReport:
    """Compare D(p || G) with lam(1+lam)[D(p-||p+) + D(p+||p-)] and (1+lam)(J+ + J-).

    G is the geometric with the mean of ``p``, taken with its analytic tail.
    """
    lam = _mean_or_raise(p)
    lhs = relative_entropy(p, geometric_pmf(lam))
    tp = tilted_pair(p)
    rhs_e = lam * (1 + lam) * (relative_entropy(tp.minus, tp.plus) + relative_entropy(tp.plus, tp.minus))
    sc = score(p)
    rhs_q = (1 + lam) * (sc.j_plus + sc.j_minus)
    return LogSobolevReport(lhs, rhs_e, rhs_q, lhs <= rhs_e + tol, lhs <= rhs_q + tol)


def check_entropy_concavity(X: Pmf, Y: Pmf, eta: float, tol: float = 1e-9,
                            cfg: BeamsplitConfig | None = None) -> tuple[float, float, bool]:
    """H(X [+]_eta Y) against eta H(X) + (1-eta) H(Y)."""
    Z = beamsplit_add(X, Y, eta, cfg)
    lhs = entropy(Z)
    rhs = eta * entropy(X) + (1 - eta) * entropy(Y)
    return lhs, rhs, lhs >= rhs - tol
