"""Continuous counterpart X_c of a distribution on the non-negative integers.

X_c is circularly symmetric in the complex plane with density
sum_n p[n] exp(-|r|^2) |r|^(2n) / (n! pi).  Everything here works with the
radial variable u = |r|^2, whose density

    f(u) = sum_n p[n] exp(-u) u^n / n!

is a mixture of Gamma(n+1, 1) laws.  Relative entropies over the plane equal
the 1-D integrals in u because the 1/pi and angular factors cancel in the
log-ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaincc, gammaln, xlogy

from .errors import NonIntegrable
from .pmf import Pmf, relative_entropy

__all__ = [
    "LogSumReport",
    "RadialDensity",
    "check_log_sum",
    "continuous_relative_entropy",
    "radial_density",
]

TAIL_MASS = 1e-13
ROUNDOFF_ACCEPT = 1e-11


@dataclass(frozen=True, eq=False)
class RadialDensity:
    """Density of u = |X_c|^2 built from the pmf ``base``."""

    base: Pmf

    def __post_init__(self):
        n = np.flatnonzero(self.base.probs > 0)
        object.__setattr__(self, "_n", n.astype(float))
        object.__setattr__(self, "_logw", np.log(self.base.probs[n]) - gammaln(n + 1.0))

    def logpdf(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        logterms = xlogy(self._n[None, :], u[:, None]) - u[:, None] + self._logw[None, :]
        top = logterms.max(axis=1)
        # rows where every term is -inf (u = 0 without an n = 0 term) stay -inf
        shift = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(divide="ignore"):
            return shift + np.log(np.exp(logterms - shift[:, None]).sum(axis=1))

    def __call__(self, u):
        out = np.exp(self.logpdf(u))
        return out[0] if np.ndim(u) == 0 else out

    def tail_mass(self, u: float, power: int = 0) -> float:
        """Tail of u^power f(u) beyond ``u``: sum_n p[n] (n+power)!/n! Q(n+power+1, u)."""
        n = self._n
        coef = np.exp(self._logw + gammaln(n + 1.0 + power))
        return float(np.dot(coef, gammaincc(n + 1.0 + power, u)))

    def upper_limit(self, tail: float = TAIL_MASS, power: int = 0) -> float:
        """Smallest u (to 1e-3 relative) whose weighted tail is below ``tail``; doubling then bisection."""
        hi = 1.0
        while self.tail_mass(hi, power) >= tail:
            hi *= 2.0
        lo = hi / 2 if hi > 1 else 0.0
        while hi - lo > 1e-3 * hi:
            mid = 0.5 * (lo + hi)
            if self.tail_mass(mid, power) < tail:
                hi = mid
            else:
                lo = mid
        return hi

    def integrate(self, g, U: float | None = None) -> float:
        """Integral of g(u) f(u) over [0, U] on doubling panels."""
        U = self.upper_limit() if U is None else U
        return _panel_quad(lambda u: g(u) * self(u), U)

    def moment(self, m: int) -> float:
        """E[U^m] by quadrature, cut where the neglected part is below 1e-13 relative."""
        scale = self.tail_mass(0.0, m)
        return self.integrate(lambda u: u ** m, self.upper_limit(TAIL_MASS * scale, m))


def radial_density(p: Pmf) -> RadialDensity:
    return RadialDensity(p)


def _panels(U: float) -> list[tuple[float, float]]:
    edges = [0.0, 1.0]
    while edges[-1] < U:
        edges.append(min(2 * edges[-1], U))
    return list(zip(edges[:-1], edges[1:]))


def _panel_quad(fn, U: float, epsabs: float = 1e-15, epsrel: float = 1e-12) -> float:
    total = []
    for a, b in _panels(U):
        val, abserr, _, *flag = integrate.quad(fn, a, b, epsabs=epsabs, epsrel=epsrel, limit=200, full_output=1)
        # QUADPACK flags round-off as soon as epsabs sits at the noise level;
        # a flag is only fatal when the error estimate is not small as well
        msg = flag[0] if flag else ""
        if msg and abserr > ROUNDOFF_ACCEPT:
            raise NonIntegrable(f"quadrature on [{a:g}, {b:g}] did not converge (error {abserr:.1e}): {msg}")
        total.append(val)
    return math.fsum(total)


def continuous_relative_entropy(fX: RadialDensity, fY: RadialDensity, tail: float = TAIL_MASS) -> float:
    """D(X_c || Y_c) = int_0^inf fX log(fX / fY) du.

    The log-ratio is formed from log-densities so it stays finite where
    either density underflows.  Adaptive Gauss-Kronrod panels never touch
    u = 0, where the integrand may carry a log singularity.
    """
    U = max(fX.upper_limit(tail), fY.upper_limit(tail))

    def integrand(u):
        lx = fX.logpdf(u)[0]
        if lx == -math.inf:
            return 0.0
        return math.exp(lx) * (lx - fY.logpdf(u)[0])

    return _panel_quad(integrand, U)


@dataclass(frozen=True)
class LogSumReport:
    continuous: float
    discrete: float
    holds: bool


def check_log_sum(X: Pmf, Y: Pmf, tol: float = 1e-8) -> LogSumReport:
    """D(X_c || Y_c) <= D(X || Y); an infinite discrete side holds trivially."""
    disc = relative_entropy(X, Y)
    cont = continuous_relative_entropy(radial_density(X), radial_density(Y))
    return LogSumReport(cont, disc, cont <= disc + tol)
