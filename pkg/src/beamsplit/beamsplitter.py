"""Beamsplitter addition Z = X [+]_eta Y.

The exponential generating functions multiply with scaled arguments,

    Htilde_Z(t) = Htilde_X(eta t) * Htilde_Y((1 - eta) t),

so for finite supports Htilde_Z is a polynomial of degree N_X + N_Y and a
Gauss-Laguerre rule of order K = N_X + N_Y + ceil(m_max/2) + 2 recovers
p_Z exactly up to round-off.  The ``exact_moments`` backend multiplies the
binomial-moment series instead and inverts in extended precision; it is
slower and kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .laguerre import gauss_laguerre_rule, laguerre_functions
from .pmf import Pmf, mean
from .transforms import (
    DEFAULT_PRECISION_BITS,
    BinomialMomentSeq,
    _is_mp,
    binomial_moments,
    invert_scaled,
    mp_context,
    pmf_from_binomial_moments,
)

__all__ = [
    "BACKENDS",
    "BeamsplitConfig",
    "beamsplit_add",
    "beamsplit_moments",
    "channel_quadrature_order",
    "check_eta",
    "exact_precision_bits",
]

BACKENDS = ("quadrature", "exact_moments")


def check_eta(eta) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta out of range: {eta} is not in [0, 1]")
    return eta


@dataclass(frozen=True)
class BeamsplitConfig:
    backend: str = "quadrature"
    m_max: int | None = None
    precision_bits: int | None = None
    quadrature_order_override: int | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValidationError(f"unknown backend {self.backend!r}; choose from {BACKENDS}")
        if self.precision_bits is not None and self.precision_bits < 53:
            raise ValidationError("precision_bits must be at least 53")
        if self.quadrature_order_override is not None and self.quadrature_order_override < 1:
            raise ValidationError("quadrature_order_override must be >= 1")


def beamsplit_moments(bX: BinomialMomentSeq, bY: BinomialMomentSeq, eta: float) -> BinomialMomentSeq:
    """c[k] = sum_m C(k, m) eta^m (1-eta)^(k-m) bX[m] bY[k-m]."""
    eta = check_eta(eta)
    if bX.order != bY.order:
        raise ValidationError("moment sequences must have equal length")
    M = bX.order
    complete = bX.complete and bY.complete
    if _is_mp(bX.b) or _is_mp(bY.b):
        bits = max(bX.precision_bits or 53, bY.precision_bits or 53)
        ctx = mp_context(bits)
        x = [ctx.mpf(v) for v in bX.b]
        y = [ctx.mpf(v) for v in bY.b]
        e = ctx.mpf(eta)
        ep = [e ** m for m in range(M + 1)]
        fp = [(1 - e) ** m for m in range(M + 1)]
        c = np.empty(M + 1, dtype=object)
        for k in range(M + 1):
            c[k] = ctx.fsum(
                ctx.mpf(math.comb(k, m)) * ep[m] * fp[k - m] * x[m] * y[k - m]
                for m in range(k + 1)
                if x[m] != 0 and y[k - m] != 0
            )
        return BinomialMomentSeq(c, None, complete, bits)
    x = np.asarray(bX.b)
    y = np.asarray(bY.b)
    ep = eta ** np.arange(M + 1)
    fp = (1 - eta) ** np.arange(M + 1)
    c = np.empty(M + 1)
    for k in range(M + 1):
        m = np.arange(k + 1)
        comb = np.array([math.comb(k, j) for j in m], dtype=float)
        c[k] = math.fsum(comb * ep[m] * fp[k - m] * x[m] * y[k - m])
    return BinomialMomentSeq(c, None, complete)


def exact_precision_bits(M: int, lam: float) -> int:
    """Working precision for moment inversion: M log2(2(1+lam)) + 64 guard bits, at least 256."""
    return max(DEFAULT_PRECISION_BITS, math.ceil(M * math.log2(2 * (1 + lam))) + 64)


def beamsplit_add(X: Pmf, Y: Pmf, eta: float, cfg: BeamsplitConfig | None = None) -> Pmf:
    """Distribution of X [+]_eta Y on 0..m_max (default m_max = N_X + N_Y).

    The result is truncated whenever either input is, and its
    ``tail_tolerance`` adds up the inputs' tolerances and the inversion's
    round-off scale.
    """
    cfg = cfg or BeamsplitConfig()
    eta = check_eta(eta)
    NX, NY = X.support_bound, Y.support_bound
    m_max = NX + NY if cfg.m_max is None else int(cfg.m_max)
    if m_max < NX + NY:
        raise ValidationError(f"m_max={m_max} is below the output support bound {NX + NY}")
    truncated = X.truncated or Y.truncated
    tol = X.tail_tolerance + Y.tail_tolerance

    if eta in (0.0, 1.0):
        src = X if eta == 1.0 else Y
        return Pmf(src.padded(m_max + 1), max(tol, src.tail_tolerance), truncated)

    if cfg.backend == "exact_moments":
        bits = cfg.precision_bits or exact_precision_bits(m_max, max(mean(X), mean(Y)))
        bX = binomial_moments(X, m_max, precision_bits=bits)
        bY = binomial_moments(Y, m_max, precision_bits=bits)
        z = pmf_from_binomial_moments(beamsplit_moments(bX, bY, eta), bits, tol)
        return Pmf(z.probs, tol, truncated)

    K = cfg.quadrature_order_override or channel_quadrature_order(NX, NY, m_max)
    rule = gauss_laguerre_rule(K)
    s = rule.nodes
    g = (X.probs @ laguerre_functions(NX, eta * s)) * (Y.probs @ laguerre_functions(NY, (1 - eta) * s))
    z, roundoff = invert_scaled(g, m_max, rule, tol + roundoff_guard(K), truncated)
    return Pmf(z.probs, tol + roundoff, truncated)


def channel_quadrature_order(NX: int, NY: int, m_max: int) -> int:
    """Gauss-Laguerre order that integrates the degree NX + NY + m_max integrand exactly, plus one spare node."""
    return NX + NY + math.ceil(m_max / 2) + 2


def roundoff_guard(K: int) -> float:
    # mass-check slack for the inversion sum itself
    return 10 * K * np.finfo(float).eps
