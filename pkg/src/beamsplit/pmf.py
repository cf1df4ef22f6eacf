"""Probability mass functions on the non-negative integers.

A :class:`Pmf` stores masses ``probs[0..N]``.  Distributions with infinite
support (geometrics and their mixtures) are stored truncated; they keep
their analytic form in ``geometric_components`` so that relative entropies
against them never see an artificial zero in the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr, logsumexp, xlogy

from .errors import MassDeficit, NegativeMass, ValidationError

DEFAULT_TOLERANCE = 1e-12

__all__ = [
    "DEFAULT_TOLERANCE",
    "GeometricSpec",
    "Pmf",
    "entropy",
    "geometric_logpmf",
    "geometric_mixture_pmf",
    "geometric_pmf",
    "make_pmf",
    "mean",
    "point_mass",
    "relative_entropy",
    "total_variation",
]


@dataclass(frozen=True, eq=False)
class Pmf:
    """Validated probability mass function on ``0..N``.

    ``truncated`` marks a stored prefix of an infinite-support law: the
    missing tail mass is at most ``tail_tolerance`` but is not zero.
    ``geometric_components`` holds ``((weight, mean), ...)`` when the law is a
    finite mixture of geometrics, and is used to extend ``probs`` analytically.
    """

    probs: np.ndarray
    tail_tolerance: float = DEFAULT_TOLERANCE
    truncated: bool = False
    geometric_components: tuple[tuple[float, float], ...] | None = field(default=None)

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.size == 0:
            raise ValidationError("a pmf needs at least one entry")
        if not np.all(np.isfinite(probs)):
            raise ValidationError("pmf entries must be finite")
        if np.any(probs < 0):
            k = int(np.argmin(probs))
            raise NegativeMass(f"negative mass {probs[k]:.3e} at n={k}")
        tol = float(self.tail_tolerance)
        if not tol >= 0:
            raise ValidationError("tail_tolerance must be non-negative")
        total = math.fsum(probs)
        # slack for the rounding already present in the stored entries
        if abs(total - 1.0) > tol + 4 * probs.size * np.finfo(float).eps:
            raise MassDeficit(f"total mass {total!r} differs from 1 by more than {tol:g}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "tail_tolerance", tol)

    @property
    def support_bound(self) -> int:
        return self.probs.size - 1

    def __len__(self):
        return self.probs.size

    def __repr__(self):
        head = np.array2string(self.probs[:6], precision=4, separator=", ")
        more = ", ..." if self.probs.size > 6 else ""
        return f"Pmf(N={self.support_bound}, probs={head[:-1]}{more}], truncated={self.truncated})"

    def padded(self, length: int) -> np.ndarray:
        """Masses on ``0..length-1``; stored zeros beyond the support."""
        out = np.zeros(max(length, 0))
        k = min(length, self.probs.size)
        out[:k] = self.probs[:k]
        return out

    def logpmf(self, n) -> np.ndarray:
        """Log-mass at integer(s) ``n``, using the analytic form when there is one."""
        n = np.asarray(n)
        if self.geometric_components is not None:
            return geometric_logpmf(n, self.geometric_components)
        with np.errstate(divide="ignore"):
            inside = n < self.probs.size
            vals = np.where(inside, self.probs[np.clip(n, 0, self.probs.size - 1)], 0.0)
            return np.log(vals)

    def effective_length(self) -> int:
        """Length of the trustworthy prefix.

        For truncated laws this stops before the first stored zero: entries
        past it are round-off noise in the far tail, not structural zeros.
        """
        if not self.truncated:
            return self.probs.size
        zeros = np.flatnonzero(self.probs <= 0)
        return int(zeros[0]) if zeros.size else self.probs.size


def make_pmf(values, tail_tolerance: float = DEFAULT_TOLERANCE, *, truncated: bool = False) -> Pmf:
    """Build a :class:`Pmf`, raising NegativeMass or MassDeficit on bad input."""
    return Pmf(np.asarray(values, dtype=float), tail_tolerance, truncated)


def point_mass(k: int) -> Pmf:
    probs = np.zeros(k + 1)
    probs[k] = 1.0
    return Pmf(probs)


def geometric_logpmf(n, components) -> np.ndarray:
    """log of sum_i w_i * lam_i**n / (1+lam_i)**(n+1)."""
    n = np.asarray(n, dtype=float)
    terms = []
    weights = []
    for w, lam in components:
        terms.append(xlogy(n, lam) - (n + 1) * math.log1p(lam))
        weights.append(w)
    if len(terms) == 1:
        return terms[0] + math.log(weights[0])
    b = np.array(weights).reshape((-1,) + (1,) * n.ndim)
    return logsumexp(np.stack(terms), axis=0, b=b)


def _mixture_tail(components, N: int) -> float:
    # mass strictly beyond N
    return math.fsum(w * (lam / (1 + lam)) ** (N + 1) for w, lam in components)


def _truncation_point(components, eps: float) -> int:
    lam_max = max(lam for _, lam in components)
    if lam_max == 0:
        return 0
    r = lam_max / (1 + lam_max)
    hi = max(0, math.ceil(math.log(eps) / math.log(r)) - 1)
    while _mixture_tail(components, hi) > eps:
        hi += 1
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if _mixture_tail(components, mid) <= eps:
            hi = mid
        else:
            lo = mid + 1
    return lo


def geometric_mixture_pmf(weights, means, truncation_epsilon: float = DEFAULT_TOLERANCE) -> Pmf:
    """Mixture of geometrics truncated at the smallest N with tail mass <= epsilon."""
    weights = [float(w) for w in weights]
    means = [float(m) for m in means]
    if len(weights) != len(means) or not weights:
        raise ValidationError("weights and means must be non-empty and of equal length")
    if any(m < 0 for m in means):
        raise ValidationError("geometric means must be non-negative")
    if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1) > 1e-12:
        raise ValidationError("mixture weights must be non-negative and sum to 1")
    if not truncation_epsilon > 0:
        raise ValidationError("truncation_epsilon must be positive")
    components = tuple((w, m) for w, m in zip(weights, means) if w > 0)
    N = _truncation_point(components, truncation_epsilon)
    probs = np.exp(geometric_logpmf(np.arange(N + 1), components))
    infinite = any(m > 0 for _, m in components)
    return Pmf(probs, float(truncation_epsilon), infinite, components)


def geometric_pmf(mean: float, truncation_epsilon: float = DEFAULT_TOLERANCE) -> Pmf:
    """Geom(mean): probs[n] = mean**n / (1+mean)**(n+1), truncated to tail <= epsilon."""
    return geometric_mixture_pmf([1.0], [mean], truncation_epsilon)


@dataclass(frozen=True)
class GeometricSpec:
    mean: float
    truncation_epsilon: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.mean >= 0:
            raise ValidationError("geometric mean must be non-negative")
        if not self.truncation_epsilon > 0:
            raise ValidationError("truncation_epsilon must be positive")

    def pmf(self) -> Pmf:
        return geometric_pmf(self.mean, self.truncation_epsilon)


def mean(p: Pmf) -> float:
    return float(np.dot(np.arange(p.probs.size), p.probs))


def entropy(p: Pmf) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    return float(math.fsum(entr(p.probs)))


def relative_entropy(p: Pmf, q: Pmf) -> float:
    """D(p || q) in nats; ``inf`` when p charges a state q does not."""
    n = np.arange(p.probs.size)
    logq = q.logpmf(n)
    mask = p.probs > 0
    if np.any(np.isneginf(logq[mask])):
        return math.inf
    pm = p.probs[mask]
    return float(math.fsum(pm * (np.log(pm) - logq[mask])))


def total_variation(p: Pmf, q: Pmf) -> float:
    length = max(p.probs.size, q.probs.size)
    return 0.5 * float(np.sum(np.abs(p.padded(length) - q.padded(length))))
