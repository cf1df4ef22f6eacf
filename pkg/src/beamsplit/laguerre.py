"""Laguerre polynomials and Gauss-Laguerre quadrature.

Everything is driven by the three-term recurrence

    (n+1) L_{n+1}(x) = (2n+1-x) L_n(x) - n L_{n-1}(x).

For large arguments the polynomials themselves overflow, so the quadrature
and the inversion code work with the Laguerre functions
``exp(-x/2) L_n(x)``, which are bounded by one on ``x >= 0``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceFailure, ValidationError

__all__ = [
    "QuadratureRule",
    "gauss_laguerre_rule",
    "laguerre_eval",
    "laguerre_functions",
    "laguerre_table",
]

_RESCALE_AT = 1e150


def laguerre_eval(n: int, x: float) -> float:
    """L_n(x) by upward recurrence."""
    if n < 0:
        raise ValidationError("Laguerre degree must be non-negative")
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def laguerre_table(nmax: int, x) -> np.ndarray:
    """L_0..L_nmax at every point of ``x``; shape ``(nmax + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 - x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def laguerre_functions(nmax: int, x) -> np.ndarray:
    """exp(-x/2) L_n(x) for n = 0..nmax, shape ``(nmax + 1, len(x))``.

    The recurrence runs on rescaled values with a per-point log scale so
    neither the polynomial nor the exponential overflows or underflows
    prematurely.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((nmax + 1, x.size))
    logscale = -0.5 * x
    prev = np.zeros_like(x)
    cur = np.ones_like(x)

    def emit(v):
        with np.errstate(divide="ignore"):
            return np.sign(v) * np.exp(np.log(np.abs(v)) + logscale)

    out[0] = emit(cur)
    for k in range(nmax):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        big = np.maximum(np.abs(cur), np.abs(prev)) > _RESCALE_AT
        if np.any(big):
            s = np.maximum(np.abs(cur[big]), np.abs(prev[big]))
            cur[big] /= s
            prev[big] /= s
            logscale[big] += np.log(s)
        out[k + 1] = emit(cur)
    return out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Laguerre rule for the weight exp(-s) on [0, inf).

    ``scaled_weights`` are ``weights * exp(nodes)``; they stay representable
    when the plain weights underflow.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        """Approximate the integral of exp(-s) f(s) over [0, inf)."""
        return float(np.dot(self.weights, f(self.nodes)))


def _newton_refine(K: int, x: np.ndarray, maxiter: int = 8) -> np.ndarray:
    for _ in range(maxiter):
        ell = laguerre_functions(K, x)
        # L_K / L_K' with L_K'(x) = K (L_K - L_{K-1}) / x; the exp(-x/2) factors cancel
        step = x * ell[K] / (K * (ell[K] - ell[K - 1]))
        x = x - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * x):
            return x
    if not np.all(np.abs(step) <= 1e-10 * x):
        raise ConvergenceFailure(f"Gauss-Laguerre nodes for K={K} did not converge")
    return x


@functools.lru_cache(maxsize=64)
def gauss_laguerre_rule(K: int) -> QuadratureRule:
    """K-point Gauss-Laguerre rule.

    Nodes come from the eigenvalues of the Jacobi matrix (Golub-Welsch) and
    are polished by Newton steps on L_K.  Weights use the Christoffel form
    ``1 / sum_{n<K} L_n(x_k)**2``, evaluated with Laguerre functions.
    """
    K = int(K)
    if K < 1:
        raise ValidationError("quadrature order must be >= 1")
    diag = 2.0 * np.arange(K) + 1.0
    off = np.arange(1.0, K)
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
        raise ConvergenceFailure(f"Jacobi eigenvalues for K={K} are not positive and distinct")
    nodes = _newton_refine(K, nodes)
    ell = laguerre_functions(K - 1, nodes)
    scaled = 1.0 / np.sum(ell * ell, axis=0)
    weights = scaled * np.exp(-nodes)
    for arr in (nodes, weights, scaled):
        arr.setflags(write=False)
    return QuadratureRule(nodes, weights, scaled)
