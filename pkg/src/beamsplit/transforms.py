"""Moment sequences, generating functions and their inversion.

Two coefficient sequences describe a distribution X on the non-negative
integers:

* binomial moments ``b[m] = E[(X)_m] / m! = sum_n C(n, m) p[n]``, the
  coefficients of ``H(t) = sum b[m] t^m`` and
  ``Htilde(t) = sum b[m] t^m / m!``;
* continuous moments ``d[k] = sum_j C(k, j) b[j]``, the normalised even
  moments ``E|X_c|^(2k) / k!`` of the continuous counterpart, coefficients of
  ``phi`` and ``phitilde``.

Htilde has the Laguerre representation ``sum_n p[n] L_n(-t)`` and is
inverted by ``p[m] = int_0^inf exp(-s) Htilde(-s) L_m(s) ds``, which a
Gauss-Laguerre rule evaluates exactly when p has finite support.

Sequences may hold floats or, when built with ``precision_bits``, mpmath
numbers; operations on the latter run in a private mpmath context of that
precision, so nothing here touches mpmath's global state.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import (
    Divergent,
    DomainError,
    MassDeficit,
    MomentOverflow,
    NotAPmf,
    PrecisionExhausted,
    ValidationError,
)
from .laguerre import QuadratureRule, gauss_laguerre_rule, laguerre_functions, laguerre_table
from .pmf import DEFAULT_TOLERANCE, Pmf

__all__ = [
    "BinomialMomentSeq",
    "ContinuousMomentSeq",
    "binomial_moments",
    "continuous_moments",
    "eval_H",
    "eval_H_tilde",
    "eval_phi",
    "eval_phi_tilde",
    "htilde_evaluator",
    "invert_scaled",
    "laguerre_invert",
    "pmf_from_binomial_moments",
    "quadrature_order",
]

DEFAULT_PRECISION_BITS = 256
_SERIES_BITS = 192
_MAX_SERIES_TERMS = 20000


def mp_context(bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = int(bits)
    return ctx


def _is_mp(values) -> bool:
    return isinstance(values, np.ndarray) and values.dtype == object


@dataclass(frozen=True, eq=False)
class BinomialMomentSeq:
    """b[m] = E[(X)_m]/m! for m = 0..M.

    ``complete`` means the source has support within 0..M, so every later
    binomial moment is zero and H, Htilde are polynomials.
    """

    b: np.ndarray
    source_mean: float | None = None
    complete: bool = True
    precision_bits: int | None = None

    def __post_init__(self):
        b = self.b
        if not _is_mp(b):
            b = np.array(b, dtype=float).reshape(-1)
            b.setflags(write=False)
            object.__setattr__(self, "b", b)
        if b.size == 0:
            raise ValidationError("moment sequence is empty")
        if abs(float(b[0]) - 1.0) > 1e-9:
            raise MassDeficit(f"b[0] must be 1 (total mass), got {float(b[0])!r}")
        if any(float(v) < 0 for v in b):
            raise ValidationError("binomial moments of a non-negative integer variable are >= 0")
        if self.source_mean is None:
            object.__setattr__(self, "source_mean", float(b[1]) if b.size > 1 else 0.0)

    @property
    def order(self) -> int:
        return self.b.size - 1

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.b])


@dataclass(frozen=True, eq=False)
class ContinuousMomentSeq:
    """d[k] = E|X_c|^(2k)/k! for k = 0..M, tied to the binomial moments it came from."""

    d: np.ndarray
    source: BinomialMomentSeq

    @property
    def order(self) -> int:
        return self.d.size - 1

    def as_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.d])


def binomial_moments(p: Pmf, M: int | None = None, precision_bits: int | None = None) -> BinomialMomentSeq:
    """Binomial moments b[0..M] of ``p`` (default M = support bound).

    In double precision the coefficients C(n, m) p[n] are carried upward in
    m multiplicatively; with ``precision_bits`` the sums are formed exactly
    from the stored doubles in extended precision.
    """
    N = p.support_bound
    M = N if M is None else int(M)
    if M < 0:
        raise ValidationError("M must be non-negative")
    probs = p.probs
    if precision_bits is not None:
        ctx = mp_context(precision_bits)
        pm = [ctx.mpf(float(v)) for v in probs]
        b = np.empty(M + 1, dtype=object)
        for m in range(M + 1):
            if m > N:
                b[m] = ctx.zero
                continue
            b[m] = ctx.fsum(ctx.mpf(math.comb(n, m)) * pm[n] for n in range(m, N + 1) if probs[n] != 0)
        return BinomialMomentSeq(b, float(b[1]) if M >= 1 else 0.0, M >= N, int(precision_bits))

    n = np.arange(N + 1, dtype=float)
    coef = probs.copy()
    b = np.zeros(M + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(min(M, N) + 1):
            if m > 0:
                coef = coef * (n - m + 1) / m
                coef[:m] = 0.0
            b[m] = math.fsum(coef[m:])
    if not np.all(np.isfinite(b)):
        raise MomentOverflow("binomial moments overflow double precision; use precision_bits")
    return BinomialMomentSeq(b, float(b[1]) if M >= 1 else 0.0, M >= N)


def pmf_from_binomial_moments(
    seq: BinomialMomentSeq,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    tail_tolerance: float = DEFAULT_TOLERANCE,
) -> Pmf:
    """Invert p[n] = sum_{m>=n} (-1)^(m-n) C(m, n) b[m] in extended precision.

    The alternating sum cancels badly.  The cancellation in bits,
    log2(largest term) - log2(|p[n]|), is tracked per entry, with |p[n]|
    floored at 2**-53 since smaller masses are invisible in double
    precision anyway; when it leaves fewer than 53 significant bits the
    inversion raises PrecisionExhausted instead of returning noise.
    """
    if precision_bits < 53:
        raise ValidationError("precision_bits must be at least 53")
    ctx = mp_context(precision_bits)
    b = [ctx.mpf(v) for v in seq.b]
    M = len(b) - 1
    floor = ctx.ldexp(1, -53)
    out = np.empty(M + 1)
    for n in range(M + 1):
        terms = []
        for m in range(n, M + 1):
            if b[m] == 0:
                continue
            t = ctx.mpf(math.comb(m, n)) * b[m]
            terms.append(-t if (m - n) % 2 else t)
        if not terms:
            out[n] = 0.0
            continue
        val = ctx.fsum(terms)
        biggest = max(abs(t) for t in terms)
        lost = float(ctx.log(biggest, 2) - ctx.log(max(abs(val), floor), 2))
        if lost > precision_bits - 53:
            raise PrecisionExhausted(
                f"moment inversion at n={n} cancels {lost:.0f} bits; "
                f"precision_bits={precision_bits} leaves too few"
            )
        out[n] = float(val)
    return _finish_pmf(out, -tail_tolerance * np.ones_like(out), tail_tolerance, truncated=False)


def _finish_pmf(values: np.ndarray, floor: np.ndarray, tail_tolerance: float, truncated: bool) -> Pmf:
    """Clamp round-off negatives (>= floor) to zero, renormalise, validate."""
    bad = values < floor
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise NotAPmf(f"inversion gave p[{k}] = {values[k]:.3e}, below the round-off floor {floor[k]:.1e}")
    values = np.where(values < 0, 0.0, values)
    total = math.fsum(values)
    if not abs(total - 1.0) <= max(tail_tolerance, 1e-12):
        raise NotAPmf(f"inverted masses sum to {total!r}")
    return Pmf(values / total, tail_tolerance, truncated)


def _check_t(t: float, allow_positive: bool):
    if t > 0 and not allow_positive:
        raise DomainError(f"generating functions are evaluated at t <= 0 (got t={t}); pass allow_positive=True to override")


def eval_H_tilde(source, t: float, *, allow_positive: bool = False, precision_bits: int = _SERIES_BITS) -> float:
    """Exponential generating function Htilde at ``t``.

    A :class:`Pmf` is evaluated through sum_n p[n] L_n(-t); a
    :class:`BinomialMomentSeq` through the power series sum b[m] t^m / m!,
    summed in extended precision because the terms alternate for t < 0.
    At ``t = -|zeta|^2`` this is the normally ordered characteristic
    function of the number-diagonal state.
    """
    t = float(t)
    _check_t(t, allow_positive)
    if isinstance(source, Pmf):
        return float(np.dot(source.probs, laguerre_table(source.support_bound, -t)))
    ctx = mp_context(max(precision_bits, source.precision_bits or 0))
    tt = ctx.mpf(t)
    terms = []
    power = ctx.one
    for m, bm in enumerate(source.b):
        if m:
            power = power * tt / m
        terms.append(ctx.mpf(bm) * power)
    return float(ctx.fsum(terms))


def eval_H(seq: BinomialMomentSeq, t: float, *, allow_positive: bool = False) -> float:
    """Ordinary generating function H(t) = sum b[m] t^m by Horner's rule.

    A complete sequence gives a polynomial and always converges.  A
    truncated one is rejected as Divergent when the term ratio stays at or
    above one over the last quarter of the available terms.
    """
    t = float(t)
    _check_t(t, allow_positive)
    if not seq.complete and seq.order >= 4 and t != 0:
        mags = np.abs(seq.as_float()) * abs(t) ** np.arange(seq.order + 1)
        tail = mags[-max(2, seq.order // 4) - 1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = tail[1:] / tail[:-1]
        if np.all(ratios >= 1):
            raise Divergent(f"H({t}) series terms do not decrease")
    if _is_mp(seq.b):
        ctx = mp_context(max(seq.precision_bits or 0, _SERIES_BITS))
        acc = ctx.zero
        tt = ctx.mpf(t)
        for bm in seq.b[::-1]:
            acc = acc * tt + ctx.mpf(bm)
        return float(acc)
    acc = 0.0
    for bm in seq.b[::-1]:
        acc = acc * t + bm
    return float(acc)


def continuous_moments(seq: BinomialMomentSeq, M: int | None = None) -> ContinuousMomentSeq:
    """d[k] = sum_{j<=k} C(k, j) b[j] for k = 0..M.

    M may exceed the order of ``seq`` only when the sequence is complete.
    """
    M = seq.order if M is None else int(M)
    if M > seq.order and not seq.complete:
        raise ValidationError("cannot extend continuous moments of a truncated moment sequence")
    if _is_mp(seq.b):
        ctx = mp_context(seq.precision_bits or DEFAULT_PRECISION_BITS)
        b = [ctx.mpf(v) for v in seq.b]
        d = np.empty(M + 1, dtype=object)
        for k in range(M + 1):
            d[k] = ctx.fsum(ctx.mpf(math.comb(k, j)) * b[j] for j in range(min(k, seq.order) + 1))
        return ContinuousMomentSeq(d, seq)
    b = seq.b
    d = np.empty(M + 1)
    for k in range(M + 1):
        J = min(k, seq.order)
        d[k] = math.fsum(math.comb(k, j) * b[j] for j in range(J + 1))
    if not np.all(np.isfinite(d)):
        raise MomentOverflow("continuous moments overflow double precision")
    return ContinuousMomentSeq(d, seq)


def _continuous_series(cseq: ContinuousMomentSeq, t: float, exponential: bool, precision_bits: int) -> float:
    src = cseq.source
    ctx = mp_context(max(precision_bits, src.precision_bits or 0))
    tt = ctx.mpf(t)
    if not src.complete:
        terms = []
        power = ctx.one
        for k, dk in enumerate(cseq.d):
            if k:
                power = power * tt / (k if exponential else 1)
            terms.append(ctx.mpf(dk) * power)
        return float(ctx.fsum(terms))
    # complete source: d[k] is known for every k, so sum until the tail is negligible
    b = [ctx.mpf(v) for v in src.b]
    J = len(b) - 1
    total = ctx.zero
    power = ctx.one
    quiet = 0
    eps = ctx.ldexp(1, -ctx.prec)
    for k in range(_MAX_SERIES_TERMS):
        if k:
            power = power * tt / (k if exponential else 1)
        dk = ctx.fsum(ctx.mpf(math.comb(k, j)) * b[j] for j in range(min(k, J) + 1))
        term = dk * power
        total += term
        if k > J and abs(term) <= eps * max(abs(total), eps):
            quiet += 1
            if quiet >= 3:
                return float(total)
        else:
            quiet = 0
    raise Divergent(f"continuous-moment series at t={t} did not converge in {_MAX_SERIES_TERMS} terms")


def eval_phi_tilde(cseq: ContinuousMomentSeq, t: float, *, allow_positive: bool = False,
                   precision_bits: int = _SERIES_BITS) -> float:
    """phitilde(t) = sum d[k] t^k / k!; the characteristic function of X_c at t = -|zeta|^2."""
    t = float(t)
    _check_t(t, allow_positive)
    return _continuous_series(cseq, t, True, precision_bits)


def eval_phi(cseq: ContinuousMomentSeq, t: float, *, precision_bits: int = _SERIES_BITS) -> float:
    """phi(t) = sum d[k] t^k; converges for |t| < 1."""
    t = float(t)
    if not abs(t) < 1:
        raise Divergent(f"phi({t}) diverges: the continuous moments grow polynomially")
    return _continuous_series(cseq, t, False, precision_bits)


def htilde_evaluator(p: Pmf) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised t -> sum_n p[n] L_n(-t)."""
    probs = p.probs

    def htilde(t):
        t = np.asarray(t, dtype=float)
        return np.tensordot(probs, laguerre_table(probs.size - 1, -t), axes=1)

    return htilde


def scaled_htilde(p: Pmf, s: np.ndarray) -> np.ndarray:
    """exp(-s/2) Htilde(-s), which stays bounded by one for s >= 0."""
    return p.probs @ laguerre_functions(p.support_bound, s)


def quadrature_order(support_bound: int, m_max: int) -> int:
    """Smallest comfortable K for exact inversion of a degree-``support_bound`` Htilde."""
    return support_bound + math.ceil(m_max / 2) + 1


def invert_scaled(g: np.ndarray, m_max: int, rule: QuadratureRule,
                  tail_tolerance: float = DEFAULT_TOLERANCE, truncated: bool = False) -> tuple[Pmf, float]:
    """Masses p[0..m_max] from ``g = exp(-s/2) Htilde(-s)`` sampled at the rule's nodes.

    Returns the pmf and the round-off scale of the largest entry.  Negative
    entries within ten times their round-off scale are clamped to zero.
    """
    ell = laguerre_functions(m_max, rule.nodes)
    terms = rule.scaled_weights * g
    values = ell @ terms
    ulp = rule.order * np.finfo(float).eps * (np.abs(ell) @ np.abs(terms))
    pmf = _finish_pmf(values, -10 * ulp, tail_tolerance, truncated)
    return pmf, float(ulp.max())


def laguerre_invert(htilde: Callable, m_max: int, rule: QuadratureRule | int,
                    tail_tolerance: float = DEFAULT_TOLERANCE) -> Pmf:
    """p[m] = sum_k w_k Htilde(-s_k) L_m(s_k) for m = 0..m_max.

    ``htilde`` is called with an array of non-positive arguments.  The rule
    (or its order) must make the integrand degree deg(Htilde) + m_max at
    most 2K - 1 for an exact answer.
    """
    if not isinstance(rule, QuadratureRule):
        rule = gauss_laguerre_rule(int(rule))
    s = rule.nodes
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(htilde(-s), dtype=float)
        g = np.exp(-0.5 * s) * vals
    if not np.all(np.isfinite(g)):
        raise NotAPmf("Htilde overflowed at the quadrature nodes; use a smaller rule")
    return invert_scaled(g, int(m_max), rule, tail_tolerance)[0]
