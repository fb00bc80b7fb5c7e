"""One-variable building blocks: Gamma quotients, Pochhammer symbols,
the Gauss function 2F1 and the confluent series 0Fp.

Everything here works on real floats.  Series are summed in chunks with
numpy and stopped with a three-term rule: the sum is accepted once three
consecutive terms are each below ``rel_tol`` times the running sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "Truncation",
    "DEFAULT_TRUNCATION",
    "log_gamma",
    "gamma",
    "gamma_ratio",
    "pochhammer",
    "gauss_2f1",
    "gauss_2f1_near_one",
    "hyp2f1",
    "gauss_sum_at_unity",
    "zero_f_p",
    "is_nonpositive_integer",
]

_CHUNK = 256


@dataclass(frozen=True)
class Truncation:
    """Series-control record.

    ``max_order`` bounds the total order of multi-index series, ``term_cap``
    bounds the number of terms of one-variable series, ``rel_tol`` is the
    stopping tolerance relative to the running sum.
    """

    max_order: int = 64
    rel_tol: float = 1e-12
    term_cap: int = 10_000

    def __post_init__(self):
        if self.max_order < 0:
            raise DomainError("max_order must be nonnegative")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.term_cap < 1:
            raise DomainError("term_cap must be positive")


DEFAULT_TRUNCATION = Truncation()


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Γ(x)|, sign Γ(x))``."""
    x = float(x)
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        sign = 1
    else:
        sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def gamma(x: float) -> float:
    lg, sign = log_gamma(x)
    return sign * math.exp(lg)


def gamma_ratio(numer: Sequence[float], denom: Sequence[float]) -> float:
    """``∏Γ(numer) / ∏Γ(denom)`` through log-Gamma.

    A pole in the numerator raises :class:`PoleError`; a pole in the
    denominator makes the quotient vanish.
    """
    for v in numer:
        if is_nonpositive_integer(v):
            raise PoleError(f"Gamma pole at {v!r} in numerator")
    if any(is_nonpositive_integer(v) for v in denom):
        return 0.0
    log_total = 0.0
    sign = 1
    for v in numer:
        lg, s = log_gamma(v)
        log_total += lg
        sign *= s
    for v in denom:
        lg, s = log_gamma(v)
        log_total -= lg
        sign *= s
    return sign * math.exp(log_total)


def pochhammer(base: float, shift: int) -> float:
    """Shifted factorial ``(base)_shift`` for an integer ``shift``.

    Positive shifts use the rising product.  Negative shifts use
    ``1 / ((base-1)(base-2)...(base+shift))`` and raise :class:`PoleError`
    when a factor vanishes.  ``(x)_0 = 1`` for every ``x``, including 0.
    """
    if int(shift) != shift:
        raise DomainError("shift must be an integer")
    shift = int(shift)
    if shift == 0:
        return 1.0
    base = float(base)
    if shift > 0:
        out = 1.0
        for i in range(shift):
            out *= base + i
        return out
    den = 1.0
    for i in range(1, -shift + 1):
        f = base - i
        if f == 0.0:
            raise PoleError(f"({base})_{shift}: Gamma({base + shift}) is a pole")
        den *= f
    return 1.0 / den


def _series(numer: Sequence[float], denom: Sequence[float], x: float,
            trunc: Truncation) -> float:
    """Sum ``Σ ∏(numer)_k / ∏(denom)_k x^k / k!`` with the three-term rule."""
    numer = np.asarray(numer, dtype=float)
    denom = np.asarray(denom, dtype=float)
    if x == 0.0:
        return 1.0
    total = 0.0
    last = 1.0  # term k0 before scaling by the chunk's ratios
    small_run = 0
    k0 = 0
    # term_0 = 1 is handled as the first element of the first chunk
    while k0 < trunc.term_cap:
        n = min(_CHUNK, trunc.term_cap - k0)
        k = np.arange(k0, k0 + n, dtype=float)
        if k0 == 0:
            ratios = np.empty(n)
            ratios[0] = 1.0
            kk = k[1:] - 1.0
            ratios[1:] = _ratio(numer, denom, kk) * x
        else:
            ratios = _ratio(numer, denom, k - 1.0) * x
        terms = last * np.cumprod(ratios)
        partial = total + np.cumsum(terms)
        small = np.abs(terms) <= trunc.rel_tol * np.abs(partial)
        for i in range(n):
            small_run = small_run + 1 if small[i] else 0
            if small_run == 3:
                return float(partial[i])
        total = float(partial[-1])
        last = float(terms[-1])
        if not np.isfinite(total):
            raise ConvergenceError("series overflowed")
        k0 += n
    raise ConvergenceError(
        f"series did not reach rel_tol={trunc.rel_tol:g} within {trunc.term_cap} terms")


def _ratio(numer, denom, k):
    # term_{k+1} / term_k without the x factor
    r = 1.0 / (k + 1.0)
    for a in numer:
        r = r * (a + k)
    for b in denom:
        r = r / (b + k)
    return r


def gauss_2f1(a: float, b: float, c: float, x: float,
              trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Gauss hypergeometric function by its defining series.

    Valid for ``|x| < 1``; ``x == 1`` is evaluated in closed form by
    :func:`gauss_sum_at_unity`.
    """
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c={c!r} is a nonpositive integer")
    if x == 1.0:
        return gauss_sum_at_unity(a, b, c)
    if not abs(x) < 1.0:
        raise DomainError(f"2F1 series needs |x| < 1, got x={x!r}")
    return _series((a, b), (c,), x, trunc)


def gauss_sum_at_unity(a: float, b: float, c: float) -> float:
    """``F(a,b;c;1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`` for ``c-a-b > 0``."""
    if not c - a - b > 0:
        raise DomainError(f"F(a,b;c;1) needs c-a-b > 0, got {c - a - b!r}")
    return gamma_ratio((c, c - a - b), (c - a, c - b))


def _near_integer(v: float, tol: float = 1e-9) -> bool:
    return abs(v - round(v)) <= tol


def gauss_2f1_near_one(a: float, b: float, c: float, x: float,
                       trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """2F1 for ``x`` in ``[0, 1)`` through the ``x -> 1-x`` connection formula.

    Both connection terms are short series in ``1-x``.  When ``c-a-b`` is
    (numerically) an integer the formula degenerates into logarithmic terms;
    that case is delegated to mpmath.
    """
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c={c!r} is a nonpositive integer")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"connection formula used for x in [0,1), got {x!r}")
    s = c - a - b
    if _near_integer(s):
        import mpmath

        with mpmath.workdps(30):
            return float(mpmath.hyp2f1(a, b, c, x))
    y = 1.0 - x
    out = 0.0
    g1 = gamma_ratio((c, s), (c - a, c - b))
    if g1 != 0.0:
        out += g1 * _series((a, b), (1.0 - s,), y, trunc)
    g2 = gamma_ratio((c, -s), (a, b))
    if g2 != 0.0:
        out += g2 * y**s * _series((c - a, c - b), (1.0 + s,), y, trunc)
    return out


def hyp2f1(a: float, b: float, c: float, x: float,
           trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """2F1 for any real ``x <= 1``.

    Picks the direct series for ``|x| <= 1/2``, the connection formula on
    ``(1/2, 1)``, and the Pfaff transformation
    ``F(a,b;c;x) = (1-x)^(-b) F(c-a,b;c;x/(x-1))`` for ``x < -1/2``.
    """
    if x == 1.0:
        return gauss_sum_at_unity(a, b, c)
    if x > 1.0:
        raise DomainError(f"real 2F1 requested at x={x!r} > 1")
    if abs(x) <= 0.5:
        return gauss_2f1(a, b, c, x, trunc)
    if x > 0.5:
        return gauss_2f1_near_one(a, b, c, x, trunc)
    z = x / (x - 1.0)
    return (1.0 - x) ** (-b) * hyp2f1(c - a, b, c, z, trunc)


def zero_f_p(denominator: float, args: Sequence[float],
             trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """``Σ_{j_1..j_p} y_1^j_1 ... y_p^j_p / ((denominator)_{j_1+..+j_p} j_1!...j_p!)``.

    The p-fold sum depends on the arguments only through their sum, so it is
    evaluated as a single 0F1-type series at ``Σ y_k``.
    """
    if is_nonpositive_integer(denominator):
        raise PoleError(f"0Fp lower parameter {denominator!r} is a nonpositive integer")
    y = math.fsum(float(v) for v in args)
    return _series((), (denominator,), y, trunc)
