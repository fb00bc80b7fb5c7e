"""Evaluation of H_A^(n,p) outside the series domain, for ``ξ_i <= 0``.

The fundamental solutions need H_A at ``ξ_i = -4 x_i x0_i / r^2``, which is
large and negative near the pole ``r -> 0``.  Two representations stay
valid there.

Expansion in η::

    H_A(a, b; c; ξ, η) = Σ_j (-Σ η)^j / ((1-a)_j j!) · F_A(a-j, b; c; ξ)

where each F_A is taken from the Pfaff-transformed product expansion.  For
n = 1 that is a single Gauss function with argument ``ξ/(ξ-1)`` in (0, 1).

Euler integral (needs ``c_i > b_i > 0``)::

    H_A = ∫_{[0,1]^n} ∏ t_i^(b_i-1) (1-t_i)^(c_i-b_i-1) / B(b_i, c_i-b_i)
              · u^(-a) · 0F1(1-a; -u Σ η) dt,     u = 1 - Σ ξ_i t_i

integrated with a tensor-product tanh-sinh rule.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import hyp0f1

from .confluent import EvalPoint
from .decomposition import fa_decomposed_transformed
from .errors import ConvergenceError, DomainError, PoleError
from .multiseries import HaParams
from .scalar import (DEFAULT_TRUNCATION, Truncation, hyp2f1, is_nonpositive_integer,
                     log_gamma)

__all__ = [
    "ha_eta_expansion",
    "ha_euler_integral",
    "tanh_sinh_rule",
]


def _check_nonpositive(pt: EvalPoint, params: HaParams):
    if pt.n != params.n:
        raise DomainError("point and parameters disagree on n")
    if any(v > 0.0 for v in pt.xi):
        raise DomainError("continuation routes need ξ_i <= 0")


def _fa_nonpositive(params: HaParams, xi, trunc: Truncation) -> float:
    if params.n == 1:
        return hyp2f1(params.a, params.b[0], params.c[0], xi[0], trunc)
    return fa_decomposed_transformed(params, xi, trunc, max_outer=trunc.max_order)


# relative error assumed for each F_A coefficient, in units of eps
COEFFICIENT_ULPS = 8.0


def ha_eta_expansion(params: HaParams, pt: EvalPoint,
                     trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """H_A for ``ξ_i <= 0`` as a power series in ``Σ η`` with F_A coefficients.

    The terms alternate when ``Σ η > 0`` and grow with ``|ξ Σ η|``.  If the
    cancellation (``Σ|term| / |sum|``) is too large for the result to meet
    ``trunc.rel_tol``, :class:`ConvergenceError` is raised rather than
    returning a degraded value.
    """
    _check_nonpositive(pt, params)
    y = -math.fsum(pt.eta)
    a = params.a
    lead = _fa_nonpositive(params, pt.xi, trunc)
    if y == 0.0:
        return lead
    total = lead
    magnitude = abs(lead)
    coef = 1.0
    run = 0
    for j in range(1, trunc.term_cap):
        coef *= y / ((1.0 - a + j - 1.0) * j)
        if not math.isfinite(coef):
            break
        if coef == 0.0:
            return total
        shifted = HaParams(a - j, params.b, params.c)
        term = coef * _fa_nonpositive(shifted, pt.xi, trunc)
        total += term
        magnitude += abs(term)
        run = run + 1 if abs(term) <= trunc.rel_tol * abs(total) else 0
        if run == 3:
            cond = magnitude / abs(total)
            if cond * COEFFICIENT_ULPS * np.finfo(float).eps > trunc.rel_tol:
                raise ConvergenceError(
                    f"η-expansion cancels by a factor {cond:.3g}; the result cannot "
                    f"meet rel_tol={trunc.rel_tol:g} (use the integral route)")
            return total
    raise ConvergenceError("η-expansion did not converge")


@lru_cache(maxsize=32)
def _nodes(step: float, tmax: float):
    tau = np.arange(-tmax, tmax + step / 2, step)
    s = math.pi * np.sinh(tau)
    # log t and log(1-t) without cancellation at either end
    log_t = -np.logaddexp(0.0, -s)
    log_1mt = -np.logaddexp(0.0, s)
    log_jac = math.log(math.pi * step) + np.log(np.cosh(tau))
    return log_t, log_1mt, log_jac


def tanh_sinh_rule(b: float, cb: float, step: float = 1.0 / 16, tmax: float = 7.0):
    """Nodes and weights for ``∫_0^1 t^(b-1) (1-t)^(cb-1) f(t) dt / B(b, cb)``.

    The endpoint powers are folded into the weights in log form, so the
    rule stays accurate for exponents near -1.  ``tmax`` is widened for
    small ``b`` or ``cb``.  Returns ``(t, weights)``.
    """
    if not (b > 0 and cb > 0):
        raise DomainError("Euler integral needs b > 0 and c - b > 0")
    # the weights decay like exp(-b (π/2) e^|τ|); small exponents need a
    # wider window before the tail mass drops below 1e-17
    tmax = max(tmax, math.ceil(4.0 * math.log(40.0 / min(b, cb))) / 4.0)
    log_t, log_1mt, log_jac = _nodes(step, tmax)
    lb = log_gamma(b)[0] + log_gamma(cb)[0] - log_gamma(b + cb)[0]
    logw = b * log_t + cb * log_1mt + log_jac - lb
    keep = logw > -745.0
    return np.exp(log_t[keep]), np.exp(logw[keep])


def ha_euler_integral(params: HaParams, pt: EvalPoint,
                      trunc: Truncation = DEFAULT_TRUNCATION,
                      step: float = 1.0 / 16) -> float:
    """H_A for ``ξ_i <= 0`` through its Euler integral (tensor tanh-sinh)."""
    _check_nonpositive(pt, params)
    a = params.a
    y = -math.fsum(pt.eta)
    if y != 0.0 and is_nonpositive_integer(1.0 - a):
        raise PoleError(f"H_A with a={a!r} has a pole once η != 0")
    rules = [tanh_sinh_rule(b, c - b, step) for b, c in zip(params.b, params.c)]
    (t0, w0), x0 = rules[0], pt.xi[0]
    # u = 1 - Σ ξ_i t_i over the grid of the trailing variables
    u = np.ones(1)
    w = np.ones(1)
    for (t, wt), x in zip(rules[1:], pt.xi[1:]):
        u = (u[:, None] - x * t[None, :]).ravel()
        w = (w[:, None] * wt[None, :]).ravel()
    parts = []
    for ti, wi in zip(t0, w0):
        ui = u - x0 * ti
        f = ui ** (-a)
        if y != 0.0:
            f = f * hyp0f1(1.0 - a, y * ui)
        parts.append(wi * math.fsum(w * f))
    return math.fsum(parts)
