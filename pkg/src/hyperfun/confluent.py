"""The confluent function H_A^(n,p), its derivatives and its solution family.

    H_A(a, b; c; ξ, η) = Σ (a)_{|m|-|q|} ∏(b_i)_{m_i}/((c_i)_{m_i} m_i!) ξ^m  ∏ η_k^{q_k}/q_k!

The η-part depends on η only through Σ η_k (multinomial theorem), so by
default the p η-variables are collapsed into one before summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .multiseries import (HaParams, MultiIndex, lauricella_fa, mixed_shells,
                          shell_coefficients, sum_shells)
from .scalar import DEFAULT_TRUNCATION, Truncation, pochhammer

__all__ = [
    "EvalPoint",
    "ha_eval",
    "ha_reduce_eta",
    "ha_derivative",
    "family_parameters",
    "ha_solution_family",
    "family_partials",
]


@dataclass(frozen=True)
class EvalPoint:
    """Arguments ``(ξ_1..ξ_n; η_1..η_p)``.

    The series domain ``Σ|ξ_i| < 1`` is checked by the series evaluators, not
    here, so that points from the physical problem (where ξ is large and
    negative) can be carried to the continuation routes.
    """

    xi: tuple[float, ...]
    eta: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(float(v) for v in np.atleast_1d(self.xi)))
        object.__setattr__(self, "eta", tuple(float(v) for v in np.atleast_1d(self.eta)))
        if not all(math.isfinite(v) for v in self.xi + self.eta):
            raise DomainError("evaluation point must be finite")

    @property
    def n(self) -> int:
        return len(self.xi)

    @property
    def p(self) -> int:
        return len(self.eta)


def _check(params: HaParams, pt: EvalPoint):
    if pt.n != params.n:
        raise DomainError(f"point has {pt.n} ξ-components, parameters expect {params.n}")
    if not sum(abs(v) for v in pt.xi) < 1.0:
        raise DomainError("H_A series needs |ξ_1| + ... + |ξ_n| < 1")


def ha_reduce_eta(pt: EvalPoint) -> EvalPoint:
    """Collapse the η-variables into their sum (p -> 1)."""
    return EvalPoint(pt.xi, (math.fsum(pt.eta),))


def _exp_terms(y: float, order: int) -> np.ndarray:
    out = np.empty(order + 1)
    out[0] = 1.0
    if order:
        out[1:] = np.cumprod(y / np.arange(1, order + 1, dtype=float))
    return out


def ha_eval(params: HaParams, pt: EvalPoint, trunc: Truncation = DEFAULT_TRUNCATION,
            *, collapse: bool = True) -> float:
    """H_A^(n,p) by its series, summed in total-order shells.

    With ``collapse=False`` the η-part is built as the convolution of the p
    exponential sequences instead of being reduced to ``Σ η_k`` first.
    """
    _check(params, pt)
    if pt.p == 0 or all(v == 0.0 for v in pt.eta):
        return lauricella_fa(params, pt.xi, trunc)
    order = trunc.max_order
    g = shell_coefficients(params.b, params.c, pt.xi, order)
    if collapse:
        e = _exp_terms(math.fsum(pt.eta), order)
    else:
        e = _exp_terms(pt.eta[0], order)
        for y in pt.eta[1:]:
            e = np.convolve(e, _exp_terms(y, order))[: order + 1]
    return sum_shells(mixed_shells(params.a, g, e, order), trunc.rel_tol, "H_A")


def _shifted(params: HaParams, xi_orders: Sequence[int], eta_total: int) -> tuple[float, HaParams]:
    i = tuple(int(v) for v in xi_orders)
    if len(i) != params.n or any(v < 0 for v in i) or eta_total < 0:
        raise DomainError("derivative orders must be nonnegative and match n")
    net = sum(i) - eta_total
    factor = pochhammer(params.a, net)
    for bl, cl, il in zip(params.b, params.c, i):
        factor *= pochhammer(bl, il) / pochhammer(cl, il)
    shifted = HaParams(params.a + net,
                       tuple(bl + il for bl, il in zip(params.b, i)),
                       tuple(cl + il for cl, il in zip(params.c, i)))
    return factor, shifted


def ha_derivative(params: HaParams, pt: EvalPoint, xi_orders: MultiIndex,
                  eta_orders: MultiIndex, trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Mixed partial derivative of H_A through the parameter-shift formula."""
    if len(eta_orders) != pt.p:
        raise DomainError("eta_orders must have one entry per η-variable")
    factor, shifted = _shifted(params, xi_orders, sum(int(v) for v in eta_orders))
    if factor == 0.0:
        return 0.0
    return factor * ha_eval(shifted, pt, trunc)


def family_parameters(params: HaParams, k: int) -> tuple[HaParams, tuple[float, ...]]:
    """Parameters and ξ-exponents of the k-th member of the solution family.

    For ``i <= k``: ``b_i -> b_i + 1 - c_i``, ``c_i -> 2 - c_i`` and the
    factor ``|ξ_i|^(1 - c_i)`` is attached.  The joint parameter moves with
    the exponents, ``a -> a + Σ_{i<=k} (1 - c_i)``; that is what the ξ_i-power
    substitution does to the η-equations, and it is the same shift that turns
    α̃_0 into α̃_k in the fundamental solutions.
    """
    if not 0 <= k <= params.n:
        raise DomainError(f"family index k={k} outside [0, {params.n}]")
    tau = tuple(1.0 - params.c[i] for i in range(k))
    b = tuple(params.b[i] + tau[i] if i < k else params.b[i] for i in range(params.n))
    c = tuple(2.0 - params.c[i] if i < k else params.c[i] for i in range(params.n))
    return HaParams(params.a + math.fsum(tau), b, c), tau


def _prefactor(xi: Sequence[float], tau: Sequence[float]) -> float:
    out = 1.0
    for x, t in zip(xi, tau):
        if x == 0.0:
            if t >= 0 and float(t).is_integer():
                out *= 1.0 if t == 0 else 0.0
                continue
            raise DomainError("|ξ_i|^(1-c_i) is singular or non-smooth at ξ_i = 0")
        out *= abs(x) ** t
    return out


def ha_solution_family(params: HaParams, pt: EvalPoint, k: int, C_k: float = 1.0,
                       trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """``ω_k = C_k ∏_{i<=k} |ξ_i|^(1-c_i) · H_A(shifted parameters; ξ, η)``."""
    shifted, tau = family_parameters(params, k)
    pref = _prefactor(pt.xi[:k], tau)
    return C_k * pref * ha_eval(shifted, pt, trunc)


def family_partials(params: HaParams, pt: EvalPoint, k: int, C_k: float = 1.0,
                    trunc: Truncation = DEFAULT_TRUNCATION):
    """Value, gradient and Hessian of ω_k in the variables ``(ξ, η)``.

    Partials of the H_A factor come from the parameter-shift formula; the
    power prefactor is differentiated by the product rule.
    """
    shifted, tau = family_parameters(params, k)
    n, p = params.n, pt.p
    dim = n + p
    tau_full = np.zeros(n)
    tau_full[:k] = tau
    xi = np.asarray(pt.xi)
    for i in range(k):
        if xi[i] == 0.0:
            raise DomainError("family partials need ξ_i != 0 for i <= k")
    phi = C_k * _prefactor(pt.xi[:k], tau)

    def order_vec(*idx):
        v = [0] * dim
        for j in idx:
            v[j] += 1
        return v

    def G(*idx):
        v = order_vec(*idx)
        return ha_derivative(shifted, pt, tuple(v[:n]), tuple(v[n:]), trunc)

    # logarithmic derivatives of the prefactor: dφ/dξ_i = φ τ_i / ξ_i
    lg = np.zeros(dim)
    with np.errstate(divide="ignore", invalid="ignore"):
        lg[:n] = np.where(tau_full != 0.0, tau_full / np.where(xi == 0, 1.0, xi), 0.0)

    g0 = G()
    grad_G = np.array([G(j) for j in range(dim)])
    hess_G = np.empty((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            hess_G[i, j] = hess_G[j, i] = G(i, j)

    value = phi * g0
    grad = phi * (grad_G + lg * g0)
    hess = np.empty((dim, dim))
    for i in range(dim):
        for j in range(dim):
            phi_ij = lg[i] * lg[j]
            if i == j and i < n and tau_full[i] != 0.0:
                phi_ij = tau_full[i] * (tau_full[i] - 1.0) / xi[i] ** 2
            hess[i, j] = phi * (phi_ij * g0 + lg[i] * grad_G[j] + lg[j] * grad_G[i]
                                + hess_G[i, j])
    return value, grad, hess
