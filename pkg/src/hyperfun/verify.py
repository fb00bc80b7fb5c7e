"""Residual checks: the physical equation by finite differences, and the
hypergeometric systems through exact series derivatives."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .confluent import EvalPoint, family_partials
from .errors import DomainError
from .helmholtz import (PointPair, SingularConfig, alpha_tilde, gamma_k, geometry, q_k)
from .multiseries import HaParams
from .scalar import DEFAULT_TRUNCATION, Truncation

__all__ = [
    "ResidualReport",
    "DEFAULT_STEP",
    "FD_TRUNCATION",
    "helmholtz_residual",
    "system_residuals",
    "hypergeometric_system_residual",
    "subset_system_residual",
    "substitution_system_residual",
]

DEFAULT_STEP = 1e-4
# q_k fed to finite differences must be accurate and smooth to rounding level
FD_TRUNCATION = Truncation(max_order=160, rel_tol=1e-17, term_cap=20_000)


@dataclass(frozen=True)
class ResidualReport:
    """One equation checked at one point.

    ``relative`` (``residual / scale``) is the certification metric; ``scale``
    is the largest absolute term of the equation.  ``step``,
    ``order_estimate`` and ``noise_floor`` are NaN for the exact (series)
    checks.  ``noise_floor`` estimates the rounding contribution to the
    residual at step ``h/2``; an order estimate is only meaningful when that
    residual stands well above it.
    """

    point: object
    residual: float
    scale: float
    step: float = float("nan")
    order_estimate: float = float("nan")
    label: str = ""
    noise_floor: float = float("nan")
    residual_half: float = float("nan")

    @property
    def order_resolved(self) -> bool:
        return self.residual_half > 10.0 * self.noise_floor

    @property
    def relative(self) -> float:
        if self.scale == 0.0:
            return 0.0 if self.residual == 0.0 else math.inf
        return self.residual / self.scale


def _fd_terms(cfg: SingularConfig, u: Callable[[np.ndarray], float],
              x: np.ndarray, h: float) -> list[float]:
    u0 = u(x)
    terms = []
    first = []
    for i in range(cfg.m):
        e = np.zeros(cfg.m)
        e[i] = h
        up, um = u(x + e), u(x - e)
        terms.append((up - 2.0 * u0 + um) / (h * h))
        if i < cfg.n:
            first.append(2.0 * cfg.alpha[i] / x[i] * (up - um) / (2.0 * h))
    lam = math.fsum(cfg.lambda_sq)
    return terms + first + [-lam * u0]


def helmholtz_residual(cfg: SingularConfig, u: Callable[[np.ndarray], float],
                       x: Sequence[float], h: float | None = None) -> ResidualReport:
    """Finite-difference residual of ``Δu + Σ (2α_j/x_j) u_j - Σλ² u`` at ``x``.

    Central differences with step ``h`` (default ``1e-4 · max(1, |x|_inf)``)
    and ``h/2``; ``order_estimate = log2(res(h) / res(h/2))``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (cfg.m,):
        raise DomainError(f"x must have {cfg.m} coordinates")
    if h is None:
        h = DEFAULT_STEP * max(1.0, float(np.max(np.abs(x))))
    if not h > 0:
        raise DomainError("step must be positive")
    for j in range(cfg.n):
        if x[j] < 2.0 * h:
            raise DomainError(f"step too large: x_{j + 1} = {x[j]:g} < 2h")
    t1 = _fd_terms(cfg, u, x, h)
    t2 = _fd_terms(cfg, u, x, h / 2.0)
    r1 = abs(math.fsum(t1))
    r2 = abs(math.fsum(t2))
    scale = max(abs(t) for t in t1)
    order = math.log2(r1 / r2) if r1 > 0 and r2 > 0 else float("nan")
    # one-ulp errors in u reach a second difference amplified by 4/h²
    half = h / 2.0
    noise = 4.0 * np.finfo(float).eps * abs(u(x)) / half ** 2
    return ResidualReport(tuple(float(v) for v in x), r1, scale, h, order, "helmholtz",
                          noise, r2)


def system_residuals(params: HaParams, pt: EvalPoint, value: float, grad: np.ndarray,
                     hess: np.ndarray) -> list[ResidualReport]:
    """Residuals of the n ξ-equations and p η-equations satisfied by H_A and
    its solution family, given ω and its first and second partials in
    ``(ξ_1..ξ_n, η_1..η_p)``."""
    a, b, c = params.a, params.b, params.c
    n, p = params.n, pt.p
    xi, eta = pt.xi, pt.eta
    out = []
    for i in range(n):
        terms = [xi[i] * (1.0 - xi[i]) * hess[i, i],
                 (c[i] - (a + b[i] + 1.0) * xi[i]) * grad[i],
                 -a * b[i] * value]
        for j in range(n):
            if j != i:
                terms.append(-xi[i] * xi[j] * hess[i, j])
                terms.append(-b[i] * xi[j] * grad[j])
        for j in range(p):
            terms.append(xi[i] * eta[j] * hess[i, n + j])
            terms.append(b[i] * eta[j] * grad[n + j])
        out.append(ResidualReport(pt, abs(math.fsum(terms)), max(abs(t) for t in terms),
                                  label=f"xi{i + 1}"))
    for j in range(p):
        terms = [(1.0 - a) * grad[n + j], value]
        terms += [eta[l] * hess[n + l, n + j] for l in range(p)]
        terms += [-xi[l] * hess[l, n + j] for l in range(n)]
        out.append(ResidualReport(pt, abs(math.fsum(terms)), max(abs(t) for t in terms),
                                  label=f"eta{j + 1}"))
    return out


def hypergeometric_system_residual(params: HaParams, pt: EvalPoint, k: int,
                                   trunc: Truncation = DEFAULT_TRUNCATION,
                                   C_k: float = 1.0) -> list[ResidualReport]:
    """System residuals of the family member ω_k; derivatives are exact
    (parameter-shift formula), not finite differences."""
    value, grad, hess = family_partials(params, pt, k, C_k, trunc)
    return system_residuals(params, pt, value, grad, hess)


def subset_system_residual(params: HaParams, pt: EvalPoint, subset: Sequence[int],
                           trunc: Truncation = DEFAULT_TRUNCATION) -> list[ResidualReport]:
    """Residuals of the family member whose power factors sit on the
    variables in ``subset`` (0-based), any of the 2^n choices.

    The system is invariant under a common permutation of ``(ξ_i, b_i, c_i)``,
    so the subset is moved to the front and the prefix member
    ``k = len(subset)`` is checked.  Labels refer to the original indices.
    """
    subset = sorted(set(int(i) for i in subset))
    if any(not 0 <= i < params.n for i in subset):
        raise DomainError(f"subset {subset} outside 0..{params.n - 1}")
    order = subset + [i for i in range(params.n) if i not in subset]
    perm_params = HaParams(params.a, tuple(params.b[i] for i in order),
                           tuple(params.c[i] for i in order))
    perm_pt = EvalPoint(tuple(pt.xi[i] for i in order), pt.eta)
    reports = hypergeometric_system_residual(perm_params, perm_pt, len(subset), trunc)
    out = []
    for rep in reports:
        label = rep.label
        if label.startswith("xi"):
            label = f"xi{order[int(label[2:]) - 1] + 1}"
        out.append(ResidualReport(pt, rep.residual, rep.scale, label=label))
    return out


def substitution_system_residual(cfg: SingularConfig, pp: PointPair, k: int,
                                 trunc: Truncation = DEFAULT_TRUNCATION) -> list[ResidualReport]:
    """Check that ``ω = q_k / P(r)``, ``P(r) = (r²)^(-α̃₀)``, solves the system
    with ``a = α̃₀``, ``b = α``, ``c = 2α`` in the variables ``(ξ, η)``.

    ω itself is taken from :func:`q_k`; its derivatives come from the
    family member k with ``C_k = γ_k 4^(-Σ_{i<=k}(1-2α_i))``.
    """
    g = geometry(cfg, pp)
    at0 = alpha_tilde(cfg, 0)
    params = HaParams(at0, cfg.alpha, tuple(2.0 * a for a in cfg.alpha))
    pt = EvalPoint(g.xi, g.eta)
    C = gamma_k(cfg, k) * 4.0 ** (-math.fsum(1.0 - 2.0 * a for a in cfg.alpha[:k]))
    _, grad, hess = family_partials(params, pt, k, C, trunc)
    omega = q_k(cfg, pp, k, trunc) * g.r_sq ** at0
    return system_residuals(params, pt, omega, grad, hess)
