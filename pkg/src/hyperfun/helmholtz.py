"""Fundamental solutions of the singular Helmholtz equation

    Δu + Σ_{j<=n} (2 α_j / x_j) ∂u/∂x_j - (Σ_k λ_k²) u = 0,   x_1..x_n > 0,

written through H_A^(n,p):

    q_k(x, x0) = γ_k ∏_{i<=k} (x_i x0_i)^(1-2α_i) · (r²)^(-α̃_k)
                 · H_A(α̃_k; 1-α_1..1-α_k, α_{k+1}..α_n;
                        2-2α_1..2-2α_k, 2α_{k+1}..2α_n; ξ, η)

with ``ξ_j = (r² - r_j²)/r² = -4 x_j x0_j / r²`` and ``η_k = -λ_k² r² / 4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .confluent import EvalPoint, ha_eval
from .continuation import ha_euler_integral, ha_eta_expansion
from .errors import DomainError
from .multiseries import HaParams
from .scalar import DEFAULT_TRUNCATION, Truncation, gamma_ratio, log_gamma, zero_f_p

__all__ = [
    "SingularConfig",
    "PointPair",
    "SolutionGeometry",
    "geometry",
    "alpha_tilde",
    "gamma_k",
    "solution_parameters",
    "q_k",
    "q_k_multi",
    "select_route",
    "evaluate_ha",
    "singularity_probe",
    "singularity_target",
    "singularity_limit",
    "SERIES_RADIUS",
    "MIN_COORDINATE",
]

# direct H_A summation is used while Σ|ξ| stays below this
SERIES_RADIUS = 0.7
# evaluation is refused closer than this to a singular hyperplane
MIN_COORDINATE = 1e-8


@dataclass(frozen=True)
class SingularConfig:
    """Dimension ``m``, exponents ``α_1..α_n`` and signed ``λ_k²`` values.

    A negative ``λ²`` stands for a purely imaginary λ.  ``lambda_sq`` may
    hold several entries (the several-parameter equation); only their sum
    enters the operator.
    """

    m: int
    alpha: tuple[float, ...]
    lambda_sq: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in np.atleast_1d(self.alpha)))
        object.__setattr__(self, "lambda_sq",
                           tuple(float(v) for v in np.atleast_1d(self.lambda_sq)))
        if int(self.m) != self.m or self.m < 2:
            raise DomainError("m must be an integer >= 2")
        object.__setattr__(self, "m", int(self.m))
        if not 1 <= len(self.alpha) <= self.m:
            raise DomainError("need 1 <= n <= m")
        for a in self.alpha:
            if not 0.0 < 2.0 * a < 1.0:
                raise DomainError(f"need 0 < 2α < 1, got α={a!r}")
        if len(self.lambda_sq) < 1:
            raise DomainError("lambda_sq needs at least one entry")
        if not all(math.isfinite(v) for v in self.lambda_sq):
            raise DomainError("lambda_sq must be finite")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def p(self) -> int:
        return len(self.lambda_sq)

    def collapsed(self) -> "SingularConfig":
        """The single-λ configuration with ``λ² = Σ λ_k²``."""
        return SingularConfig(self.m, self.alpha, (math.fsum(self.lambda_sq),))


@dataclass(frozen=True)
class PointPair:
    """Field point ``x`` and source point ``x0`` in R^m."""

    x: tuple[float, ...]
    x0: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        if len(self.x) != len(self.x0):
            raise DomainError("x and x0 must have the same dimension")
        if not all(math.isfinite(v) for v in self.x + self.x0):
            raise DomainError("coordinates must be finite")

    def swapped(self) -> "PointPair":
        return PointPair(self.x0, self.x)


@dataclass(frozen=True)
class SolutionGeometry:
    r_sq: float
    rj_sq: tuple[float, ...]
    xi: tuple[float, ...]
    eta: tuple[float, ...]
    alpha_tilde: tuple[float, ...]
    gamma: tuple[float, ...]


def alpha_tilde(cfg: SingularConfig, k: int) -> float:
    """``α̃_k = m/2 + k - 1 - Σ_{i<=k} α_i + Σ_{i>k} α_i``."""
    if not 0 <= k <= cfg.n:
        raise DomainError(f"k={k} outside [0, {cfg.n}]")
    return cfg.m / 2.0 + k - 1.0 - math.fsum(cfg.alpha[:k]) + math.fsum(cfg.alpha[k:])


def gamma_k(cfg: SingularConfig, k: int) -> float:
    """Normalising constant ``γ_k``, assembled in log form."""
    at = alpha_tilde(cfg, k)
    numer = [at]
    denom = []
    for j, a in enumerate(cfg.alpha):
        if j < k:
            numer.append(1.0 - a)
            denom.append(2.0 - 2.0 * a)
        else:
            numer.append(a)
            denom.append(2.0 * a)
    log_pow = (2.0 * at - cfg.m) * math.log(2.0) - 0.5 * cfg.m * math.log(math.pi)
    return math.exp(log_pow) * gamma_ratio(numer, denom)


def solution_parameters(cfg: SingularConfig, k: int) -> HaParams:
    """H_A parameters used by ``q_k``."""
    at = alpha_tilde(cfg, k)
    b = tuple(1.0 - a if j < k else a for j, a in enumerate(cfg.alpha))
    c = tuple(2.0 - 2.0 * a if j < k else 2.0 * a for j, a in enumerate(cfg.alpha))
    return HaParams(at, b, c)


def _check_pair(cfg: SingularConfig, pp: PointPair):
    if len(pp.x) != cfg.m:
        raise DomainError(f"points must have {cfg.m} coordinates")
    for j in range(cfg.n):
        if pp.x[j] <= 0.0 or pp.x0[j] <= 0.0:
            raise DomainError(f"coordinate {j + 1} must be positive for both points")
        if pp.x[j] < MIN_COORDINATE or pp.x0[j] < MIN_COORDINATE:
            raise DomainError(
                f"coordinate {j + 1} is within {MIN_COORDINATE:g} of a singular hyperplane")


def geometry(cfg: SingularConfig, pp: PointPair) -> SolutionGeometry:
    _check_pair(cfg, pp)
    x = np.asarray(pp.x)
    x0 = np.asarray(pp.x0)
    d2 = (x - x0) ** 2
    r_sq = math.fsum(d2)
    if r_sq == 0.0:
        raise DomainError("x and x0 coincide (r = 0)")
    rj = tuple(float(r_sq + 4.0 * x[j] * x0[j]) for j in range(cfg.n))
    xi = tuple(float(-4.0 * x[j] * x0[j] / r_sq) for j in range(cfg.n))
    eta = tuple(-0.25 * lam * r_sq for lam in cfg.lambda_sq)
    at = tuple(alpha_tilde(cfg, k) for k in range(cfg.n + 1))
    gm = tuple(gamma_k(cfg, k) for k in range(cfg.n + 1))
    return SolutionGeometry(r_sq, rj, xi, eta, at, gm)


def select_route(xi: Sequence[float], params: HaParams | None = None) -> str:
    """``"series"`` inside ``Σ|ξ| <= SERIES_RADIUS``.  Outside, the Euler
    integral whenever its ``c_i > b_i > 0`` condition holds (it stays
    accurate when ``|ξ Σ η|`` is large, where the η-expansion cancels
    badly), else the η-expansion."""
    if sum(abs(v) for v in xi) <= SERIES_RADIUS:
        return "series"
    if params is None or all(c > b > 0 for b, c in zip(params.b, params.c)):
        return "integral"
    return "eta-expansion"


def _series_trunc(trunc: Truncation) -> Truncation:
    # at Σ|ξ| = 0.7 the shells need ~110 orders to fall below 1e-16
    return Truncation(max(trunc.max_order, 160), trunc.rel_tol, trunc.term_cap)


def evaluate_ha(params: HaParams, pt: EvalPoint, trunc: Truncation = DEFAULT_TRUNCATION,
                route: str = "auto") -> float:
    """H_A with ``ξ_i <= 0`` through the requested or automatically chosen route."""
    if route == "auto":
        route = select_route(pt.xi, params)
    if route == "series":
        return ha_eval(params, pt, _series_trunc(trunc))
    if route == "eta-expansion":
        return ha_eta_expansion(params, pt, trunc)
    if route == "integral":
        mx = max(abs(v) for v in pt.xi)
        step = 1.0 / 8 if mx <= 10 else 1.0 / 16 if mx <= 1e3 else 1.0 / 32
        return ha_euler_integral(params, pt, trunc, step=step)
    raise DomainError(f"unknown route {route!r}")


def q_k(cfg: SingularConfig, pp: PointPair, k: int,
        trunc: Truncation = DEFAULT_TRUNCATION, route: str = "auto") -> float:
    """Fundamental solution ``q_k(x, x0)``, ``0 <= k <= n``.

    With several ``λ_k²`` the η-variables are kept separate in the
    evaluation point; the series collapses them exactly.
    """
    g = geometry(cfg, pp)
    params = solution_parameters(cfg, k)
    log_pref = math.log(g.gamma[k]) - g.alpha_tilde[k] * math.log(g.r_sq)
    for i in range(k):
        log_pref += (1.0 - 2.0 * cfg.alpha[i]) * math.log(pp.x[i] * pp.x0[i])
    h = evaluate_ha(params, EvalPoint(g.xi, g.eta), trunc, route)
    return math.exp(log_pref) * h


def q_k_multi(cfg: SingularConfig, pp: PointPair, k: int,
              trunc: Truncation = DEFAULT_TRUNCATION, route: str = "auto") -> float:
    """``q_k`` for the several-λ equation; identical to :func:`q_k`, kept as
    a separate name for callers that want to state the p > 1 intent."""
    return q_k(cfg, pp, k, trunc, route)


def singularity_target(cfg: SingularConfig) -> float:
    """``2^(2α̃₀-m) Γ(m/2) / π^(m/2)``, the usually quoted limit of the scaled
    probe.  It is correct only for m = 4; see :func:`singularity_limit`."""
    at = alpha_tilde(cfg, 0)
    return math.exp((2 * at - cfg.m) * math.log(2.0) + log_gamma(cfg.m / 2.0)[0]
                    - 0.5 * cfg.m * math.log(math.pi))


def singularity_limit(cfg: SingularConfig) -> float:
    """``2^(2α̃₀-m) Γ(m/2 - 1) / π^(m/2)``: the limit of the scaled probe for
    every k.  At ``α = 0`` it reduces to the Newtonian normalisation
    ``Γ(m/2 - 1) / (4 π^(m/2))``."""
    if cfg.m < 3:
        raise DomainError("the power-law singularity needs m >= 3")
    at = alpha_tilde(cfg, 0)
    return math.exp((2 * at - cfg.m) * math.log(2.0) + log_gamma(cfg.m / 2.0 - 1.0)[0]
                    - 0.5 * cfg.m * math.log(math.pi))


def singularity_probe(cfg: SingularConfig, x0: Sequence[float], direction: Sequence[float],
                      radii: Sequence[float], k: int = 0,
                      trunc: Truncation = DEFAULT_TRUNCATION) -> list[tuple[float, float]]:
    """Scaled values ``q_k r^(m-2) ∏ r_i^(2α_i) / 0F1(1-α̃_k; λ² r²/4)`` at
    ``x = x0 + r·direction/|direction|`` for each radius.

    The 0F1 factor carries the λ-dependence of the leading singular part;
    dividing it out leaves a quantity whose limit does not depend on λ.
    """
    x0 = np.asarray(x0, dtype=float)
    d = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise DomainError("direction must be nonzero")
    d = d / norm
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise DomainError("radii must be positive")
    lam = math.fsum(cfg.lambda_sq)
    at = alpha_tilde(cfg, k)
    out = []
    for r in radii:
        x = x0 + r * d
        pp = PointPair(tuple(x), tuple(x0))
        g = geometry(cfg, pp)
        val = q_k(cfg, pp, k, trunc)
        scale = r ** (cfg.m - 2)
        for a, rj in zip(cfg.alpha, g.rj_sq):
            scale *= rj ** a
        damp = zero_f_p(1.0 - at, (0.25 * lam * g.r_sq,), trunc) if lam else 1.0
        out.append((r, float(val * scale / damp)))
    return out
