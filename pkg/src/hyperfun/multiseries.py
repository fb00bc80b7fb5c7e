"""Multi-index series: Lauricella's F_A and Erdélyi's H_{n+p,n}.

The n-fold sums are organised in shells of constant total order.  Because
the per-variable factors ``(b_i)_{m_i} x_i^{m_i} / ((c_i)_{m_i} m_i!)`` only
couple through the joint numerator ``(a)_{|m|}``, the shell sum

    g_M = Σ_{|m| = M} ∏_i t_i(m_i)

is the degree-M coefficient of the product of one-variable power series, so
it is obtained by repeated convolution instead of enumerating multi-indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .scalar import DEFAULT_TRUNCATION, Truncation, is_nonpositive_integer

__all__ = [
    "MultiIndex",
    "HaParams",
    "ErdelyiParams",
    "iterate_multi_indices",
    "compositions",
    "lauricella_fa",
    "erdelyi_h",
    "rising",
    "pochhammer_table",
    "variable_terms",
    "shell_coefficients",
    "scaled_shell_coefficients",
    "sum_shells",
    "mixed_shells",
]

MultiIndex = tuple[int, ...]


def _as_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in np.atleast_1d(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class HaParams:
    """Parameters ``(a; b_1..b_n; c_1..c_n)`` shared by F_A^(n) and H_A^(n,p)."""

    a: float
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", _as_tuple(self.b))
        object.__setattr__(self, "c", _as_tuple(self.c))
        if len(self.b) < 1:
            raise DomainError("need at least one (b, c) pair")
        if len(self.b) != len(self.c):
            raise DomainError("b and c must have the same length")
        for ci in self.c:
            if is_nonpositive_integer(ci):
                raise DomainError(f"lower parameter c={ci!r} is a nonpositive integer")

    @property
    def n(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class ErdelyiParams:
    """Parameters of H_{n+p,n}: ``a``, ``b_1..b_{n+p}``, ``d_{n+1}..d_{n+p}``, ``c_1..c_n``."""

    a: float
    b: tuple[float, ...]
    d: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))
        object.__setattr__(self, "c", _as_tuple(self.c))
        if len(self.b) != len(self.c) + len(self.d):
            raise DomainError("need len(b) == len(c) + len(d)")
        for ci in self.c:
            if is_nonpositive_integer(ci):
                raise DomainError(f"lower parameter c={ci!r} is a nonpositive integer")

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def p(self) -> int:
        return len(self.d)


def compositions(total: int, dim: int) -> Iterator[MultiIndex]:
    """All ``dim``-tuples of nonnegative integers summing to ``total``.

    The first component runs from ``total`` down to 0, recursively.
    """
    if dim == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, dim - 1):
            yield (first,) + rest


def iterate_multi_indices(dim: int, max_total: int) -> Iterator[MultiIndex]:
    """Every multi-index of length ``dim`` with total ``<= max_total``,
    in nondecreasing total order."""
    if dim < 1:
        raise DomainError("dim must be >= 1")
    if max_total < 0:
        raise DomainError("max_total must be >= 0")
    for total in range(max_total + 1):
        yield from compositions(total, dim)


def rising(base: float, order: int) -> np.ndarray:
    """``[(base)_0, (base)_1, ..., (base)_order]``; may overflow to inf at the tail."""
    out = np.empty(order + 1)
    out[0] = 1.0
    if order:
        with np.errstate(over="ignore"):
            out[1:] = np.cumprod(base + np.arange(order, dtype=float))
    return out


def pochhammer_table(base: float, order: int, *, need_negative: bool = True) -> np.ndarray:
    """``(base)_d`` for ``d = -order..order``; index ``d + order``.

    Negative shifts are reciprocals of falling products.  A vanishing factor
    raises :class:`PoleError` only when ``need_negative`` is set.
    """
    out = np.empty(2 * order + 1)
    out[order:] = rising(base, order)
    if order:
        factors = base - np.arange(1, order + 1, dtype=float)
        if need_negative:
            if np.any(factors == 0.0):
                bad = int(np.argmax(factors == 0.0)) + 1
                raise PoleError(f"({base})_{-bad} requires Gamma({base - bad}), a pole")
            out[:order] = (1.0 / np.cumprod(factors))[::-1]
        else:
            out[:order] = np.nan
    return out


def variable_terms(b: float, c: float, x: float, order: int) -> np.ndarray:
    """``(b)_k x^k / ((c)_k k!)`` for ``k = 0..order``."""
    out = np.empty(order + 1)
    out[0] = 1.0
    if order:
        k = np.arange(order, dtype=float)
        out[1:] = np.cumprod((b + k) / ((c + k) * (k + 1.0)) * x)
    return out


def shell_coefficients(b: Sequence[float], c: Sequence[float],
                       x: Sequence[float], order: int) -> np.ndarray:
    """``g_M = Σ_{|m|=M} ∏_i (b_i)_{m_i} x_i^{m_i} / ((c_i)_{m_i} m_i!)``."""
    g = variable_terms(b[0], c[0], x[0], order)
    for bi, ci, xi in zip(b[1:], c[1:], x[1:]):
        g = np.convolve(g, variable_terms(bi, ci, xi, order))[: order + 1]
    return g


def sum_shells(shells: np.ndarray, rel_tol: float, what: str = "series") -> float:
    """Sum shell values, accepting once three consecutive shells fall below
    ``rel_tol`` times the running sum."""
    # shells past the cutoff may overflow; they are never used
    with np.errstate(over="ignore", invalid="ignore"):
        partial = np.cumsum(shells)
        small = np.abs(shells) <= rel_tol * np.abs(partial)
    run = 0
    for i, flag in enumerate(small):
        if not np.isfinite(partial[i]):
            raise ConvergenceError(f"{what}: shell sums overflowed at total order {i}")
        run = run + 1 if flag else 0
        if run == 3:
            return float(partial[i])
    raise ConvergenceError(
        f"{what}: shells had not contracted below rel_tol={rel_tol:g} "
        f"by total order {len(shells) - 1}")


# beyond this total order (a)_M and g_M leave the double range
DIRECT_SHELL_ORDER = 150


def _log_abs(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values)), np.sign(values)


def _scaled_variable_terms(b: float, c: float, x: float, order: int):
    """``log|u_k|`` and ``sign u_k`` for ``u_k = (b)_k x^k / (c)_k``."""
    k = np.arange(order, dtype=float)
    ratio = (b + k) / (c + k) * x
    lr, sr = _log_abs(ratio)
    logs = np.concatenate(([0.0], np.cumsum(lr)))
    signs = np.concatenate(([1.0], np.cumprod(sr)))
    return logs, signs


def scaled_shell_coefficients(b: Sequence[float], c: Sequence[float],
                              x: Sequence[float], order: int) -> np.ndarray:
    """``M! g_M`` (see :func:`shell_coefficients`), which stays bounded by
    a power of ``Σ|x_i|`` times a polynomial.

    The factorials turn the ordinary convolution into a binomial one; the
    binomials are combined with the terms in log space.
    """
    lg = np.array([math.lgamma(j + 1.0) for j in range(order + 1)])
    logs, signs = _scaled_variable_terms(b[0], c[0], x[0], order)
    for bi, ci, xi in zip(b[1:], c[1:], x[1:]):
        lu, su = _scaled_variable_terms(bi, ci, xi, order)
        new_logs = np.full(order + 1, -np.inf)
        new_signs = np.zeros(order + 1)
        for M in range(order + 1):
            j = np.arange(M + 1)
            expo = lg[M] - lg[j] - lg[M - j] + lu[j] + logs[M - j]
            top = np.max(expo)
            if not np.isfinite(top):
                continue
            val = math.fsum(su[j] * signs[M - j] * np.exp(expo - top))
            if val != 0.0:
                new_logs[M] = top + math.log(abs(val))
                new_signs[M] = math.copysign(1.0, val)
        logs, signs = new_logs, new_signs
    with np.errstate(over="ignore"):
        return signs * np.exp(logs)


def lauricella_fa(params: HaParams, x: Sequence[float],
                  trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Lauricella F_A^(n) by its n-fold series, ``Σ|x_i| < 1``.

    Up to total order ``DIRECT_SHELL_ORDER`` the shells are ``(a)_M g_M``;
    past it they are formed as ``((a)_M / M!) (M! g_M)`` so that neither
    factor overflows.
    """
    x = _as_tuple(x)
    if len(x) != params.n:
        raise DomainError(f"expected {params.n} arguments, got {len(x)}")
    if not sum(abs(v) for v in x) < 1.0:
        raise DomainError("F_A series needs |x_1| + ... + |x_n| < 1")
    order = trunc.max_order
    if order <= DIRECT_SHELL_ORDER:
        g = shell_coefficients(params.b, params.c, x, order)
        with np.errstate(over="ignore", invalid="ignore"):
            shells = rising(params.a, order) * g
    else:
        k = np.arange(order, dtype=float)
        weights = np.concatenate(([1.0], np.cumprod((params.a + k) / (k + 1.0))))
        shells = weights * scaled_shell_coefficients(params.b, params.c, x, order)
    return sum_shells(shells, trunc.rel_tol, "F_A")


def _pair_terms(b: float, d: float, y: float, order: int) -> np.ndarray:
    out = np.empty(order + 1)
    out[0] = 1.0
    if order:
        k = np.arange(order, dtype=float)
        out[1:] = np.cumprod((b + k) * (d + k) / (k + 1.0) * y)
    return out


def erdelyi_h(params: ErdelyiParams, xi: Sequence[float], eta: Sequence[float],
              trunc: Truncation = DEFAULT_TRUNCATION) -> float:
    """Erdélyi's H_{n+p,n} as a formal (n+p)-fold series.

    No convergence region is known in closed form; the sum is accepted only
    when its total-order shells contract below the tolerance.
    """
    xi = _as_tuple(xi)
    eta = tuple(float(v) for v in eta)
    n, p = params.n, params.p
    if len(xi) != n or len(eta) != p:
        raise DomainError("argument counts do not match the parameters")
    order = trunc.max_order
    g = shell_coefficients(params.b[:n], params.c, xi, order)
    if p == 0 or all(v == 0.0 for v in eta):
        return sum_shells(rising(params.a, order) * g, trunc.rel_tol, "H_{n+p,n}")
    e = _pair_terms(params.b[n], params.d[0], eta[0], order)
    for bk, dk, yk in zip(params.b[n + 1:], params.d[1:], eta[1:]):
        e = np.convolve(e, _pair_terms(bk, dk, yk, order))[: order + 1]
    return sum_shells(mixed_shells(params.a, g, e, order), trunc.rel_tol, "H_{n+p,n}")


def mixed_shells(a: float, g: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
    """Shells ``T = M + J`` of ``Σ (a)_{M-J} g_M e_J``."""
    poch = pochhammer_table(a, order)
    M = np.arange(order + 1)
    # weights[M, J] = (a)_{M-J}
    weights = poch[(M[:, None] - M[None, :]) + order]
    with np.errstate(over="ignore", invalid="ignore"):
        block = g[:, None] * e[None, :] * weights
    total = (M[:, None] + M[None, :]).ravel()
    shells = np.bincount(total, weights=block.ravel(), minlength=2 * order + 1)
    # shells beyond `order` are incomplete
    return shells[: order + 1]
