"""Expansions of F_A^(n) and H_A^(n,p) into products of fewer-variable
functions.

The non-recursive F_A expansion runs over an upper-triangular array of
nonnegative integers ``s[i, j]`` (``2 <= i <= j <= n``).  From it two
integer vectors are derived,

    A(l) = Σ_{i=2}^{l+1} Σ_{j=i}^{n} s[i, j]
    B(l) = Σ_{i=2}^{l} s[i, l] + Σ_{i=l+1}^{n} s[l+1, i]

and each term is a product of n Gauss functions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .confluent import EvalPoint
from .errors import ConvergenceError, DomainError
from .multiseries import (HaParams, compositions, iterate_multi_indices,
                          lauricella_fa)
from .scalar import (DEFAULT_TRUNCATION, Truncation, gamma_ratio, hyp2f1,
                     pochhammer, zero_f_p)

__all__ = [
    "SMatrix",
    "ABPair",
    "s_positions",
    "iterate_smatrices",
    "ab_from_s",
    "fa_decomposed",
    "fa_decomposed_transformed",
    "fa_recursive",
    "ha_decomposed",
    "gamma_identity_check",
    "s_sum_closed_form",
    "levin_u",
]

DEFAULT_OUTER_ORDER = 24


@lru_cache(maxsize=None)
def s_positions(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs ``(i, j)``, ``2 <= i <= j <= n``, in row-major order."""
    return tuple((i, j) for i in range(2, n + 1) for j in range(i, n + 1))


@dataclass(frozen=True)
class SMatrix:
    """Upper-triangular array ``s[i, j]``, ``2 <= i <= j <= n``, stored flat
    in the order of :func:`s_positions`."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(v) for v in self.entries))
        if len(self.entries) != self.n * (self.n - 1) // 2:
            raise DomainError(f"SMatrix for n={self.n} needs {self.n * (self.n - 1) // 2} entries")
        if any(v < 0 for v in self.entries):
            raise DomainError("SMatrix entries must be nonnegative")

    @classmethod
    def from_dict(cls, n: int, values: dict[tuple[int, int], int]) -> "SMatrix":
        pos = s_positions(n)
        for key in values:
            if key not in pos:
                raise DomainError(f"s{key} is not an entry for n={n}")
        return cls(n, tuple(values.get(ij, 0) for ij in pos))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[s_positions(self.n).index(ij)]

    def total(self) -> int:
        return sum(self.entries)

    def factorial_product(self) -> int:
        out = 1
        for v in self.entries:
            out *= math.factorial(v)
        return out


@dataclass(frozen=True)
class ABPair:
    A: tuple[int, ...]
    B: tuple[int, ...]


def iterate_smatrices(n: int, max_total: int) -> Iterator[SMatrix]:
    """SMatrix values in nondecreasing total, up to ``max_total``."""
    dim = n * (n - 1) // 2
    if dim == 0:
        yield SMatrix(n, ())
        return
    for entries in iterate_multi_indices(dim, max_total):
        yield SMatrix(n, entries)


def _smatrices_of_total(n: int, total: int) -> Iterator[SMatrix]:
    dim = n * (n - 1) // 2
    if dim == 0:
        if total == 0:
            yield SMatrix(n, ())
        return
    for entries in compositions(total, dim):
        yield SMatrix(n, entries)


def ab_from_s(s: SMatrix, n: int | None = None) -> ABPair:
    """The vectors ``A(l, n)`` and ``B(l, n)``, ``l = 1..n``."""
    n = s.n if n is None else n
    if n != s.n:
        raise DomainError("SMatrix built for a different n")
    get = dict(zip(s_positions(n), s.entries)).get
    A, B = [], []
    for l in range(1, n + 1):
        A.append(sum(get((i, j), 0) for i in range(2, l + 2) for j in range(i, n + 1)))
        B.append(sum(get((i, l), 0) for i in range(2, l + 1))
                 + sum(get((l + 1, i), 0) for i in range(l + 1, n + 1)))
    return ABPair(tuple(A), tuple(B))


def _check_x(params: HaParams, x) -> tuple[float, ...]:
    x = tuple(float(v) for v in np.atleast_1d(x))
    if len(x) != params.n:
        raise DomainError(f"expected {params.n} arguments, got {len(x)}")
    return x


def _sum_outer(shell_iter, rel_tol: float, max_outer: int, what: str) -> float:
    """Accumulate shells ``0..max_outer`` with the three-shell stopping rule."""
    total = 0.0
    run = 0
    for order in range(max_outer + 1):
        shell = shell_iter(order)
        total += shell
        if not math.isfinite(total):
            raise ConvergenceError(f"{what}: outer sum overflowed")
        run = run + 1 if abs(shell) <= rel_tol * abs(total) else 0
        if run == 3:
            return total
    raise ConvergenceError(f"{what}: outer sum had not contracted by order {max_outer}")


def fa_decomposed(params: HaParams, x: Sequence[float],
                  trunc: Truncation = DEFAULT_TRUNCATION,
                  max_outer: int = DEFAULT_OUTER_ORDER) -> float:
    """F_A^(n) as a sum over SMatrix values of products of n Gauss functions
    ``F(a + A(l), b_l + B(l); c_l + B(l); x_l)``."""
    x = _check_x(params, x)
    if not all(abs(v) < 1.0 for v in x):
        raise DomainError("each Gauss factor needs |x_l| < 1")
    n, a = params.n, params.a

    @lru_cache(maxsize=None)
    def factor(l: int, Al: int, Bl: int) -> float:
        bl, cl = params.b[l], params.c[l]
        return (pochhammer(bl, Bl) / pochhammer(cl, Bl) * x[l] ** Bl
                * hyp2f1(a + Al, bl + Bl, cl + Bl, x[l], trunc))

    def shell(order: int) -> float:
        terms = []
        for s in _smatrices_of_total(n, order):
            ab = ab_from_s(s)
            t = pochhammer(a, ab.A[-1]) / s.factorial_product()
            for l in range(n):
                t *= factor(l, ab.A[l], ab.B[l])
            terms.append(t)
        return math.fsum(terms)

    if n == 1:
        return shell(0)
    return _sum_outer(shell, trunc.rel_tol, max_outer, "F_A decomposition")


def fa_decomposed_transformed(params: HaParams, x: Sequence[float],
                              trunc: Truncation = DEFAULT_TRUNCATION,
                              max_outer: int = DEFAULT_OUTER_ORDER) -> float:
    """The same expansion after the Pfaff transformation of every Gauss factor.

    Each factor becomes ``(1-x_l)^(-b_l) (x_l/(1-x_l))^B(l)
    F(c_l - a + B(l) - A(l), b_l + B(l); c_l + B(l); x_l/(x_l - 1))``, which
    stays meaningful for large negative ``x_l``.
    """
    x = _check_x(params, x)
    if not all(v < 1.0 for v in x):
        raise DomainError("transformed expansion needs x_l < 1")
    n, a = params.n, params.a
    z = [v / (v - 1.0) for v in x]
    w = [v / (1.0 - v) for v in x]
    lead = math.prod((1.0 - v) ** (-bl) for v, bl in zip(x, params.b))

    @lru_cache(maxsize=None)
    def factor(l: int, Al: int, Bl: int) -> float:
        bl, cl = params.b[l], params.c[l]
        return (pochhammer(bl, Bl) / pochhammer(cl, Bl) * w[l] ** Bl
                * hyp2f1(cl - a + Bl - Al, bl + Bl, cl + Bl, z[l], trunc))

    def shell(order: int) -> float:
        terms = []
        for s in _smatrices_of_total(n, order):
            ab = ab_from_s(s)
            t = pochhammer(a, ab.A[-1]) / s.factorial_product()
            for l in range(n):
                t *= factor(l, ab.A[l], ab.B[l])
            terms.append(t)
        return math.fsum(terms)

    if n == 1:
        return lead * shell(0)
    return lead * _sum_outer(shell, trunc.rel_tol, max_outer,
                             "transformed F_A decomposition")


def fa_recursive(params: HaParams, x: Sequence[float],
                 trunc: Truncation = DEFAULT_TRUNCATION,
                 max_outer: int = DEFAULT_OUTER_ORDER) -> float:
    """The recursive expansion: a sum over ``(i_2..i_n)`` of a Gauss function
    in ``x_1`` times an F_A^(n-1) in ``x_2..x_n`` (direct series).

    Only n = 2 and n = 3 are supported; beyond that the nested cost grows
    too fast to be useful next to :func:`fa_decomposed`.
    """
    x = _check_x(params, x)
    n, a = params.n, params.a
    if n not in (2, 3):
        raise DomainError("recursive expansion is provided for n = 2, 3")
    if not (abs(x[0]) < 1.0 and sum(abs(v) for v in x[1:]) < 1.0):
        raise DomainError("need |x_1| < 1 and |x_2| + ... + |x_n| < 1")
    b1, c1 = params.b[0], params.c[0]

    def shell(order: int) -> float:
        lead = (pochhammer(a, order) * pochhammer(b1, order) / pochhammer(c1, order)
                * x[0] ** order * hyp2f1(a + order, b1 + order, c1 + order, x[0], trunc))
        if lead == 0.0:
            return 0.0
        # F_A(a+order, ...) needs more shells as order grows
        inner_trunc = replace(trunc, max_order=trunc.max_order + 2 * order)
        terms = []
        for idx in compositions(order, n - 1):
            t = 1.0
            for k, ik in enumerate(idx, start=1):
                t *= (pochhammer(params.b[k], ik) / pochhammer(params.c[k], ik)
                      * x[k] ** ik / math.factorial(ik))
            if t == 0.0:
                continue
            inner = HaParams(a + order,
                             tuple(params.b[k] + ik for k, ik in enumerate(idx, start=1)),
                             tuple(params.c[k] + ik for k, ik in enumerate(idx, start=1)))
            terms.append(t * lauricella_fa(inner, x[1:], inner_trunc))
        return lead * math.fsum(terms)

    return _sum_outer(shell, trunc.rel_tol, max_outer, "recursive F_A expansion")


def ha_decomposed(params: HaParams, pt: EvalPoint, trunc: Truncation = DEFAULT_TRUNCATION,
                  max_outer: int = 160) -> float:
    """H_A^(n,p) as ``F_A · 0Fp`` plus a double sum of shifted products.

        Σ_k Σ_{l=1}^{k} Σ_{|i|=k} C(k-1, l-1) (-1)^(k+l) k! ∏(b)_i / ((1-a)_l ∏(c)_i)
            · x^i/i! · (Σy)^l/l! · F_A(a+k, b+i; c+i; x) · 0Fp(1-a+l; -y)

    The inner sum over ``|j| = l`` of ``y^j / j!`` is ``(Σ y)^l / l!``.  Each
    k-shell is accumulated with exactly rounded summation because the
    ``(-1)^(k+l)`` terms cancel.

    For positive ξ the shells contract only like ``(Σξ / (1 - Σξ))^k``, so
    near ``Σξ = 0.4`` about a hundred shells are needed and n = 2 takes
    seconds.
    """
    x = pt.xi
    if len(x) != params.n:
        raise DomainError("point and parameters disagree on n")
    a, n = params.a, params.n
    y = pt.eta
    ysum = math.fsum(y)
    neg_y = [-v for v in y]

    @lru_cache(maxsize=None)
    def zfp(l: int) -> float:
        return zero_f_p(1.0 - a + l, neg_y, trunc)

    def shell(k: int) -> float:
        if k == 0:
            return lauricella_fa(params, x, trunc) * zfp(0)
        if ysum == 0.0:
            return 0.0
        # F_A(a+k, ...) needs more shells as k grows
        inner_trunc = replace(trunc, max_order=trunc.max_order + 2 * k)
        y_part = math.fsum(
            math.comb(k - 1, l - 1) * (-1) ** (k + l) * ysum ** l / math.factorial(l)
            / pochhammer(1.0 - a, l) * zfp(l)
            for l in range(1, k + 1))
        terms = []
        for i in compositions(k, n):
            t = float(math.factorial(k))
            for bl, cl, xl, il in zip(params.b, params.c, x, i):
                t *= pochhammer(bl, il) / pochhammer(cl, il) * xl ** il / math.factorial(il)
            if t == 0.0:
                continue
            inner = HaParams(a + k, tuple(bl + il for bl, il in zip(params.b, i)),
                             tuple(cl + il for cl, il in zip(params.c, i)))
            terms.append(t * lauricella_fa(inner, x, inner_trunc))
        return math.fsum(terms) * y_part

    return _sum_outer(shell, trunc.rel_tol, max_outer, "H_A decomposition")


def _alpha_tilde0(m: int, alpha: Sequence[float]) -> float:
    return m / 2.0 - 1.0 + math.fsum(alpha)


def s_sum_closed_form(m: int, alpha: Sequence[float]) -> float:
    """Closed value of the s-sum below, ``Γ(m/2 - 1) Γ(α̃₀)^(n-1) / ∏Γ(α̃₀ - α_l)``.

    For n = 2 this is Gauss's summation theorem; for n = 3 summing ``s[3,3]``
    and then ``s[2,2] + s[2,3]`` gives two Gauss sums whose product it is.
    """
    a0 = _alpha_tilde0(m, alpha)
    n = len(alpha)
    return gamma_ratio((m / 2.0 - 1.0,) + (a0,) * (n - 1), tuple(a0 - al for al in alpha))


def gamma_identity_check(m: int, alpha: Sequence[float], depth: int = 16,
                         dps: int = 50) -> tuple[float, float]:
    """Both sides of the Gamma-product identity for the limit of the s-sum

        Σ_s (α̃₀)_{A(n)} / ∏s! ∏_l (α_l)_{B(l)} (α̃₀-α_l)_{A(l)-B(l)} / (α̃₀)_{A(l)}
            =?  Γ(m/2) Γ(α̃₀)^(n-1) / ∏Γ(α̃₀ - α_l)

    with ``α̃₀ = m/2 - 1 + Σα``.  Returns ``(s_sum, right_side)``.

    The terms decay only algebraically, so plain truncation is useless at
    double precision.  The sum is evaluated in ``dps``-digit arithmetic:
    the last index ``s[n,n]`` enters every term as a Gauss series at unit
    argument and is summed in closed form; each remaining index is summed
    to ``4·(outer indices) + 4 + depth`` terms and extrapolated with
    :func:`levin_u`, starting past the transition region whose width grows
    with the outer indices.  Supported for n <= 3.

    The right side is the usually quoted one.  It coincides with the limit
    only when ``Γ(m/2) = Γ(m/2 - 1)``, i.e. m = 4 (for n = 1 the sum is 1
    while the right side is m/2 - 1).  :func:`s_sum_closed_form` gives the
    value valid for every m.
    """
    import mpmath

    alpha = tuple(float(v) for v in alpha)
    n = len(alpha)
    if not 1 <= n <= 3:
        raise DomainError("the s-sum is evaluated for n = 1, 2, 3")
    if not all(0.0 < 2 * al < 1.0 for al in alpha):
        raise DomainError("need 0 < 2 α_l < 1")
    if m < 3:
        raise DomainError("need m >= 3")
    a0f = _alpha_tilde0(m, alpha)
    rhs = gamma_ratio((m / 2.0,) + (a0f,) * (n - 1), tuple(a0f - al for al in alpha))
    if n == 1:
        return 1.0, rhs

    dim = n * (n - 1) // 2
    with mpmath.workdps(dps):
        al = [mpmath.mpf(v) for v in alpha]
        a0 = mpmath.mpf(m) / 2 - 1 + mpmath.fsum(al)

        def reduced(prefix: tuple[int, ...]):
            ab = ab_from_s(SMatrix(n, prefix + (0,)))
            t = mpmath.rf(a0, ab.A[-1])
            for v in prefix:
                t /= mpmath.factorial(v)
            for l in range(n):
                t *= (mpmath.rf(al[l], ab.B[l]) * mpmath.rf(a0 - al[l], ab.A[l] - ab.B[l])
                      / mpmath.rf(a0, ab.A[l]))
            ga, gb, gc = al[n - 2] + ab.B[n - 2], al[n - 1] + ab.B[n - 1], a0 + ab.A[n - 2]
            return t * mpmath.gammaprod([gc, gc - ga - gb], [gc - ga, gc - gb])

        def level(prefix: tuple[int, ...]):
            if len(prefix) == dim - 1:
                return reduced(prefix)
            start = 4 * sum(prefix) + 4 if prefix else 0
            terms = [level(prefix + (v,)) for v in range(start + depth + 1)]
            return levin_u(list(itertools.accumulate(terms)), terms, depth, start, dps=dps)

        value = level(())
    return float(value), rhs


def levin_u(partial: Sequence, terms: Sequence, depth: int = 12,
            start: int | None = None, dps: int = 40):
    """Levin u-transform of a sequence of partial sums.

    ``terms[k]`` is the k-th summand, ``partial[k]`` the sum through it.  Uses
    ``partial[start : start + depth + 1]`` (by default the last ``depth + 1``
    entries).  Meant for series whose terms behave like
    ``k^-p (c0 + c1/k + ...)``.  The alternating binomial weights amplify
    rounding by roughly ``start^depth``, so inputs should carry that many
    extra digits when ``start`` is large.  Returns an mpmath number.
    """
    import mpmath

    partial = list(partial)
    terms = list(terms)
    if start is None:
        start = len(partial) - depth - 1
    if start < 0 or start + depth >= len(partial):
        raise DomainError("not enough partial sums for the requested depth")
    with mpmath.workdps(dps):
        num = mpmath.mpf(0)
        den = mpmath.mpf(0)
        last = mpmath.mpf(start + depth + 1)
        for j in range(depth + 1):
            idx = start + j
            omega = (idx + 1) * mpmath.mpf(terms[idx])
            if omega == 0:
                return +mpmath.mpf(partial[idx])
            c = (-1) ** j * mpmath.binomial(depth, j) * (mpmath.mpf(idx + 1) / last) ** (depth - 1)
            num += c * mpmath.mpf(partial[idx]) / omega
            den += c / omega
        return num / den
