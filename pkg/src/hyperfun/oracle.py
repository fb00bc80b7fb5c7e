"""High-precision reference values, used by the test suite only.

Every series is summed term by term in mpmath with Pochhammer products built
incrementally along each index; nothing here calls the double-precision
evaluators or their Gamma-quotient paths.  Results are decimal strings.

Fixture files hold one JSON object per line with the fields
``function, params, point, order, digits, value``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import mpmath as mp

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "OraclePrecision",
    "OracleError",
    "oracle_gamma",
    "oracle_pochhammer",
    "oracle_2f1",
    "oracle_fa",
    "oracle_ha",
    "oracle_erdelyi",
    "oracle_ha_continued",
    "oracle_q",
    "write_fixtures",
    "read_fixtures",
]

GUARD_DIGITS = 15


@dataclass(frozen=True)
class OraclePrecision:
    decimal_digits: int = 50
    max_total_order: int = 80

    def __post_init__(self):
        if self.decimal_digits < 30:
            raise DomainError("oracle precision must be at least 30 digits")
        if self.max_total_order < 1:
            raise DomainError("max_total_order must be positive")


class OracleError(ConvergenceError):
    """The oracle series did not settle within ``max_total_order``."""


DEFAULT_PRECISION = OraclePrecision()


def _fmt(v, digits: int) -> str:
    s = mp.nstr(mp.mpf(v), digits)
    return s[:-2] if s.endswith(".0") else s


def _compositions(total: int, dim: int) -> Iterator[tuple[int, ...]]:
    if dim == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, dim - 1):
            yield (head,) + tail


def _is_pole(x) -> bool:
    return x <= 0 and x == int(x)


def oracle_gamma(x, prec: OraclePrecision = DEFAULT_PRECISION) -> str:
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        x = mp.mpf(x)
        if _is_pole(x):
            raise PoleError(f"Γ has a pole at {x}")
        return _fmt(mp.gamma(x), prec.decimal_digits)


def _poch(x, k: int):
    """(x)_k by direct product; negative k means 1/((x-1)(x-2)...(x-|k|))."""
    out = mp.mpf(1)
    if k >= 0:
        for j in range(k):
            out *= x + j
        return out
    for j in range(1, -k + 1):
        if x - j == 0:
            raise PoleError(f"({x})_{k} is infinite")
        out /= x - j
    return out


def oracle_pochhammer(x, k: int, prec: OraclePrecision = DEFAULT_PRECISION) -> str:
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        return _fmt(_poch(mp.mpf(x), int(k)), prec.decimal_digits)


def _one_variable(b, c, x, order: int) -> list:
    """``(b)_m x^m / ((c)_m m!)`` for m = 0..order, built by ratios."""
    out = [mp.mpf(1)]
    for m in range(order):
        out.append(out[-1] * (b + m) * x / ((c + m) * (m + 1)))
    return out


def _sum_by_shells(shell, prec: OraclePrecision, what: str):
    """Accumulate shells 0, 1, ... until three in a row are negligible."""
    tol = mp.mpf(10) ** (-(prec.decimal_digits + 5))
    total = mp.mpf(0)
    small = 0
    for N in range(prec.max_total_order + 1):
        s = shell(N)
        total += s
        small = small + 1 if abs(s) <= tol * abs(total) else 0
        if small == 3:
            return total, N
    raise OracleError(f"{what} oracle needs more than {prec.max_total_order} orders")


def _check_c(c):
    for ci in c:
        if _is_pole(mp.mpf(ci)):
            raise PoleError(f"lower parameter {ci} is a nonpositive integer")


def _fa_parts(a, b, c, x, prec):
    _check_c(c)
    a = mp.mpf(a)
    b = [mp.mpf(v) for v in b]
    c = [mp.mpf(v) for v in c]
    x = [mp.mpf(v) for v in x]
    if not sum(abs(v) for v in x) < 1:
        raise DomainError("oracle series needs Σ|x| < 1")
    seqs = [_one_variable(bi, ci, xi, prec.max_total_order) for bi, ci, xi in zip(b, c, x)]

    def g(N):
        acc = mp.mpf(0)
        for m in _compositions(N, len(x)):
            t = mp.mpf(1)
            for seq, mi in zip(seqs, m):
                t *= seq[mi]
            acc += t
        return acc

    return a, g


def oracle_2f1(a, b, c, x, prec: OraclePrecision = DEFAULT_PRECISION) -> tuple[str, int]:
    """Gauss series at ``|x| < 1``; returns ``(value, order used)``."""
    return oracle_fa(a, (b,), (c,), (x,), prec)


def oracle_fa(a, b: Sequence, c: Sequence, x: Sequence,
              prec: OraclePrecision = DEFAULT_PRECISION) -> tuple[str, int]:
    """Lauricella F_A summed from its definition; returns ``(value, order used)``."""
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        a, g = _fa_parts(a, b, c, x, prec)
        rise = [mp.mpf(1)]
        for N in range(prec.max_total_order):
            rise.append(rise[-1] * (a + N))
        value, order = _sum_by_shells(lambda N: rise[N] * g(N), prec, "F_A")
        return _fmt(value, prec.decimal_digits), order


def _eta_totals(factor_of, eta, count: int, digits: int) -> list:
    """``E_J = Σ_{|q|=J} ∏ factor_of(k, q_k)``: every η multi-index enumerated.

    Stops after three consecutive totals below ``10^-(digits+20)``.
    """
    tol = mp.mpf(10) ** (-(digits + 20))
    out = []
    small = 0
    for J in range(count + 1):
        acc = mp.mpf(0)
        for q in _compositions(J, len(eta)):
            t = mp.mpf(1)
            for k, qk in enumerate(q):
                t *= factor_of(k, qk)
            acc += t
        out.append(acc)
        small = small + 1 if abs(acc) <= tol else 0
        if small == 3:
            return out
    raise OracleError("η-part of the oracle series did not settle")


def _mixed_sum(a, g, E, prec, what: str):
    """Σ_M g(M) Σ_J (a)_{M-J} E_J, shells taken in the ξ-order M."""
    J_max = len(E) - 1
    cache = {}

    def poch(k):
        if k not in cache:
            cache[k] = _poch(a, k)
        return cache[k]

    def shell(M):
        inner = mp.fsum(poch(M - J) * E[J] for J in range(J_max + 1))
        return g(M) * inner

    return _sum_by_shells(shell, prec, what)


def oracle_ha(a, b: Sequence, c: Sequence, xi: Sequence, eta: Sequence,
              prec: OraclePrecision = DEFAULT_PRECISION) -> tuple[str, int]:
    """H_A^(n,p) summed over all n + p indices (no η-collapse)."""
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        a, g = _fa_parts(a, b, c, xi, prec)
        eta = [mp.mpf(v) for v in eta]
        powers = [[mp.mpf(1)] for _ in eta]
        for k, y in enumerate(eta):
            for j in range(prec.max_total_order):
                powers[k].append(powers[k][-1] * y / (j + 1))
        E = _eta_totals(lambda k, q: powers[k][q], eta, prec.max_total_order,
                         prec.decimal_digits) if eta else [mp.mpf(1)]
        value, order = _mixed_sum(a, g, E, prec, "H_A")
        return _fmt(value, prec.decimal_digits), order


def oracle_erdelyi(a, b: Sequence, d: Sequence, c: Sequence, xi: Sequence, eta: Sequence,
                   prec: OraclePrecision = DEFAULT_PRECISION) -> tuple[str, int]:
    """Erdélyi's H_{n+p,n} with ``b = (b_1..b_{n+p})``, ``d = (d_{n+1}..d_{n+p})``."""
    n = len(c)
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        a, g = _fa_parts(a, b[:n], c, xi, prec)
        bs = [mp.mpf(v) for v in b[n:]]
        ds = [mp.mpf(v) for v in d]
        eta = [mp.mpf(v) for v in eta]
        seqs = []
        for bk, dk, y in zip(bs, ds, eta):
            s = [mp.mpf(1)]
            for j in range(prec.max_total_order):
                s.append(s[-1] * (bk + j) * (dk + j) * y / (j + 1))
            seqs.append(s)
        E = _eta_totals(lambda k, q: seqs[k][q], eta, prec.max_total_order,
                         prec.decimal_digits) if eta else [mp.mpf(1)]
        value, order = _mixed_sum(a, g, E, prec, "H_{n+p,n}")
        return _fmt(value, prec.decimal_digits), order


def _eta_series(a, y, fa_of_shift):
    """Σ_j y^j / ((1-a)_j j!) · F(a - j), summed until negligible."""
    total = mp.mpf(0)
    coef = mp.mpf(1)
    small = 0
    for j in range(10_000):
        term = coef * fa_of_shift(j)
        total += term
        small = small + 1 if abs(term) <= mp.eps * abs(total) else 0
        if small == 3:
            return total
        coef *= y / ((1 - a + j) * (j + 1))
    raise OracleError("η-series did not converge")


def oracle_ha_continued(a, b: Sequence, c: Sequence, xi: Sequence, eta: Sequence,
                        prec: OraclePrecision = OraclePrecision(30)) -> str:
    """H_A at ``ξ_i <= 0`` of any size, n in {1, 2}.

    n = 1 uses mpmath's own 2F1 in the η-expansion.  n = 2 writes F_A as a
    one-dimensional Euler integral over t_1 whose integrand is a 2F1 in the
    second variable; the endpoint powers are removed by ``t = s^(1/b_1)`` on
    ``[0, 1/2]`` and the mirror substitution on ``[1/2, 1]``.
    """
    n = len(xi)
    if n not in (1, 2) or len(b) != n or len(c) != n:
        raise DomainError("continued oracle supports n = 1 or 2")
    if any(v > 0 for v in xi):
        raise DomainError("continued oracle needs ξ_i <= 0")
    _check_c(c)
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        a = mp.mpf(a)
        b = [mp.mpf(v) for v in b]
        c = [mp.mpf(v) for v in c]
        xi = [mp.mpf(v) for v in xi]
        y = -mp.fsum(mp.mpf(v) for v in eta)
        if y != 0 and _is_pole(1 - a):
            raise PoleError("H_A has a pole at this a once η != 0")
        if n == 1:
            value = _eta_series(a, y, lambda j: mp.hyp2f1(a - j, b[0], c[0], xi[0]))
            return _fmt(value, prec.decimal_digits)
        p, q = b[0], c[0] - b[0]
        if not (p > 0 and q > 0):
            raise DomainError("n = 2 continued oracle needs c_1 > b_1 > 0")

        def g(t):
            u = 1 - xi[0] * t
            return _eta_series(a, y, lambda j: u ** (j - a) * mp.hyp2f1(a - j, b[1], c[1], xi[1] / u))

        half = mp.mpf(1) / 2
        lo = mp.quad(lambda s: g(s ** (1 / p)) * (1 - s ** (1 / p)) ** (q - 1) / p, [0, half ** p])
        hi = mp.quad(lambda v: g(1 - v ** (1 / q)) * (1 - v ** (1 / q)) ** (p - 1) / q, [0, half ** q])
        return _fmt((lo + hi) / mp.beta(p, q), prec.decimal_digits)


def oracle_q(m: int, alpha: Sequence, lambda_sq: Sequence, x: Sequence, x0: Sequence,
             k: int, prec: OraclePrecision = OraclePrecision(30)) -> str:
    """Fundamental solution q_k composed in mpmath from its closed form.

    H_A comes from the naive series when ``Σ|ξ| < 1/2`` and from
    :func:`oracle_ha_continued` otherwise (n <= 2 there).
    """
    n = len(alpha)
    if not 0 <= k <= n:
        raise DomainError("k outside [0, n]")
    with mp.workdps(prec.decimal_digits + GUARD_DIGITS):
        al = [mp.mpf(v) for v in alpha]
        x = [mp.mpf(v) for v in x]
        x0 = [mp.mpf(v) for v in x0]
        r2 = mp.fsum((u - v) ** 2 for u, v in zip(x, x0))
        xi = [-4 * x[j] * x0[j] / r2 for j in range(n)]
        eta = [-mp.mpf(v) * r2 / 4 for v in lambda_sq]
        at = mp.mpf(m) / 2 + k - 1 - mp.fsum(al[:k]) + mp.fsum(al[k:])
        g = 2 ** (2 * at - m) * mp.gamma(at) / mp.pi ** (mp.mpf(m) / 2)
        for i in range(n):
            if i < k:
                g *= mp.gamma(1 - al[i]) / mp.gamma(2 - 2 * al[i])
            else:
                g *= mp.gamma(al[i]) / mp.gamma(2 * al[i])
        b = [1 - al[i] if i < k else al[i] for i in range(n)]
        c = [2 - 2 * al[i] if i < k else 2 * al[i] for i in range(n)]
        if sum(abs(v) for v in xi) < 0.5:
            h = mp.mpf(oracle_ha(at, b, c, xi, eta, OraclePrecision(prec.decimal_digits, 400))[0])
        else:
            h = mp.mpf(oracle_ha_continued(at, b, c, xi, eta, prec))
        pref = g * r2 ** (-at)
        for i in range(k):
            pref *= (x[i] * x0[i]) ** (1 - 2 * al[i])
        return _fmt(pref * h, prec.decimal_digits)


def write_fixtures(path: str | Path, records: Sequence[dict]) -> None:
    """One JSON object per line, keys sorted, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            missing = {"function", "params", "point", "order", "digits", "value"} - rec.keys()
            if missing:
                raise DomainError(f"fixture record lacks {sorted(missing)}")
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_fixtures(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
