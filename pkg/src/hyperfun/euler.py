"""Exact polynomial arithmetic and Euler operators ``δ_i = x_i ∂/∂x_i``,
``σ_j = y_j ∂/∂y_j``.

Everything is over :class:`fractions.Fraction`, so the operator identities
used by the decomposition formulas can be checked with ``==`` rather than a
tolerance.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .multiseries import compositions

__all__ = [
    "RationalPoly",
    "EulerOp",
    "apply_euler",
    "rising_factorial_op",
    "lemma1_x_rhs",
    "lemma1_y_rhs",
    "lemma1_y_rhs_single",
    "random_poly",
]


class RationalPoly:
    """Polynomial in ``x_1..x_n, y_1..y_p`` with exact rational coefficients.

    Exponent tuples have length ``n + p``; x-variables come first.  Zero
    coefficients are never stored, so ``==`` is structural equality.
    """

    __slots__ = ("n", "p", "_terms")

    def __init__(self, n: int, p: int, terms: Mapping[tuple[int, ...], object] = ()):
        if n < 0 or p < 0:
            raise DomainError("variable counts must be nonnegative")
        self.n, self.p = n, p
        clean: dict[tuple[int, ...], Fraction] = {}
        for mono, coef in dict(terms).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n + p or any(e < 0 for e in mono):
                raise DomainError(f"bad exponent tuple {mono}")
            c = clean.get(mono, Fraction(0)) + Fraction(coef)
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self._terms = clean

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    @classmethod
    def zero(cls, n: int, p: int) -> "RationalPoly":
        return cls(n, p)

    @classmethod
    def constant(cls, n: int, p: int, c) -> "RationalPoly":
        return cls(n, p, {(0,) * (n + p): c})

    @classmethod
    def monomial(cls, n: int, p: int, exps: Sequence[int], c=1) -> "RationalPoly":
        return cls(n, p, {tuple(exps): c})

    def _same_ring(self, other: "RationalPoly"):
        if (self.n, self.p) != (other.n, other.p):
            raise DomainError("polynomials live in different variable sets")

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        self._same_ring(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return RationalPoly(self.n, self.p, out)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(self.n, self.p, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def scale(self, c) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly(self.n, self.p, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            return self.scale(other)
        self._same_ring(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return RationalPoly(self.n, self.p, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return (self.n, self.p) == (other.n, other.p) and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.p, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def derivative(self, orders: Sequence[int]) -> "RationalPoly":
        """Mixed partial ``∂^|orders|`` with one order per variable."""
        if len(orders) != self.n + self.p:
            raise DomainError("one derivative order per variable")
        out = {}
        for mono, c in self._terms.items():
            if any(e < o for e, o in zip(mono, orders)):
                continue
            f = 1
            for e, o in zip(mono, orders):
                f *= math.perm(e, o)
            out[tuple(e - o for e, o in zip(mono, orders))] = c * f
        return RationalPoly(self.n, self.p, out)

    def times_monomial(self, exps: Sequence[int], c=1) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly(self.n, self.p,
                            {tuple(a + b for a, b in zip(m, exps)): c * v
                             for m, v in self._terms.items()})

    def __repr__(self) -> str:
        if not self._terms:
            return f"RationalPoly({self.n}, {self.p}, 0)"
        names = [f"x{i + 1}" for i in range(self.n)] + [f"y{j + 1}" for j in range(self.p)]
        parts = []
        for mono, c in sorted(self._terms.items()):
            vs = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(names, mono) if e)
            parts.append(f"{c}*{vs}" if vs else str(c))
        return f"RationalPoly({' + '.join(parts)})"


@dataclass(frozen=True)
class EulerOp:
    """``δ_index`` (kind ``"x"``) or ``σ_index`` (kind ``"y"``); 0-based index."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("x", "y"):
            raise DomainError("EulerOp kind must be 'x' or 'y'")
        if self.index < 0:
            raise DomainError("EulerOp index must be nonnegative")

    def slot(self, f: RationalPoly) -> int:
        limit = f.n if self.kind == "x" else f.p
        if self.index >= limit:
            raise DomainError(f"{self.kind}-index {self.index} out of range for this polynomial")
        return self.index if self.kind == "x" else f.n + self.index


def apply_euler(op: EulerOp, f: RationalPoly) -> RationalPoly:
    """Each monomial is scaled by its exponent in the operator's variable."""
    s = op.slot(f)
    return RationalPoly(f.n, f.p, {m: c * m[s] for m, c in f.terms.items()})


def rising_factorial_op(ops: Iterable[EulerOp], f: RationalPoly, shift: int,
                        sign: int = 1) -> RationalPoly:
    """``(D)_shift f = D(D+1)...(D+shift-1) f`` with ``D = sign · Σ ops``."""
    if shift < 0:
        raise DomainError("shift must be nonnegative")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    ops = list(ops)

    def D(g: RationalPoly) -> RationalPoly:
        out = RationalPoly.zero(g.n, g.p)
        for op in ops:
            out = out + apply_euler(op, g)
        return out if sign == 1 else -out

    g = f
    # the factors commute, so apply them in any order
    for j in range(shift):
        g = D(g) + g.scale(j)
    return g


def _weighted_partials(f: RationalPoly, k: int, offset: int, count: int) -> RationalPoly:
    """``Σ_{|i|=k} ∏ v^{i}/i! · ∂^i f`` over the ``count`` variables from ``offset``."""
    if count < 1:
        raise DomainError("identity needs at least one variable of this kind")
    out = RationalPoly.zero(f.n, f.p)
    width = f.n + f.p
    for comp in compositions(k, count):
        orders = [0] * width
        orders[offset:offset + count] = comp
        denom = math.prod(math.factorial(i) for i in comp)
        out = out + f.derivative(orders).times_monomial(orders, Fraction(1, denom))
    return out


def lemma1_x_rhs(f: RationalPoly, k: int) -> RationalPoly:
    """``(-1)^k k! Σ_{|i|=k} x^i/i! ∂_x^i f``, equal to ``(-δ_1-...-δ_n)_k f``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return _weighted_partials(f, k, 0, f.n).scale((-1) ** k * math.factorial(k))


def lemma1_y_rhs(f: RationalPoly, k: int) -> RationalPoly:
    """``k! Σ_l C(k-1, l-1) Σ_{|j|=l} y^j/j! ∂_y^j f``, equal to ``(σ_1+...+σ_p)_k f``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    out = RationalPoly.zero(f.n, f.p)
    for l in range(1, k + 1):
        out = out + _weighted_partials(f, l, f.n, f.p).scale(math.comb(k - 1, l - 1))
    return out.scale(math.factorial(k))


def lemma1_y_rhs_single(f: RationalPoly, k: int) -> RationalPoly:
    """p = 1 form: ``Σ_l k!(k-1)! / (l!(l-1)!(k-l)!) · y^l ∂^l f/∂y^l``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if f.p != 1:
        raise DomainError("single-variable form needs p = 1")
    out = RationalPoly.zero(f.n, f.p)
    for l in range(1, k + 1):
        coef = Fraction(math.factorial(k) * math.factorial(k - 1),
                        math.factorial(l) * math.factorial(l - 1) * math.factorial(k - l))
        orders = [0] * f.n + [l]
        out = out + f.derivative(orders).times_monomial(orders, coef)
    return out


def random_poly(rng: random.Random, n: int, p: int, degree: int = 4,
                n_terms: int = 6, coef_range: int = 9) -> RationalPoly:
    """Random polynomial with integer coefficients in ``[-coef_range, coef_range]``."""
    width = n + p
    terms = {}
    for _ in range(n_terms):
        d = rng.randint(0, degree)
        comps = list(compositions(d, width))
        terms[rng.choice(comps)] = rng.randint(-coef_range, coef_range)
    return RationalPoly(n, p, terms)
