import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperfun.confluent import (EvalPoint, family_parameters, family_partials, ha_derivative,
                                ha_eval, ha_reduce_eta, ha_solution_family)
from hyperfun.errors import DomainError
from hyperfun.multiseries import HaParams, iterate_multi_indices, lauricella_fa
from hyperfun.scalar import pochhammer, zero_f_p

P2 = HaParams(0.45, (0.3, 0.8), (0.9, 1.4))


def _brute_ha(P, xi, eta, order=45):
    """Direct (n+p)-fold sum, no shell structure or η collapse."""
    n = P.n
    total = 0.0
    for idx in iterate_multi_indices(n + len(eta), order):
        m, q = idx[:n], idx[n:]
        t = pochhammer(P.a, sum(m) - sum(q))
        for bi, ci, xi_, mi in zip(P.b, P.c, xi, m):
            t *= pochhammer(bi, mi) / pochhammer(ci, mi) * xi_ ** mi / math.factorial(mi)
        for y, qj in zip(eta, q):
            t *= y ** qj / math.factorial(qj)
        total += t
    return total


def test_ha_against_enumeration():
    xi, eta = (0.2, -0.1), (0.3, -0.15)
    assert ha_eval(P2, EvalPoint(xi, eta)) == pytest.approx(_brute_ha(P2, xi, eta), rel=1e-12)


def test_ha_without_eta_is_fa():
    pt = EvalPoint((0.2, -0.1), (0.0,))
    assert ha_eval(P2, pt) == lauricella_fa(P2, pt.xi)


def test_ha_at_zero_xi_is_zero_f_one():
    pt = EvalPoint((0.0, 0.0), (0.4,))
    assert ha_eval(P2, pt) == pytest.approx(zero_f_p(1.0 - P2.a, (-0.4,)), rel=1e-13)


@given(st.lists(st.floats(-0.6, 0.6), min_size=2, max_size=3))
def test_eta_collapse(eta):
    pt = EvalPoint((0.15, -0.2), eta)
    reduced = ha_reduce_eta(pt)
    assert reduced.p == 1
    v = ha_eval(P2, pt, collapse=False)
    assert v == pytest.approx(ha_eval(P2, reduced), rel=1e-12)


def test_ha_domain():
    with pytest.raises(DomainError):
        ha_eval(P2, EvalPoint((0.6, -0.5), (0.1,)))
    with pytest.raises(DomainError):
        ha_eval(P2, EvalPoint((0.1,), (0.1,)))
    with pytest.raises(DomainError):
        EvalPoint((float("nan"),))


def test_derivative_against_finite_difference():
    pt = EvalPoint((0.2, -0.1), (0.3,))
    h = 1e-5
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        plus = EvalPoint(tuple(np.add(pt.xi, e[:2])), (pt.eta[0] + e[2],))
        minus = EvalPoint(tuple(np.subtract(pt.xi, e[:2])), (pt.eta[0] - e[2],))
        fd = (ha_eval(P2, plus) - ha_eval(P2, minus)) / (2 * h)
        orders = [0, 0, 0]
        orders[i] = 1
        exact = ha_derivative(P2, pt, tuple(orders[:2]), (orders[2],))
        assert exact == pytest.approx(fd, rel=1e-8)


def test_family_parameters():
    shifted, tau = family_parameters(P2, 1)
    assert tau == pytest.approx((0.1,))
    assert shifted.a == pytest.approx(0.55)
    assert shifted.b == pytest.approx((0.4, 0.8))
    assert shifted.c == pytest.approx((1.1, 1.4))
    assert family_parameters(P2, 0)[0] == P2
    with pytest.raises(DomainError):
        family_parameters(P2, 3)


def test_family_member_value():
    pt = EvalPoint((-0.2, 0.15), (0.1,))
    shifted, tau = family_parameters(P2, 2)
    expected = 2.0 * 0.2 ** tau[0] * 0.15 ** tau[1] * ha_eval(shifted, pt)
    assert ha_solution_family(P2, pt, 2, C_k=2.0) == pytest.approx(expected, rel=1e-14)


def test_family_partials_against_finite_difference():
    pt = EvalPoint((-0.2, 0.15), (0.1,))
    value, grad, hess = family_partials(P2, pt, 1)
    h = 1e-5

    def f(v):
        return ha_solution_family(P2, EvalPoint(v[:2], v[2:]), 1)

    base = np.array(pt.xi + pt.eta)
    assert value == pytest.approx(f(base), rel=1e-14)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        assert grad[i] == pytest.approx((f(base + e) - f(base - e)) / (2 * h), rel=1e-7)
        d2 = (f(base + e) - 2 * f(base) + f(base - e)) / h ** 2
        assert hess[i, i] == pytest.approx(d2, rel=1e-4)
    assert np.allclose(hess, hess.T)


def test_family_prefactor_needs_nonzero_xi():
    with pytest.raises(DomainError):
        ha_solution_family(P2, EvalPoint((0.0, 0.1), (0.1,)), 1)
