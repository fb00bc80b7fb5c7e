import math
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperfun.errors import ConvergenceError, DomainError, PoleError
from hyperfun.multiseries import (ErdelyiParams, HaParams, compositions, erdelyi_h,
                                  iterate_multi_indices, lauricella_fa, pochhammer_table,
                                  rising, shell_coefficients, sum_shells)
from hyperfun.scalar import Truncation, gauss_2f1, pochhammer


@given(st.integers(1, 4), st.integers(0, 7))
def test_iterator_counts_and_order(dim, total):
    idx = list(iterate_multi_indices(dim, total))
    assert len(idx) == comb(total + dim, dim)
    assert len(set(idx)) == len(idx)
    totals = [sum(m) for m in idx]
    assert totals == sorted(totals)


def test_compositions_small():
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    with pytest.raises(DomainError):
        list(iterate_multi_indices(0, 3))


def test_rising_and_table():
    assert np.allclose(rising(0.5, 4), [1, 0.5, 0.75, 1.875, 6.5625])
    tab = pochhammer_table(0.3, 3)
    for d in range(-3, 4):
        assert tab[d + 3] == pytest.approx(pochhammer(0.3, d), rel=1e-14)
    with pytest.raises(PoleError):
        pochhammer_table(2.0, 3)


def _brute_fa(a, b, c, x, order):
    total = 0.0
    for m in iterate_multi_indices(len(b), order):
        t = pochhammer(a, sum(m))
        for bi, ci, xi, mi in zip(b, c, x, m):
            t *= pochhammer(bi, mi) / pochhammer(ci, mi) * xi ** mi / math.factorial(mi)
        total += t
    return total


def test_shells_match_enumeration():
    b, c, x = (0.4, 1.2, 0.7), (0.9, 1.6, 2.1), (0.2, -0.1, 0.15)
    g = shell_coefficients(b, c, x, 6)
    for M in range(7):
        direct = 0.0
        for m in compositions(M, 3):
            t = 1.0
            for bi, ci, xi, mi in zip(b, c, x, m):
                t *= pochhammer(bi, mi) / pochhammer(ci, mi) * xi ** mi / math.factorial(mi)
            direct += t
        assert g[M] == pytest.approx(direct, rel=1e-13, abs=1e-17)


def test_fa_against_enumeration():
    P = HaParams(0.8, (0.4, 1.2), (0.9, 1.6))
    x = (0.2, -0.15)
    assert lauricella_fa(P, x) == pytest.approx(_brute_fa(0.8, P.b, P.c, x, 60), rel=1e-12)


@given(st.floats(0.1, 2.0), st.floats(0.1, 2.0), st.floats(0.3, 2.5), st.floats(-0.9, 0.9))
def test_fa_one_variable_is_gauss(a, b, c, x):
    P = HaParams(a, (b,), (c,))
    assert lauricella_fa(P, (x,), Truncation(max_order=2000)) == pytest.approx(
        gauss_2f1(a, b, c, x), rel=1e-11)


@given(st.floats(0.1, 2.0), st.lists(st.floats(0.1, 2.0), min_size=2, max_size=3),
       st.floats(0.3, 2.5), st.floats(-0.4, 0.4))
def test_fa_zero_arguments_drop_out(a, b, c, x):
    n = len(b)
    P = HaParams(a, b, (c,) * n)
    full = lauricella_fa(P, (x,) + (0.0,) * (n - 1))
    assert full == pytest.approx(gauss_2f1(a, b[0], c, x), rel=1e-12)


@given(st.permutations(range(3)))
def test_fa_permutation_symmetry(perm):
    b, c, x = (0.4, 1.2, 0.7), (0.9, 1.6, 2.1), (0.2, -0.1, 0.15)
    base = lauricella_fa(HaParams(0.6, b, c), x)
    moved = lauricella_fa(HaParams(0.6, [b[i] for i in perm], [c[i] for i in perm]),
                          [x[i] for i in perm])
    assert moved == pytest.approx(base, rel=1e-14)


def test_fa_domain_and_params():
    P = HaParams(0.5, (0.3, 0.2), (1.0, 1.1))
    with pytest.raises(DomainError):
        lauricella_fa(P, (0.6, -0.5))
    with pytest.raises(DomainError):
        lauricella_fa(P, (0.1,))
    with pytest.raises(DomainError):
        HaParams(0.5, (0.3,), (-1.0,))
    with pytest.raises(DomainError):
        HaParams(0.5, (0.3, 0.1), (1.0,))
    with pytest.raises(ConvergenceError):
        lauricella_fa(P, (0.5, -0.49), Truncation(max_order=10))


def test_sum_shells_rule():
    assert sum_shells(np.array([1.0, 0.5, 0.0, 0.0, 0.0]), 1e-12) == 1.5
    with pytest.raises(ConvergenceError):
        sum_shells(np.ones(10), 1e-12)


def test_erdelyi_reduces_to_fa_without_eta():
    E = ErdelyiParams(0.7, (0.4, 1.1, 5.0), (2.0,), (0.9, 1.6))
    P = HaParams(0.7, (0.4, 1.1), (0.9, 1.6))
    x = (0.2, 0.25)
    assert erdelyi_h(E, x, (0.0,)) == pytest.approx(lauricella_fa(P, x), rel=1e-14)


def test_erdelyi_against_enumeration():
    a, b, d, c = 0.35, (0.6, 2.0), (3.0,), (1.3,)
    x, y = 0.25, 0.02
    total = 0.0
    for m1, q in iterate_multi_indices(2, 60):
        total += (pochhammer(a, m1 - q) * pochhammer(b[0], m1) / pochhammer(c[0], m1)
                  * x ** m1 / math.factorial(m1)
                  * pochhammer(b[1], q) * pochhammer(d[0], q) * y ** q / math.factorial(q))
    assert erdelyi_h(ErdelyiParams(a, b, d, c), (x,), (y,)) == pytest.approx(total, rel=1e-12)


def test_erdelyi_param_shapes():
    with pytest.raises(DomainError):
        ErdelyiParams(0.5, (0.3, 0.2), (1.0, 2.0), (1.0,))
    with pytest.raises(DomainError):
        erdelyi_h(ErdelyiParams(0.5, (0.3, 0.2), (1.0,), (1.0,)), (0.1,), (0.1, 0.2))


def test_sum_shells_refuses_overflow():
    with pytest.raises(ConvergenceError):
        sum_shells(np.array([1.0, np.inf, 1.0, 0.0, 0.0, 0.0]), 1e-12)


def test_scaled_shells_match_plain_ones():
    from hyperfun.multiseries import scaled_shell_coefficients
    b, c, x = (0.4, 1.2), (0.9, 1.6), (0.3, -0.25)
    g = shell_coefficients(b, c, x, 30)
    G = scaled_shell_coefficients(b, c, x, 30)
    # mixed signs cancel inside a shell; measure against the absolute shell
    scale = shell_coefficients(b, c, np.abs(x), 30)
    for M in range(31):
        assert abs(G[M] / math.factorial(M) - g[M]) <= 1e-13 * scale[M]


def test_high_order_path_near_the_boundary():
    # F(1, 1; 1; x) = 1/(1-x) needs ~200 shells at x = 0.875
    P = HaParams(1.0, (1.0,), (1.0,))
    assert lauricella_fa(P, (0.875,), Truncation(max_order=2000)) == pytest.approx(8.0, rel=1e-11)
    P2 = HaParams(0.6, (0.4, 1.2), (0.9, 1.6))
    lo = lauricella_fa(P2, (0.3, -0.2), Truncation(max_order=100))
    hi = lauricella_fa(P2, (0.3, -0.2), Truncation(max_order=400))
    assert hi == pytest.approx(lo, rel=1e-13)
