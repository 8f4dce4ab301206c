"""Kernel series, the 1-d evaluator, and the product kernel."""

import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from dunklou import CapabilityError, ek, ek_1d, ek_log, parse_group, series_build
from dunklou.dunklkernel import (
    ASYMP_CUTOVER,
    defining_residual,
    ek_log_1d_array,
    theta,
)

from conftest import rng

K_GRID = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(1, 4)]


# -- series -----------------------------------------------------------------


def test_theta_values():
    for m in range(0, 6):
        assert theta(2 * m, Fraction(3, 2)) == 2 * m
        assert theta(2 * m + 1, Fraction(3, 2)) == 2 * m + 1 + 3


def test_series_zero_multiplicity_gives_factorials():
    s = series_build(0, 20)
    with mp.workdps(40):
        fact = 1
        for n, b in enumerate(s.coefficients):
            if n:
                fact *= n
            assert abs(b - mp.mpf(1) / fact) < mp.mpf(10) ** (-25)


@pytest.mark.parametrize("k", K_GRID)
def test_series_leading_coefficients(k):
    s = series_build(k, 6)
    assert s.coefficients[0] == 1
    with mp.workdps(40):
        one_plus_2k = 1 + 2 * mp.mpf(k.numerator) / k.denominator
        assert abs(s.coefficients[1] - 1 / one_plus_2k) < mp.mpf("1e-25")
        assert abs(s.coefficients[2] - 1 / (2 * one_plus_2k)) < mp.mpf("1e-25")


@pytest.mark.parametrize("k", K_GRID)
def test_series_positive_and_recurrent(k):
    s = series_build(k, 40)
    with mp.workdps(40):
        for n in range(1, s.order + 1):
            assert s.coefficients[n] > 0
            th = theta(n, k)
            thm = mp.mpf(th.numerator) / th.denominator
            residual = abs(thm * s.coefficients[n] - s.coefficients[n - 1])
            assert residual < mp.mpf("1e-28")


def test_tail_bound_dominates_truncation():
    k = Fraction(1)
    s = series_build(k, 30)
    for u in (0.5, 2.0, -3.0):
        tail = s.tail_bound(abs(u))
        exact = ek_1d(k, u)
        assert abs(float(s.eval(u)) - exact) <= tail + 1e-15 * abs(exact)


# -- 1-d kernel ----------------------------------------------------------------


def test_ek_1d_at_zero_is_one():
    for k in K_GRID:
        assert ek_1d(k, 0.0) == 1.0


def test_ek_1d_zero_multiplicity_is_exp():
    for u in np.linspace(-10, 10, 41):
        assert ek_1d(0, u) == pytest.approx(math.exp(u), rel=1e-14)


def test_ek_1d_dominated_by_exp():
    for k in (Fraction(1, 2), Fraction(1), Fraction(2)):
        for u in np.linspace(-10, 10, 81):
            val = ek_1d(k, float(u))
            assert 0 < val <= math.exp(abs(u)) * (1 + 1e-12)


def test_ek_1d_matches_confluent_hypergeometric():
    # independent closed form: e^u * 1F1(k; 2k+1; -2u), both series and
    # asymptotic branches (cutover sits at ASYMP_CUTOVER)
    assert ASYMP_CUTOVER == 40.0
    with mp.workdps(40):
        for k in (0.5, 1.0, 2.0, 0.25):
            for u in (-120.0, -50.0, -10.0, -0.7, 0.3, 9.0, 39.0, 41.0, 120.0):
                ref = mp.e ** u * mp.hyp1f1(k, 2 * k + 1, -2 * u)
                assert ek_1d(k, u) == pytest.approx(float(ref), rel=1e-10)


def test_ek_1d_rejects_negative_multiplicity():
    with pytest.raises(ValueError):
        ek_1d(-0.5, 1.0)


# -- product kernel ----------------------------------------------------------------


KERNEL_GROUPS = [parse_group("rank1:k=1"), parse_group("z2:2:k=1,0.5")]


@pytest.mark.parametrize("rs", KERNEL_GROUPS, ids=lambda rs: rs.label())
def test_ek_at_zero_second_slot(rs):
    r = rng("ek-zero-slot")
    for _ in range(10):
        x = [r.uniform(-3, 3) for _ in range(rs.dim)]
        assert ek(rs, x, [0.0] * rs.dim) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("rs", KERNEL_GROUPS, ids=lambda rs: rs.label())
def test_ek_symmetric_and_rescalable(rs):
    r = rng("ek-symmetry")
    lam = 1.7
    for _ in range(200):
        x = [r.uniform(-3, 3) for _ in range(rs.dim)]
        y = [r.uniform(-3, 3) for _ in range(rs.dim)]
        v = ek(rs, x, y)
        assert v > 0
        assert ek(rs, y, x) == pytest.approx(v, rel=1e-12)
        lx = [lam * c for c in x]
        ly = [lam * c for c in y]
        assert ek(rs, lx, y) == pytest.approx(ek(rs, x, ly), rel=1e-12)


def test_ek_zero_multiplicity_is_exp_of_inner_product():
    rs = parse_group("z2:2:k=0,0")
    r = rng("ek-k0")
    for _ in range(30):
        x = [r.uniform(-3, 3) for _ in range(2)]
        y = [r.uniform(-3, 3) for _ in range(2)]
        inner = sum(a * b for a, b in zip(x, y))
        assert ek(rs, x, y) == pytest.approx(math.exp(inner), rel=1e-12)


@pytest.mark.parametrize("rs", KERNEL_GROUPS, ids=lambda rs: rs.label())
def test_defining_system_residual(rs):
    # ground truth for the product form: finite-difference Dunkl derivative
    # in x must reproduce multiplication by y, axis by axis
    pts = [0.4, 1.1, -0.8, 2.2]
    r = rng("ek-residual")
    for _ in range(12):
        x = [r.choice(pts) for _ in range(rs.dim)]
        y = [r.uniform(-2, 2) for _ in range(rs.dim)]
        for axis in range(rs.dim):
            assert abs(defining_residual(rs, x, y, axis)) <= 1e-6


def test_ek_log_matches_log_of_kernel():
    rs = parse_group("z2:2:k=1,0.5")
    r = rng("ek-log")
    for _ in range(20):
        x = [r.uniform(-3, 3) for _ in range(2)]
        y = [r.uniform(-3, 3) for _ in range(2)]
        assert ek_log(rs, x, y) == pytest.approx(math.log(ek(rs, x, y)), abs=1e-12)


def test_ek_log_survives_huge_arguments():
    # the plain kernel would overflow; the log form stays finite and is
    # dominated by sum |x_i y_i|
    arr = ek_log_1d_array(1.0, np.array([300.0, 5000.0, -5000.0]))
    assert np.all(np.isfinite(arr))
    assert arr[1] <= 5000.0 and arr[1] >= 5000.0 - 20.0


def test_ek_needs_kernel_capability():
    rs = parse_group("sym:3:k=1")
    with pytest.raises(CapabilityError):
        ek(rs, (1.0, 0.5, -0.2), (0.3, 0.1, 0.9))
