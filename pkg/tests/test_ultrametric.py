import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mathphys_bench.errors import DomainError
from mathphys_bench.numerics import gamma
from mathphys_bench.ultrametric import (SeriesParams, asymptotic_bounds_R, asymptotic_bounds_S, gamma_k,
                                        loglog_slope, sum_R, sum_S)


def _brute(a, b, k, t, start):
    n = np.arange(start, 400, dtype=float)
    terms = a ** -n * np.exp(-t * b ** -n)
    if k:
        terms = terms / n ** k
    return math.fsum(terms)


def test_frozen_sums():
    assert sum_R(SeriesParams(2, 2), 1e3) == pytest.approx(0.001442706326198278, rel=1e-12)
    assert sum_S(SeriesParams(2, 3, 1), 1e4) == pytest.approx(0.0004103361687656477, rel=1e-12)


@given(st.sampled_from([2, 3, 2.5]), st.sampled_from([2, 3, 1.7]), st.integers(0, 2),
       st.floats(0.0, 1e6))
def test_sums_match_brute_force(a, b, k, t):
    # truncation leaves at most tail_tol (1e-16) of absolute mass
    p = SeriesParams(a, b, k)
    assert sum_S(p, t) == pytest.approx(_brute(a, b, k, t, 1), rel=1e-12, abs=2e-16)
    assert sum_R(p, t) == pytest.approx(_brute(a, b, 0, t, 0), rel=1e-12, abs=2e-16)


@given(st.floats(0.0, 50.0))
def test_S_with_k0_is_R_minus_exp(t):
    p = SeriesParams(2, 3, 0)
    assert sum_S(p, t) == pytest.approx(sum_R(p, t) - math.exp(-t), abs=1e-15)


def test_values_at_zero():
    assert sum_R(SeriesParams(2, 2), 0.0) == pytest.approx(2.0, abs=1e-15)
    assert sum_S(SeriesParams(2, 2, 1), 0.0) == pytest.approx(math.log(2), abs=1e-15)


@given(st.sampled_from([2, 3]), st.sampled_from([2, 3]), st.floats(0, 1e5), st.floats(0, 1e5))
def test_sums_decrease_in_t(a, b, t1, t2):
    p = SeriesParams(a, b, 1)
    lo, hi = sorted((t1, t2))
    assert sum_S(p, hi) <= sum_S(p, lo) * (1 + 1e-14)


@pytest.mark.parametrize("a", [2, 3])
@pytest.mark.parametrize("b", [2, 3])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_sandwich(a, b, k):
    p = SeriesParams(a, b, k)
    for t in (1e3, 1e4, 1e5, 1e6):
        lo, hi = asymptotic_bounds_S(p, t)
        assert 0.8 * lo <= sum_S(p, t) <= 1.2 * hi


def test_tR_bounds_for_a2_b2():
    p = SeriesParams(2, 2)
    for t in (1e3, 1e4, 1e5, 1e6):
        tr = t * sum_R(p, t)
        assert 0.5 / math.log(2) <= tr <= 2 / math.log(2)
        lo, hi = asymptotic_bounds_R(p, t)
        assert lo <= sum_R(p, t) <= hi


@pytest.mark.parametrize("a,b", [(2, 3), (2, 2), (3, 2), (3, 3)])
def test_loglog_slope(a, b):
    assert loglog_slope(SeriesParams(a, b)) == pytest.approx(-math.log(a) / math.log(b), abs=0.02)


def test_gamma_k_tends_to_gamma_slowly():
    z = math.log(2) / math.log(3)
    gaps = [abs(gamma_k(z, t, 1 / 3, 1 / 3, 1) - gamma(z)) for t in (1e3, 1e6, 1e12)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_gamma_k_with_k0_is_incomplete_gamma():
    z = 0.6
    assert gamma_k(z, 1e4, 1.0, 0.5, 0) == pytest.approx(gamma(z), rel=1e-10)


def test_bad_parameters():
    with pytest.raises(DomainError):
        SeriesParams(1.0, 2.0)
    with pytest.raises(DomainError):
        sum_R(SeriesParams(2, 2), -1.0)
    with pytest.raises(DomainError):
        asymptotic_bounds_S(SeriesParams(2, 2), 1.0)
