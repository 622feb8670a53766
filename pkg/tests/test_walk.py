import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from mathphys_bench.errors import DomainError
from mathphys_bench.numerics import RandomStream
from mathphys_bench.walk import (EmpiricalLaw, WalkParams, chi_square_test, dispersion, jump_count_pmf,
                                 mixture_occupation, occupation, occupation_asymptotic, occupation_law,
                                 simulate, step_law_power)


def test_no_jump_probability():
    assert jump_count_pmf(WalkParams(0.5, 2.0), 0, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-15)


@given(st.floats(0.0, 1.0), st.floats(0.01, 80.0))
def test_jump_counts_sum_to_one(alpha, t):
    p = WalkParams(alpha)
    assert math.fsum(jump_count_pmf(p, n, t) for n in range(400)) == pytest.approx(1.0, abs=1e-12)


def test_dispersion_linear():
    assert dispersion(WalkParams(1.0), 7.0) == 7.0


def test_dispersion_is_second_moment():
    sites, pr = occupation_law(WalkParams(0.5), 3.0)
    assert float((sites ** 2 * pr).sum()) == pytest.approx(1.5, abs=1e-8)


def test_occupation_frozen_and_scipy():
    q = WalkParams(1.0)
    assert occupation(q, 0, 2.0) == pytest.approx(0.30850832255367094, rel=1e-14)
    assert occupation(q, 0, 2.0) == pytest.approx(math.exp(-2) * special.iv(0, 2.0), rel=1e-14)


@given(st.floats(0.0, 1.0), st.floats(0.0, 200.0))
def test_occupation_law_normalized_and_symmetric(alpha, t):
    p = WalkParams(alpha)
    sites, pr = occupation_law(p, t)
    assert pr.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(pr, pr[::-1])
    assert np.all(pr >= 0)


@given(st.floats(0.05, 1.0), st.floats(0.1, 5.0))
def test_mixture_identity(alpha, t):
    p = WalkParams(alpha)
    sites, mix = mixture_occupation(p, t, 60)
    direct = np.array([occupation(p, int(m), t) for m in sites])
    assert np.max(np.abs(mix - direct)) < 1e-12


def test_step_law_power_normalized():
    law = step_law_power(WalkParams(0.3), 7)
    assert law.size == 15
    assert law.sum() == pytest.approx(1.0, abs=1e-15)


def test_asymptotic_ratio_and_value():
    q = WalkParams(1.0)
    assert occupation(q, 0, 1e4) / occupation_asymptotic(q, 1e4) == pytest.approx(1.0, abs=0.01)
    assert occupation_asymptotic(q, 100.0) == pytest.approx(1 / math.sqrt(200 * math.pi), rel=1e-15)
    with pytest.raises(DomainError):
        occupation_asymptotic(WalkParams(0.0), 5.0)


def test_simulation_is_reproducible():
    p = WalkParams(0.5)
    a = simulate(p, 4.0, 5000, RandomStream(3, 5))
    b = simulate(p, 4.0, 5000, RandomStream(3, 5))
    assert a.counts == b.counts


def test_frozen_walk_never_moves():
    law = simulate(WalkParams(0.0), 5.0, 1000, RandomStream(1))
    assert law.counts == {0: 1000}


def test_simulation_matches_law():
    p = WalkParams(0.5)
    law = simulate(p, 10.0, 200_000, RandomStream(11, 5))
    z = (law.variance() - dispersion(p, 10.0)) / law.variance_stderr()
    assert abs(z) < 4
    assert chi_square_test(law, p)[2] > 1e-3


def test_merge_adds_counts():
    a = EmpiricalLaw({0: 2, 1: 1}, 3, 1.0, 1.0, 1.0)
    b = EmpiricalLaw({1: 1}, 1, 1.0, 1.0, 1.0)
    m = a.merge(b)
    assert m.counts == {0: 2, 1: 2} and m.n_samples == 4
    with pytest.raises(DomainError):
        a.merge(EmpiricalLaw({0: 1}, 1, 2.0))


def test_parameter_validation():
    with pytest.raises(DomainError):
        WalkParams(1.5)
    with pytest.raises(DomainError):
        WalkParams(0.5, 0.0)
