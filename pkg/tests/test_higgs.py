import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mathphys_bench.errors import DegenerateVev, DomainError
from mathphys_bench.higgs import (TwoHiggsParams, VevConfig, aligned_potential, alignment_conditions,
                                  charged_higgs_rotation, cp_violation_flag, det_condition_expanded,
                                  fd_hessian, hessian, master_potential, potential_on_vevs,
                                  quadratic_fit_hessian, random_params, solve_tadpoles, special_case_stable,
                                  stability_check, theta_derivatives, theta_minimizer, theta_shift)

seeds = st.integers(0, 2 ** 32 - 1)


def _draw(seed, complex_couplings=True):
    rng = np.random.default_rng(seed)
    p = random_params(rng, complex_couplings)
    v1, v2 = rng.uniform(0.5, 2.0, 2)
    return p, v1, v2, rng


@given(seeds)
def test_potential_is_real_and_hermitian(seed):
    p, v1, v2, rng = _draw(seed)
    phi1 = rng.normal(size=2) + 1j * rng.normal(size=2)
    phi2 = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert isinstance(master_potential(p, phi1, phi2), float)


@given(seeds, st.floats(-math.pi, math.pi))
def test_theta_shift_identity(seed, theta):
    p, v1, _, rng = _draw(seed)
    a = rng.uniform(0.5, 2.0)
    diff = potential_on_vevs(p, VevConfig(v1, 0.0, a, theta)) - potential_on_vevs(p, VevConfig(v1, 0.0, a, 0.0))
    assert diff == pytest.approx(theta_shift(p, v1, a, theta), abs=1e-12)


@given(seeds)
def test_theta_derivatives_vs_finite_difference(seed):
    p, v1, _, rng = _draw(seed)
    a = rng.uniform(0.5, 2.0)
    h = 1e-4
    v = lambda th: potential_on_vevs(p, VevConfig(v1, 0.0, a, th))  # noqa: E731
    d1, d2 = theta_derivatives(p, v1, a)
    assert (v(h) - v(-h)) / (2 * h) == pytest.approx(d1, abs=1e-7)
    assert (v(h) - 2 * v(0) + v(-h)) / h ** 2 == pytest.approx(d2, abs=1e-5)


@given(seeds)
def test_hessian_matches_finite_differences(seed):
    p, v1, v2, _ = _draw(seed)
    q = solve_tadpoles(p, v1, v2)
    h = hessian(q, v1, v2)
    assert np.max(np.abs(h - fd_hessian(q, v1, v2))) / np.max(np.abs(h)) < 1e-6


@given(seeds)
def test_tadpoles_make_stationary_point(seed):
    p, v1, v2, _ = _draw(seed)
    q = solve_tadpoles(p, v1, v2)
    h = 1e-5
    g1 = (aligned_potential(q, v1 + h, v2) - aligned_potential(q, v1 - h, v2)) / (2 * h)
    g2 = (aligned_potential(q, v1, v2 + h) - aligned_potential(q, v1, v2 - h)) / (2 * h)
    assert abs(g1) < 1e-8 and abs(g2) < 1e-8


@given(seeds)
def test_classification_matches_quadratic_fit(seed):
    p, v1, v2, _ = _draw(seed)
    q = solve_tadpoles(p, v1, v2)
    rep = stability_check(q, v1, v2)
    ev = np.linalg.eigvalsh(quadratic_fit_hessian(q, v1, v2))
    if abs(ev.min()) > 1e-3 * np.max(np.abs(ev)):
        assert rep.stable == (ev.min() > 0)
    assert rep.det_nonneg == det_condition_expanded(q, v1, v2)


@given(seeds)
def test_special_case_predicate_exact(seed):
    p, v1, v2, _ = _draw(seed)
    p = TwoHiggsParams(p.mu1_sq, p.mu2_sq, complex(0.0, complex(p.mu12_sq).imag), p.lambda1, p.lambda2,
                       p.lambda3, p.lambda4, p.lambda5)
    assert special_case_stable(p) == stability_check(p, v1, v2).stable


def test_special_case_violated_example():
    assert not special_case_stable(TwoHiggsParams(lambda1=0.1, lambda2=0.1, lambda3=1.0))
    assert not det_condition_expanded(TwoHiggsParams(lambda1=0.1, lambda2=0.1, lambda3=1.0), 1.0, 1.0)


@given(seeds)
def test_theta_minimizer_at_zero_when_aligned(seed):
    p, v1, _, rng = _draw(seed, complex_couplings=False)
    p = TwoHiggsParams(p.mu1_sq, p.mu2_sq, abs(complex(p.mu12_sq).real) + 0.05, p.lambda1, p.lambda2,
                       p.lambda3, p.lambda4, -abs(complex(p.lambda5).real) - 0.05)
    a = rng.uniform(0.5, 2.0)
    assert theta_minimizer(p, v1, a, n_grid=360) == 0.0
    assert alignment_conditions(p, v1, a)[:2] == (True, True)


def test_rotation_to_single_vev():
    beta, rot, hplus = charged_higgs_rotation(3.0, 4.0)
    assert rot @ [3.0, 4.0] == pytest.approx([5.0, 0.0], abs=1e-12)
    assert math.tan(beta) == pytest.approx(4 / 3, rel=1e-14)
    assert hplus == pytest.approx((0.8, -0.6), abs=1e-15)
    with pytest.raises(DegenerateVev):
        charged_higgs_rotation(0.0, 0.0)


def test_cp_flags():
    assert not cp_violation_flag(TwoHiggsParams(mu12_sq=0.3, lambda5=-0.2))
    assert cp_violation_flag(TwoHiggsParams(lambda5=complex(0.1, 0.3)))


def test_degenerate_inputs():
    with pytest.raises(DomainError):
        hessian(TwoHiggsParams(), 0.0, 1.0)
    with pytest.raises(DomainError):
        alignment_conditions(TwoHiggsParams(), 0.0, 1.0)
