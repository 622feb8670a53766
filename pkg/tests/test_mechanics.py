import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mathphys_bench.errors import DomainError
from mathphys_bench.mechanics import (DimensionlessTop, OscillatorSpec, TopSpec, dimensionless, equator_reachable,
                                      lifts_up, motion_band, random_top, simulate_top, theta_at_release,
                                      theta_coeffs, theta_poly, tuned_betagamma, virial_average)
from mathphys_bench.numerics import RandomStream

tops = st.builds(DimensionlessTop, st.floats(0.0, 2.0), st.floats(0.0, 5.0), st.floats(0.0, 5.0))
angles = st.floats(1e-3, math.pi / 2)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_virial_ratio(n):
    k, u = virial_average(OscillatorSpec(n=n))
    assert k / u == pytest.approx(n, abs=1e-3)


def test_harmonic_period():
    assert OscillatorSpec(m=2.0, lam=0.5, n=1).period() == pytest.approx(2 * math.pi * math.sqrt(2.0 / 1.0),
                                                                          rel=1e-12)


@given(tops, angles)
def test_release_value_identity(d, eps):
    assert float(theta_poly(d, eps, math.cos(eps))) == pytest.approx(theta_at_release(d, eps), abs=1e-12)


@given(tops, angles)
def test_coefficient_bounds(d, eps):
    _, a1, a2 = theta_coeffs(d, eps)
    assert -1e-15 <= a1 <= 2 + 1e-15
    assert a2 >= 0


@given(st.floats(0.0, 2.0), st.floats(1e-6, 10.0), angles)
def test_roots_always_real(alpha, gamma, eps):
    band = motion_band(DimensionlessTop(alpha, 1.0, gamma), eps)
    assert band.z_minus <= band.z_plus


@given(st.floats(0.0, 2.0), st.floats(1e-6, 10.0), angles)
def test_lifting_band_stays_above_mirror_angle(alpha, gamma, eps):
    band = motion_band(DimensionlessTop(alpha, 1.0, gamma), eps)
    if band.lifts_up:
        assert band.z_plus >= -math.cos(eps) - 1e-12


@given(st.floats(1.0, 2.0), st.floats(0.0, 5.0), angles)
def test_oblate_tops_descend(alpha, gamma, eps):
    assert not lifts_up(DimensionlessTop(alpha, 1.0, gamma), eps)


def test_heavy_top_upper_root_near_one():
    assert motion_band(DimensionlessTop(0.5, 1.0, 1e8), 0.6).z_plus == pytest.approx(1.0, abs=1e-6)


@given(st.floats(0.0, 0.2), st.floats(0.05, 1.5))
def test_equator_roots_back_substitute(bg, eps):
    ok, roots = equator_reachable(DimensionlessTop(0.5, 1.0, bg), eps)
    if ok:
        a0 = theta_coeffs(DimensionlessTop(roots[0], 1.0, bg), eps)[0]
        assert abs(a0) < 1e-10


def test_equator_limit():
    eps = 0.9
    limit = math.sin(eps) ** 2 * math.cos(eps) / 2
    assert equator_reachable(DimensionlessTop(0.5, 1.0, 0.99 * limit), eps)[0]
    assert not equator_reachable(DimensionlessTop(0.5, 1.0, 1.01 * limit), eps)[0]
    sn = math.sin(eps)
    ok, roots = equator_reachable(DimensionlessTop(0.5, 1.0, 0.0), eps)
    assert ok and roots == pytest.approx((sn / (1 + sn), -sn / (1 - sn)), rel=1e-14)


def test_tuned_top_keeps_constant_height():
    alpha, eps, omega0 = 0.4, 0.5, 3.0
    bg = tuned_betagamma(alpha, eps)
    spec = TopSpec(m=1.0, l=1.0, J=1.0, J0=alpha, omega0=omega0, epsilon=eps, g=bg * omega0 ** 2)
    assert motion_band(dimensionless(spec), eps).constant_height
    run = simulate_top(spec, 20 * 2 * math.pi / omega0)
    assert np.max(np.abs(run.theta - eps)) < 1e-6


@pytest.mark.parametrize("stream", range(4))
def test_random_top_invariants(stream):
    spec = random_top(RandomStream(7, stream).rng)
    run = simulate_top(spec, 50.0 / spec.omega0)
    dr = run.drifts()
    assert max(dr.values()) < 1e-8
    assert run.reduced_equation_residual() < 1e-8
    band = motion_band(dimensionless(spec), spec.epsilon)
    lo, hi = band.cos_theta_range
    ct = np.cos(run.theta)
    assert np.all(ct >= lo - 1e-6) and np.all(ct <= hi + 1e-6)
    early = math.cos(spec.epsilon) - math.cos(float(run.traj(0.01 / spec.omega0)[0])) > 0
    assert early == band.lifts_up
    assert run.table().shape == (run.t.size, 9)


def test_dimensionless_groups():
    d = dimensionless(TopSpec(m=2.0, l=0.5, J=1.0, J0=0.3, omega0=2.0, epsilon=0.4, g=9.81))
    assert (d.alpha, d.beta) == (0.3, 0.5)
    assert d.gamma == pytest.approx(9.81 / (0.5 * 4.0), rel=1e-15)
    assert math.isinf(dimensionless(TopSpec(1, 1, 1, 0.5, 0.0, 0.4)).gamma)


def test_validation():
    with pytest.raises(DomainError):
        OscillatorSpec(n=0)
    with pytest.raises(DomainError):
        virial_average(OscillatorSpec(), n_periods=10)
    with pytest.raises(DomainError):
        TopSpec(1, 1, 1, 3.0, 1.0, 0.4)
    with pytest.raises(DomainError):
        TopSpec(1, 1, 1, 0.5, 1.0, 2.0)
    with pytest.raises(DomainError):
        DimensionlessTop(2.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        equator_reachable(DimensionlessTop(0.5, 1.0, 0.1), math.pi / 2)
