import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mathphys_bench.cosmo import (CosmoParams, entropy_drift, epsilon, evolve, flat_closed_form,
                                  friedmann_residual, hubble_sq, reciprocity_drift, temperature_rate,
                                  thermo, turnaround_temperature, energy_law_residual)
from mathphys_bench.errors import DomainError, TurnaroundError


def test_epsilon_open_universe():
    q = CosmoParams(-1, N=10, S=100)
    assert epsilon(q) == pytest.approx(-math.exp(2 / 3 * math.log(2 * math.pi ** 2 * 10 / 4500)), rel=1e-14)
    assert epsilon(CosmoParams(0)) == 0.0


@given(st.floats(0.01, 100.0), st.floats(0.1, 10.0))
def test_radiation_equation_of_state(T, N):
    rho, p, s = thermo(CosmoParams(0, N=N), T)
    assert rho / p == pytest.approx(3.0, rel=1e-15)
    # s = (rho + p)/T for radiation
    assert s == pytest.approx((rho + p) / T, rel=1e-14)


def test_energy_density_scales_as_T4():
    Ts = np.geomspace(0.5, 5.0, 20)
    rho = [thermo(CosmoParams(0), T)[0] for T in Ts]
    assert np.polyfit(np.log(Ts), np.log(rho), 1)[0] == pytest.approx(4.0, abs=1e-6)


def test_flat_trajectory_against_closed_form():
    p = CosmoParams(0)
    tr = evolve(p, 1.0, 10.0)
    assert np.max(np.abs(tr.T / flat_closed_form(p, 1.0, tr.t) - 1)) < 1e-8
    assert reciprocity_drift(tr) < 1e-8
    assert entropy_drift(tr) < 1e-7
    assert friedmann_residual(tr, np.linspace(0, 10, 50)).max() < 1e-8
    assert energy_law_residual(tr) < 1e-4


@given(st.floats(0.2, 5.0), st.floats(0.5, 4.0))
def test_flat_closed_form_solves_rate_equation(T0, t):
    p = CosmoParams(0)
    h = 1e-6
    Tm, T, Tp = flat_closed_form(p, T0, [t - h, t, t + h])
    assert (Tp - Tm) / (2 * h) == pytest.approx(temperature_rate(p, T), rel=1e-6)


def test_open_universe_friedmann():
    tr = evolve(CosmoParams(-1, N=1, S=5), 1.0, 3.0)
    assert friedmann_residual(tr, np.linspace(0, 3, 60)).max() < 1e-8
    assert reciprocity_drift(tr) < 1e-8


def test_closed_universe_turnaround_reported():
    q = CosmoParams(1, N=1, S=5)
    with pytest.raises(TurnaroundError) as info:
        evolve(q, 1.0, 50.0)
    partial = info.value.partial
    assert partial is not None
    assert partial.T[-1] >= turnaround_temperature(q) * (1 - 1e-6)
    assert hubble_sq(q, 0.5 * turnaround_temperature(q)) < 0


def test_turnaround_temperature_only_for_closed():
    assert turnaround_temperature(CosmoParams(0)) is None
    assert turnaround_temperature(CosmoParams(-1)) is None
    q = CosmoParams(1)
    assert hubble_sq(q, turnaround_temperature(q)) == pytest.approx(0.0, abs=1e-12)


def test_validation():
    with pytest.raises(DomainError):
        CosmoParams(2)
    with pytest.raises(DomainError):
        thermo(CosmoParams(0), 0.0)
