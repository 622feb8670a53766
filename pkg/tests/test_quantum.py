import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mathphys_bench.errors import DomainError, SingularPoint
from mathphys_bench.quantum import (TEST_FUNCTIONS, NascentFamily, TorusSpec, WaveSpec, boundary_residual,
                                    box_flux, bump, coulomb_momentum_limit, flux_analytic,
                                    flux_finite_difference, flux_phase_map, gaussian_cutoff, lowest_exact,
                                    nascent_pairing, sphere_flux, torus_convergence, torus_eigenvalue,
                                    torus_fd_eigenvalues, torus_mode)

phases = st.floats(-2 * math.pi, 2 * math.pi)


def test_plane_wave_current_uniform():
    w = WaveSpec("plane", 1.3, (1.0, 0.0, 0.0), mass=2.0)
    assert flux_analytic(w, (0.3, -1.0, 4.0)) == pytest.approx([0.65, 0.0, 0.0], abs=1e-15)
    assert box_flux(WaveSpec("plane", 1.3, (1.0, 2.0, 0.5))) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 5.0, 10.0])
def test_spherical_flux_independent_of_radius(r):
    w = WaveSpec("spherical", 1.7, mass=2.0)
    assert sphere_flux(w, r) == pytest.approx(4 * math.pi * 1.7 / 2.0, rel=1e-8)


@given(st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3)))
def test_flux_finite_difference_agrees(pt):
    if np.linalg.norm(pt) < 0.3:
        return
    w = WaveSpec("spherical", 1.7, mass=2.0)
    assert np.max(np.abs(flux_finite_difference(w, pt) - flux_analytic(w, pt))) < 1e-6


def test_spherical_wave_singular_at_origin():
    with pytest.raises(SingularPoint):
        flux_analytic(WaveSpec("spherical", 1.0), (0, 0, 0))


@given(phases, phases, st.integers(-3, 3), st.integers(-3, 3))
def test_modes_satisfy_twisted_boundary(p1, p2, n1, n2):
    t = TorusSpec(1.3, 1.0, p1, p2)
    assert boundary_residual(t, n1, n2, np.linspace(0, 1, 20)) < 1e-12


@given(phases, phases, st.integers(-3, 3), st.integers(-3, 3))
def test_phase_periodicity_by_reindexing(p1, p2, n1, n2):
    t = TorusSpec(1.3, 1.0, p1, p2)
    shifted = TorusSpec(1.3, 1.0, p1 + 2 * math.pi, p2 - 2 * math.pi)
    assert torus_eigenvalue(shifted, n1 + 1, n2 - 1) == pytest.approx(torus_eigenvalue(t, n1, n2), rel=1e-12,
                                                                       abs=1e-12)


@given(phases, phases)
def test_lowest_levels_periodic(p1, p2):
    a = lowest_exact(TorusSpec(1.3, 1.0, p1, p2), 10)
    b = lowest_exact(TorusSpec(1.3, 1.0, p1 + 2 * math.pi, p2), 10)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-12)


def test_grid_orthogonality_of_modes():
    t = TorusSpec(1.3, 1.0, 0.7, 2.1)
    n = 64
    x, y = np.meshgrid(np.arange(n) * t.a / n, np.arange(n) * t.b / n, indexing="ij")
    u, v = torus_mode(t, 1, 2, x, y), torus_mode(t, 0, -1, x, y)
    assert abs(np.vdot(u, v)) / n ** 2 < 1e-12
    assert abs(np.vdot(u, u)) / n ** 2 == pytest.approx(1.0, abs=1e-12)


def test_fd_spectrum_small_grid_matches_dense_limit():
    t = TorusSpec(1.3, 1.0, 0.0, 0.0)
    vals = torus_fd_eigenvalues(t, 16, 6)
    assert vals[0] == pytest.approx(0.0, abs=1e-9 * vals[-1])
    assert np.all(np.diff(vals) >= -1e-12)


def test_fd_spectrum_second_order():
    r = torus_convergence(TorusSpec(1.3, 1.0, 1.0, math.pi))
    assert np.all(np.abs(r["orders"] - 2.0) < 0.1)


def test_flux_phase_map():
    a, b = flux_phase_map(1.3)
    assert a == pytest.approx(1.3, abs=1e-15) and b == pytest.approx(1.3, abs=1e-15)
    with pytest.raises(DomainError):
        flux_phase_map(1.0, e=0.0)


@pytest.mark.parametrize("form", ["lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d"])
def test_1d_families_have_unit_mass(form):
    from mathphys_bench.numerics import integrate
    f = NascentFamily(form, 0.3)
    assert integrate(lambda x: f(x), -math.inf, math.inf) == pytest.approx(1.0, abs=1e-10)


def test_3d_family_unit_mass():
    from mathphys_bench.numerics import integrate
    f = NascentFamily("lorentz_sq_3d", 0.3)
    assert integrate(lambda p: 4 * math.pi * p ** 2 * f(p), 0, math.inf) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("form", ["lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d", "lorentz_sq_3d"])
@pytest.mark.parametrize("test_fn", sorted(TEST_FUNCTIONS))
def test_nascent_families_converge_monotonically(form, test_fn):
    fn, support = TEST_FUNCTIONS[test_fn]
    errs = [abs(nascent_pairing(NascentFamily(form, a), fn, support) - float(fn(0.0)))
            for a in (0.1, 0.05, 0.025, 0.0125)]
    assert all(x > y for x, y in zip(errs, errs[1:]))


@pytest.mark.parametrize("form", ["lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d"])
def test_1d_order_in_width(form):
    # the local order approaches 1 from below (0.94 to 0.99 on these widths)
    widths = (0.1, 0.05, 0.025)
    errs = [abs(nascent_pairing(NascentFamily(form, a), bump, 1.0) - float(bump(0.0))) for a in widths]
    assert math.log(errs[0] / errs[2]) / math.log(4.0) >= 0.9


def test_coulomb_momentum_limit():
    devs = [abs(coulomb_momentum_limit(a) - 1) for a in (0.02, 0.01, 0.005)]
    assert devs[1] < 0.05
    assert devs[0] > devs[1] > devs[2]
    assert devs[1] / devs[0] == pytest.approx(0.5, abs=0.1)


def test_test_functions_compact():
    assert float(bump(1.0)) == 0.0 and float(gaussian_cutoff(2.0)) == 0.0
    assert float(gaussian_cutoff(0.0)) == pytest.approx(1.0, abs=1e-15)


def test_validation():
    with pytest.raises(DomainError):
        NascentFamily("nope", 0.1)
    with pytest.raises(DomainError):
        NascentFamily("lorentz_1d", 0.0)
    with pytest.raises(DomainError):
        TorusSpec(0.0, 1.0)
    with pytest.raises(DomainError):
        WaveSpec("cylindrical", 1.0)
