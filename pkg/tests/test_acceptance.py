"""The thirteen acceptance criteria, one test each, at their stated tolerances.

A summary section at the end of the pytest run prints one PASS/FAIL line per
criterion.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from mathphys_bench import (cosmo, electrostatics, heatburgers, higgs, mechanics, quantum, ultrametric,
                            volterra, walk)
from mathphys_bench.numerics import RandomStream


@pytest.mark.acceptance(1, "virial ratio <K>/<U> = n for n in 1, 2, 3, 5 within 1e-3, each under 10 s")
def test_criterion_01_virial():
    for n in (1, 2, 3, 5):
        start = time.perf_counter()
        k, u = mechanics.virial_average(mechanics.OscillatorSpec(1.0, 1.0, n, 1.0), n_periods=200)
        elapsed = time.perf_counter() - start
        assert abs(k / u - n) <= 1e-3, (n, k / u)
        assert elapsed < 10.0, (n, elapsed)


@pytest.mark.acceptance(2, "Volterra closed form vs marching order >= 1.8; sine recovery within 1e-6 at n = 2048")
def test_criterion_02_volterra():
    q = volterra.VolterraProblem(volterra.saturating_family(), lambda x: math.cos(3 * x))
    ns = [256, 512, 1024]
    errs = []
    for n in ns:
        xs, ph = volterra.solve_marching(q, n)
        errs.append(max(abs(ph[i] - volterra.solve_closed_form(q, xs[i])) for i in range(0, n + 1, n // 16)))
    assert volterra.empirical_order(errs, ns) >= 1.8
    xs, ph = volterra.solve_sine_problem(2048)
    assert np.max(np.abs(ph - np.sin(xs))) <= 1e-6


@pytest.mark.acceptance(3, "ultrametric sandwich with 20% slack on 12 parameter sets; log-log slope within 0.02")
def test_criterion_03_ultrametric():
    for a in (2, 3):
        for b in (2, 3):
            for k in (0, 1, 2):
                p = ultrametric.SeriesParams(a, b, k)
                for t in (1e3, 1e4, 1e5, 1e6):
                    lo, hi = ultrametric.asymptotic_bounds_S(p, t)
                    s = ultrametric.sum_S(p, t)
                    assert lo * (1 - 0.2) <= s <= hi * (1 + 0.2), (a, b, k, t)
            slope = ultrametric.loglog_slope(ultrametric.SeriesParams(a, b))
            assert abs(slope + math.log(a) / math.log(b)) <= 0.02, (a, b, slope)


@pytest.mark.acceptance(4, "random walk: variance within 4 stderr, chi-square p > 0.001, asymptotic ratio 1 +- 0.01, "
                           "under 60 s")
def test_criterion_04_walk():
    start = time.perf_counter()
    p = walk.WalkParams(0.5, 1.0)
    law = walk.simulate(p, 10.0, 10 ** 6, RandomStream(2024, 5))
    assert abs(law.variance() - walk.dispersion(p, 10.0)) <= 4 * law.variance_stderr()
    _, _, pval = walk.chi_square_test(law, p)
    assert pval > 0.001
    q = walk.WalkParams(1.0, 1.0)
    assert abs(walk.occupation(q, 0, 1e4) / walk.occupation_asymptotic(q, 1e4) - 1) <= 0.01
    assert time.perf_counter() - start < 60.0


@pytest.mark.acceptance(5, "flat cosmology vs closed form <= 1e-8; aT drift <= 1e-8; s a^3 drift <= 1e-7")
def test_criterion_05_cosmo():
    p = cosmo.CosmoParams(0)
    tr = cosmo.evolve(p, 1.0, 10.0)
    assert np.max(np.abs(tr.T / cosmo.flat_closed_form(p, 1.0, tr.t) - 1)) <= 1e-8
    assert cosmo.reciprocity_drift(tr) <= 1e-8
    assert cosmo.entropy_drift(tr) <= 1e-7


@pytest.mark.acceptance(6, "sphere and charge: s0, f_max, s_max within 0.01; near-contact ratio -1 +- 1e-3; "
                           "equipotential spread <= 1e-9")
def test_criterion_06_electrostatics():
    for alpha, s0, fm, sm in ((2.0, 1.43, 0.43, 1.79), (1.0, 1.62, 0.15, 2.07), (0.5, 1.88, 0.05, 2.46)):
        assert abs(electrostatics.equilibrium_distance(alpha) - s0) <= 0.01
        s_max, f_max = electrostatics.force_maximum(alpha)
        assert abs(f_max - fm) <= 0.01 and abs(s_max - sm) <= 0.01
    d = 1e-4
    near = electrostatics.SphereChargeSystem(1.0, 1.0, 1.0, 1.0 + d)
    assert abs(electrostatics.force(near) * (2 * d) ** 2 + 1.0) <= 1e-3
    u = np.random.default_rng(6).normal(size=(200, 3))
    u /= np.linalg.norm(u, axis=1)[:, None]
    assert electrostatics.surface_spread(electrostatics.SphereChargeSystem(1.3, 0.7, 0.4, 2.1), u) <= 1e-9


@pytest.mark.acceptance(7, "two-doublet potential: Hessian vs finite differences <= 1e-6 on 100 draws; special case "
                           "predicate; phase minimizer at 0")
def test_criterion_07_higgs():
    rng = RandomStream(2024, 8).rng
    for _ in range(100):
        p = higgs.random_params(rng)
        v1, v2 = rng.uniform(0.5, 2.0, 2)
        q = higgs.solve_tadpoles(p, v1, v2)
        h = higgs.hessian(q, v1, v2)
        assert np.max(np.abs(h - higgs.fd_hessian(q, v1, v2))) / np.max(np.abs(h)) <= 1e-6
    for _ in range(100):
        p = higgs.random_params(rng)
        p = higgs.TwoHiggsParams(p.mu1_sq, p.mu2_sq, complex(0.0, complex(p.mu12_sq).imag), p.lambda1,
                                 p.lambda2, p.lambda3, p.lambda4, p.lambda5)
        v1, v2 = rng.uniform(0.5, 2.0, 2)
        assert higgs.special_case_stable(p) == higgs.stability_check(p, v1, v2).stable
    for _ in range(20):
        p = higgs.random_params(rng, complex_couplings=False)
        p = higgs.TwoHiggsParams(p.mu1_sq, p.mu2_sq, abs(complex(p.mu12_sq).real) + 0.05, p.lambda1, p.lambda2,
                                 p.lambda3, p.lambda4, -abs(complex(p.lambda5).real) - 0.05)
        th = higgs.theta_minimizer(p, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), n_grid=720)
        assert min(th, 2 * math.pi - th) <= 1e-12


@pytest.mark.acceptance(8, "torus: lowest 6 finite-difference levels converge at order 2 +- 0.1 on 32/64/128 grids "
                           "for 9 phase pairs; spectrum periodic in the phases")
def test_criterion_08_torus():
    for p1 in (0.0, 1.0, math.pi):
        for p2 in (0.0, 1.0, math.pi):
            r = quantum.torus_convergence(quantum.TorusSpec(1.3, 1.0, p1, p2), (32, 64, 128), 6)
            assert np.all(np.abs(r["orders"] - 2.0) <= 0.1), (p1, p2, r["orders"])
            shifted = quantum.TorusSpec(1.3, 1.0, p1 + 2 * math.pi, p2 + 2 * math.pi)
            for n1 in range(-3, 4):
                for n2 in range(-3, 4):
                    a = quantum.torus_eigenvalue(quantum.TorusSpec(1.3, 1.0, p1, p2), n1, n2)
                    b = quantum.torus_eigenvalue(shifted, n1 + 1, n2 + 1)
                    assert abs(a - b) <= 1e-12 * max(1.0, a)


@pytest.mark.acceptance(9, "nascent delta families and the Coulomb limit converge monotonically; spherical flux "
                           "constant to 1e-8 and equal to 4 pi hbar k / m")
def test_criterion_09_nascent_and_flux():
    widths = (0.1, 0.05, 0.025, 0.0125)
    for form in ("lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d", "lorentz_sq_3d"):
        for fn, support in quantum.TEST_FUNCTIONS.values():
            errs = [abs(quantum.nascent_pairing(quantum.NascentFamily(form, a), fn, support) - float(fn(0.0)))
                    for a in widths]
            assert all(x > y for x, y in zip(errs, errs[1:])), (form, errs)
    devs = [abs(quantum.coulomb_momentum_limit(a) - 1.0) for a in (0.04, 0.02, 0.01, 0.005)]
    assert all(x > y for x, y in zip(devs, devs[1:]))
    w = quantum.WaveSpec("spherical", 1.7, mass=2.0)
    target = 4 * math.pi * 1.7 / 2.0
    for r in np.geomspace(0.1, 10.0, 9):
        assert abs(quantum.sphere_flux(w, r) / target - 1) <= 1e-8


@pytest.mark.acceptance(10, "heat: series vs implicit finite differences <= 1e-3 relative; long-time tent <= 1e-6; "
                            "sine form of the tent matches pointwise")
def test_criterion_10_heat():
    r = heatburgers.RodSpec(1.0, 0.7, 1.3)
    ts = r.time_scale
    xs = np.linspace(0.1, 0.9, 9)
    fa = heatburgers.fd_heat_solve(r, heatburgers.Field1D([0.0, 1.0], [1.0, 1.0]), 0.0, ts, 400, 400)
    for x in xs:
        assert abs(fa.interpolate(x) / heatburgers.series_case_a(r, 1.0, x, ts) - 1) <= 1e-3
    Q, tb = 2.0, 0.2 * ts
    fb = heatburgers.fd_heat_solve(r, heatburgers.Field1D([0.0, 1.0], [0.0, 0.0]), Q, tb, 400, 400)
    for x in xs:
        assert abs(fb.interpolate(x) / heatburgers.series_case_b(r, Q, x, tb) - 1) <= 1e-3
    peak = heatburgers.stationary_omega(r, Q, 0.5)
    tr = heatburgers.SeriesTruncation(10 ** 6)
    for x in np.linspace(0.05, 0.95, 19):
        late = heatburgers.series_case_b(r, Q, x, 60 * ts, tr, form="direct")
        assert abs(late - heatburgers.stationary_omega(r, Q, x)) / peak <= 1e-6
    for x in (0.1, 0.2, 0.3, 0.4, 0.45, 0.55, 0.6, 0.7, 0.8, 0.9):
        assert abs(heatburgers.stationary_omega_series(r, Q, x) - heatburgers.stationary_omega(r, Q, x)) / peak <= 1e-6


@pytest.mark.acceptance(11, "Burgers: residuals of Cole-Hopf images fall at order 2; constant speed reproduced to "
                            "1e-10")
def test_criterion_11_burgers():
    nu = 0.2
    e = heatburgers.ExponentialHeatSolution(nu, [1.0, -0.5])
    res = [heatburgers.burgers_residual(nu, heatburgers.SpaceTimeField.sample(
        e.velocity, np.linspace(-1, 1, n + 1), np.linspace(0.5, 1.0, n + 1))) for n in (20, 40, 80)]
    for a, b in zip(res, res[1:]):
        assert abs(math.log2(a / b) - 2.0) <= 0.1
    res = []
    for n in (8, 16, 32):
        v = heatburgers.SpaceTimeField.sample(lambda a, b: heatburgers.two_bump_velocity(1.0, a, b),
                                              np.linspace(-1, 1, n + 1), np.linspace(1.0, 1.25, n + 1))
        res.append(heatburgers.burgers_residual(1.0, v))
    for a, b in zip(res, res[1:]):
        assert abs(math.log2(a / b) - 2.0) <= 0.15
    one = heatburgers.ExponentialHeatSolution(nu, [0.7])
    xs = np.linspace(-3, 3, 13)
    assert np.max(np.abs(one.velocity(xs, 1.3) - 0.7)) <= 1e-10
    assert max(abs(heatburgers.cole_hopf_fd(nu, lambda y: float(one.value(y, 1.3)), x) - 0.7) for x in xs) <= 1e-10


@pytest.mark.acceptance(12, "top: 50 random runs conserve energy and momenta to 1e-8, satisfy the reduced equation to "
                            "1e-8, stay in the band, and match the lift prediction")
def test_criterion_12_top():
    rng = RandomStream(2024, 10).rng
    lifting = 0
    for _ in range(50):
        spec = mechanics.random_top(rng)
        run = mechanics.simulate_top(spec, 50.0 / spec.omega0)
        dr = run.drifts()
        assert dr["energy"] <= 1e-8 and dr["p_phi"] <= 1e-8 and dr["p_psi"] <= 1e-8, dr
        assert run.reduced_equation_residual() <= 1e-8
        band = mechanics.motion_band(mechanics.dimensionless(spec), spec.epsilon)
        lo, hi = band.cos_theta_range
        ct = np.cos(run.theta)
        assert np.all(ct >= lo - 1e-6) and np.all(ct <= hi + 1e-6)
        early = math.cos(spec.epsilon) - math.cos(float(run.traj(0.01 / spec.omega0)[0])) > 0
        assert early == band.lifts_up
        if band.lifts_up:
            lifting += 1
            assert np.all(run.theta >= spec.epsilon - 1e-6)
            assert np.all(run.theta <= math.pi - spec.epsilon + 1e-6)
    assert lifting > 0


@pytest.mark.acceptance(13, "determinism: two 'verify all --seed 42' runs are byte-identical; full run under 10 min")
def test_criterion_13_determinism(tmp_path):
    cmd = [sys.executable, "-m", "mathphys_bench.cli", "verify", "all", "--seed", "42"]
    start = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True)
    elapsed = time.perf_counter() - start
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    assert elapsed < 600.0
