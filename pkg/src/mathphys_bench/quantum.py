"""Probability flux of free waves, a particle on a flux-threaded torus, and
nascent delta families.

Defaults are natural units ħ = m = c = e = 1; every function takes them as
overridable arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .errors import DomainError, SingularPoint
from .numerics import QuadratureSpec, integrate


# ---------------------------------------------------------------------------
# probability flux
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WaveSpec:
    """Plane wave e^{i k·r} or outgoing spherical wave e^{ikr}/r."""

    kind: str
    k: float
    direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.kind not in ("plane", "spherical"):
            raise DomainError(f"unknown wave kind {self.kind!r}")
        if self.k < 0 or not self.mass > 0 or not self.hbar > 0:
            raise DomainError("need k >= 0, mass > 0, hbar > 0")
        if self.kind == "plane" and not np.linalg.norm(self.direction) > 0:
            raise DomainError("plane-wave direction must be nonzero")

    @property
    def k_vector(self) -> np.ndarray:
        d = np.asarray(self.direction, dtype=float)
        return self.k * d / np.linalg.norm(d)


def wavefunction(w: WaveSpec, point) -> complex:
    r = np.asarray(point, dtype=float)
    if w.kind == "plane":
        return complex(np.exp(1j * float(np.dot(w.k_vector, r))))
    rad = float(np.linalg.norm(r))
    if rad == 0.0:
        raise SingularPoint("spherical wave is singular at the origin")
    return complex(np.exp(1j * w.k * rad) / rad)


def flux_analytic(w: WaveSpec, point) -> np.ndarray:
    """Probability current: ħk/m for a plane wave, (ħk/m) r̂/r² for a spherical one."""
    if w.kind == "plane":
        return w.hbar / w.mass * w.k_vector
    r = np.asarray(point, dtype=float)
    rad = float(np.linalg.norm(r))
    if rad == 0.0:
        raise SingularPoint("spherical-wave flux is singular at the origin")
    return w.hbar * w.k / w.mass * r / rad ** 3


def flux_finite_difference(w: WaveSpec, point, h: float = 1e-4) -> np.ndarray:
    """j = (ħ/m) Im(ψ* ∇ψ) with ∇ψ by central differences."""
    r = np.asarray(point, dtype=float)
    psi = wavefunction(w, r)
    grad = np.empty(3, dtype=complex)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        grad[i] = (wavefunction(w, r + e) - wavefunction(w, r - e)) / (2 * h)
    return w.hbar / w.mass * np.imag(np.conj(psi) * grad)


def sphere_flux(w: WaveSpec, r: float, spec: QuadratureSpec | None = None) -> float:
    """Outward flux of the current through the sphere of radius r, by 2-D quadrature."""
    if not r > 0:
        raise DomainError("radius must be positive")
    spec = spec or QuadratureSpec(1e-13, 1e-12)

    def over_phi(theta):
        st, ct = math.sin(theta), math.cos(theta)

        def integrand(phi):
            n = np.array([st * math.cos(phi), st * math.sin(phi), ct])
            return float(np.dot(flux_analytic(w, r * n), n)) * r * r * st

        return integrate(integrand, 0.0, 2 * math.pi, spec)

    return integrate(over_phi, 0.0, math.pi, spec)


def box_flux(w: WaveSpec, half_side: float = 1.0, center=(0.0, 0.0, 0.0),
             spec: QuadratureSpec | None = None) -> float:
    """Net outward flux through the faces of an axis-aligned cube."""
    spec = spec or QuadratureSpec(1e-13, 1e-12)
    c = np.asarray(center, dtype=float)
    total = 0.0
    for axis in range(3):
        u, v = [i for i in range(3) if i != axis]
        for sign in (-1.0, 1.0):
            def face(s, t, axis=axis, u=u, v=v, sign=sign):
                p = c.copy()
                p[axis] += sign * half_side
                p[u] += s
                p[v] += t
                return sign * float(flux_analytic(w, p)[axis])

            total += integrate(lambda s: integrate(lambda t: face(s, t), -half_side, half_side, spec),
                               -half_side, half_side, spec)
    return total


# ---------------------------------------------------------------------------
# torus with phase-lagged boundary conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusSpec:
    """Rectangle [0, a] × [0, b] with ψ(0, y) = e^{iφ₂} ψ(a, y) and ψ(x, 0) = e^{iφ₁} ψ(x, b)."""

    a: float
    b: float
    phi1: float = 0.0
    phi2: float = 0.0
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.mass > 0 and self.hbar > 0):
            raise DomainError("a, b, mass and hbar must be positive")


def torus_wavenumbers(t: TorusSpec, n1: int, n2: int) -> tuple[float, float]:
    """(k_x, k_y) = ((2πn₂ - φ₂)/a, (2πn₁ - φ₁)/b)."""
    return (2 * math.pi * n2 - t.phi2) / t.a, (2 * math.pi * n1 - t.phi1) / t.b


def torus_eigenvalue(t: TorusSpec, n1: int, n2: int) -> float:
    """E = (ħ²/2m)[((2πn₁ - φ₁)/b)² + ((2πn₂ - φ₂)/a)²]."""
    kx, ky = torus_wavenumbers(t, n1, n2)
    return t.hbar ** 2 / (2 * t.mass) * (kx * kx + ky * ky)


def torus_mode(t: TorusSpec, n1: int, n2: int, x, y):
    """Plane-wave eigenfunction e^{i(k_x x + k_y y)}."""
    kx, ky = torus_wavenumbers(t, n1, n2)
    return np.exp(1j * (kx * np.asarray(x, dtype=float) + ky * np.asarray(y, dtype=float)))


def boundary_residual(t: TorusSpec, n1: int, n2: int, samples) -> float:
    """Largest violation of the two twisted boundary conditions at sample points in [0, 1]."""
    s = np.asarray(samples, dtype=float)
    xs, ys = s * t.a, s * t.b
    r1 = np.abs(torus_mode(t, n1, n2, xs, 0.0) - np.exp(1j * t.phi1) * torus_mode(t, n1, n2, xs, t.b))
    r2 = np.abs(torus_mode(t, n1, n2, 0.0, ys) - np.exp(1j * t.phi2) * torus_mode(t, n1, n2, t.a, ys))
    return float(max(r1.max(), r2.max()))


def torus_spectrum(t: TorusSpec, n_max: int = 10) -> np.ndarray:
    """Sorted eigenvalues for |n₁|, |n₂| ≤ n_max."""
    vals = [torus_eigenvalue(t, n1, n2)
            for n1 in range(-n_max, n_max + 1) for n2 in range(-n_max, n_max + 1)]
    return np.sort(np.array(vals))


def lowest_exact(t: TorusSpec, count: int) -> np.ndarray:
    n_max = 4 + int(math.sqrt(count)) + int(abs(t.phi1) / (2 * math.pi)) + int(abs(t.phi2) / (2 * math.pi))
    return torus_spectrum(t, n_max)[:count]


def _twisted_second_difference(n: int, h: float, phase: float) -> sp.csr_matrix:
    """1-D matrix of -d²/dx² with ψ_n = e^{-i phase} ψ_0 across the cut."""
    main = np.full(n, 2.0, dtype=complex)
    off = np.full(n - 1, -1.0, dtype=complex)
    m = sp.diags([off, main, off], [-1, 0, 1], shape=(n, n), format="lil", dtype=complex)
    # right neighbour of the last node is e^{-i phase} times node 0; the
    # Hermitian conjugate link carries the opposite phase
    m[n - 1, 0] += -np.exp(-1j * phase)
    m[0, n - 1] += -np.exp(1j * phase)
    return (m / (h * h)).tocsr()


def torus_fd_hamiltonian(t: TorusSpec, n: int) -> sp.csr_matrix:
    """Five-point discretization of -(ħ²/2m)Δ on an n × n grid with twisted links."""
    if n < 4:
        raise DomainError("grid needs at least 4 points per side")
    dx = _twisted_second_difference(n, t.a / n, t.phi2)
    dy = _twisted_second_difference(n, t.b / n, t.phi1)
    eye = sp.identity(n, dtype=complex, format="csr")
    lap = sp.kron(dx, eye, format="csr") + sp.kron(eye, dy, format="csr")
    return (t.hbar ** 2 / (2 * t.mass)) * lap


def torus_fd_eigenvalues(t: TorusSpec, n: int, count: int = 6) -> np.ndarray:
    """Lowest ``count`` eigenvalues of the finite-difference Hamiltonian."""
    h = torus_fd_hamiltonian(t, n)
    if n * n <= 400:
        vals = np.linalg.eigvalsh(h.toarray())
        return np.sort(vals)[:count]
    # Lanczos can return fewer copies of a degenerate level than it has, so
    # extra eigenvalues are requested and only the lowest ones are kept.
    scale = t.hbar ** 2 / (2 * t.mass) * (2 * math.pi) ** 2 / max(t.a, t.b) ** 2
    k = min(count + 8, n * n - 2)
    vals = eigsh(h, k=k, sigma=-scale, which="LM", return_eigenvectors=False, tol=1e-13)
    return np.sort(vals.real)[:count]


def torus_convergence(t: TorusSpec, grids=(32, 64, 128), count: int = 6) -> dict:
    """Errors of FD eigenvalues against the exact spectrum and the observed orders.

    Modes whose exact eigenvalue is zero are left out of the order estimate
    because the discrete value is exactly zero as well.
    """
    exact = lowest_exact(t, count)
    errors = np.array([np.abs(torus_fd_eigenvalues(t, n, count) - exact) for n in grids])
    keep = exact > 1e-12 * max(1.0, exact.max())
    orders = np.log(errors[:-1, keep] / errors[1:, keep]) / np.log(
        np.asarray(grids[1:], float) / np.asarray(grids[:-1], float))[:, None]
    return {"exact": exact, "errors": errors, "orders": orders}


def flux_phase_map(phi: float, e: float = 1.0, c: float = 1.0, hbar: float = 1.0) -> tuple[float, float]:
    """Magnetic flux threading the torus for a phase lag φ.

    Returns ``(ħc φ / e, Φ₀ φ / π)`` with Φ₀ = πħc/e; the two agree, and no
    quantization is imposed.
    """
    if e == 0:
        raise DomainError("charge must be nonzero")
    flux_quantum = math.pi * hbar * c / e
    return hbar * c / e * phi, flux_quantum * phi / math.pi


# ---------------------------------------------------------------------------
# nascent delta families
# ---------------------------------------------------------------------------

def lorentz_1d(a: float, x):
    return (a / math.pi) / (a * a + np.asarray(x, dtype=float) ** 2)


def lorentz_sq_x2_1d(a: float, x):
    x = np.asarray(x, dtype=float)
    return (2.0 / math.pi) * a * x * x / (a * a + x * x) ** 2


def lorentz_cube_1d(a: float, x):
    x = np.asarray(x, dtype=float)
    return 2.0 * a ** 3 / (math.pi * (a * a + x * x) ** 2)


def lorentz_sq_3d(a: float, p):
    """Radial profile a/(π²(a² + p²)²); integrates to 1 over R³."""
    p = np.asarray(p, dtype=float)
    return a / (math.pi ** 2 * (a * a + p * p) ** 2)


FAMILIES_1D = {
    "lorentz_1d": lorentz_1d,
    "lorentz_sq_x2_1d": lorentz_sq_x2_1d,
    "lorentz_cube_1d": lorentz_cube_1d,
}


@dataclass(frozen=True)
class NascentFamily:
    form: str
    a: float

    def __post_init__(self):
        if self.form not in (*FAMILIES_1D, "lorentz_sq_3d", "coulomb_momentum"):
            raise DomainError(f"unknown family {self.form!r}")
        if not self.a > 0:
            raise DomainError("width a must be positive")

    @property
    def is_radial(self) -> bool:
        return self.form in ("lorentz_sq_3d", "coulomb_momentum")

    def __call__(self, x):
        if self.form in FAMILIES_1D:
            return FAMILIES_1D[self.form](self.a, x)
        if self.form == "lorentz_sq_3d":
            return lorentz_sq_3d(self.a, x)
        return coulomb_momentum_wavefunction(self.a, x) / (2 * math.pi) ** 3


def bump(x, width: float = 1.0):
    """C^∞ test function exp(-1/(1 - (x/L)²)) supported on |x| < L."""
    u = np.asarray(x, dtype=float) / width
    inside = np.abs(u) < 1.0
    safe = np.where(inside, 1.0 - u * u, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


def gaussian_cutoff(x, width: float = 1.0):
    """exp(-2x²) times a bump of half-width 2L, smooth with compact support."""
    x = np.asarray(x, dtype=float)
    return np.exp(-2.0 * (x / width) ** 2) * bump(x, 2.0 * width) * math.e


TEST_FUNCTIONS: dict[str, tuple[Callable, float]] = {
    "bump": (bump, 1.0),
    "gaussian_cutoff": (gaussian_cutoff, 2.0),
}


def nascent_pairing(f: NascentFamily, test_fn: Callable, support: float,
                    spec: QuadratureSpec | None = None) -> float:
    """⟨f_a, φ⟩ for a test function supported on |x| ≤ ``support``.

    One-dimensional families integrate over [-L, L]; radial families over the
    ball of radius L with the 4πp² measure. Breakpoints at multiples of a
    resolve the peak.
    """
    spec = spec or QuadratureSpec(1e-14, 1e-12, 20000)
    a = f.a
    marks = [m * a for m in (1.0, 4.0, 16.0, 64.0) if m * a < support]
    if f.is_radial:
        return integrate(lambda p: 4 * math.pi * np.asarray(p) ** 2 * f(p) * test_fn(p),
                         0.0, support, spec, points=marks)
    pts = [-m for m in marks[::-1]] + [0.0] + marks
    return integrate(lambda x: f(x) * test_fn(x), -support, support, spec, points=pts)


def coulomb_origin_amplitude(alpha_mu: float) -> float:
    """|φ_c(r = 0)| = √((αμ)³/π) for the hydrogen-like ground state."""
    return math.sqrt(alpha_mu ** 3 / math.pi)


def coulomb_momentum_wavefunction(alpha_mu: float, p):
    """φ_c(p) = 8π αμ |φ_c(0)| / (p² + (αμ)²)²."""
    p = np.asarray(p, dtype=float)
    return 8 * math.pi * alpha_mu * coulomb_origin_amplitude(alpha_mu) / (p * p + alpha_mu ** 2) ** 2


def coulomb_momentum_limit(alpha_mu: float, test_fn: Callable = bump, support: float = 1.0,
                           spec: QuadratureSpec | None = None) -> float:
    """(2π)^{-3} ∫ φ_c(p) Φ(p) d³p divided by |φ_c(0)| Φ(0).

    Tends to 1 as αμ → 0, which is the statement φ_c(p) ≈ (2π)³ δ(p) |φ_c(0)|.
    """
    if not alpha_mu > 0:
        raise DomainError("alpha_mu must be positive")
    val = nascent_pairing(NascentFamily("coulomb_momentum", alpha_mu), test_fn, support, spec)
    return val / (coulomb_origin_amplitude(alpha_mu) * float(test_fn(0.0)))
