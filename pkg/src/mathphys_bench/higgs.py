"""Two-Higgs-doublet scalar potential: vacuum alignment and stability.

The potential is always evaluated from the full doublet expression

    V = -μ₁²(φ₁†φ₁) - μ₂²(φ₂†φ₂) - μ₁₂²(φ₁†φ₂) - (μ₁₂²)*(φ₂†φ₁)
        + λ₁(φ₁†φ₁)² + λ₂(φ₂†φ₂)² + λ₃(φ₁†φ₁)(φ₂†φ₂) + λ₄(φ₁†φ₂)(φ₂†φ₁)
        + (λ₅/2)(φ₁†φ₂)² + (λ₅*/2)(φ₂†φ₁)²

with vacuum values ⟨φ₁⟩ = (0, v₁)/√2 and ⟨φ₂⟩ = (v₂', a e^{iθ})/√2. The
analytic curvature matrix of the aligned vacuum is cross-checked against
finite differences of this expression after the minimum conditions have
been solved for μ₁² and μ₂².
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVev, DomainError


@dataclass(frozen=True)
class TwoHiggsParams:
    mu1_sq: float = 0.0
    mu2_sq: float = 0.0
    mu12_sq: complex = 0j
    lambda1: float = 0.0
    lambda2: float = 0.0
    lambda3: float = 0.0
    lambda4: float = 0.0
    lambda5: complex = 0j

    @property
    def lambda345(self) -> float:
        return self.lambda3 + self.lambda4 + complex(self.lambda5).real

    def with_mu(self, mu1_sq: float, mu2_sq: float) -> "TwoHiggsParams":
        return TwoHiggsParams(mu1_sq, mu2_sq, self.mu12_sq, self.lambda1, self.lambda2,
                              self.lambda3, self.lambda4, self.lambda5)


@dataclass(frozen=True)
class VevConfig:
    v1: float
    v2_prime: float = 0.0
    a: float = 0.0
    theta: float = 0.0

    @property
    def v2(self) -> float:
        """Norm of the second vacuum value, √(v₂'² + a²)."""
        return math.hypot(self.v2_prime, self.a)

    def doublets(self) -> tuple[np.ndarray, np.ndarray]:
        root2 = math.sqrt(2.0)
        phi1 = np.array([0.0, self.v1], dtype=complex) / root2
        phi2 = np.array([self.v2_prime, self.a * np.exp(1j * self.theta)], dtype=complex) / root2
        return phi1, phi2


@dataclass(frozen=True)
class StabilityReport:
    aligned_theta_stable: bool
    re_lambda5_neg: bool
    l4_plus_l5_neg: bool
    trace_pos: bool
    det_nonneg: bool
    hessian: np.ndarray
    eigenvalues: tuple[float, float]

    @property
    def stable(self) -> bool:
        return self.trace_pos and self.det_nonneg


def master_potential(p: TwoHiggsParams, phi1: np.ndarray, phi2: np.ndarray) -> float:
    """V(φ₁, φ₂) for complex doublets; the imaginary part vanishes by hermiticity."""
    n11 = np.vdot(phi1, phi1)
    n22 = np.vdot(phi2, phi2)
    n12 = np.vdot(phi1, phi2)
    n21 = np.vdot(phi2, phi1)
    mu12 = complex(p.mu12_sq)
    l5 = complex(p.lambda5)
    v = (-p.mu1_sq * n11 - p.mu2_sq * n22 - mu12 * n12 - mu12.conjugate() * n21
         + p.lambda1 * n11 ** 2 + p.lambda2 * n22 ** 2 + p.lambda3 * n11 * n22
         + p.lambda4 * n12 * n21 + 0.5 * l5 * n12 ** 2 + 0.5 * l5.conjugate() * n21 ** 2)
    return float(v.real)


def potential_on_vevs(p: TwoHiggsParams, c: VevConfig) -> float:
    """The potential at the vacuum configuration ``c``."""
    phi1, phi2 = c.doublets()
    return master_potential(p, phi1, phi2)


def aligned_potential(p: TwoHiggsParams, v1: float, v2: float) -> float:
    """V restricted to real aligned vacua (v₂' = 0, θ = 0, a = v₂)."""
    return potential_on_vevs(p, VevConfig(v1, 0.0, v2, 0.0))


def theta_shift(p: TwoHiggsParams, v1: float, a: float, theta: float) -> float:
    """V(a, θ) - V(a, 0) from the phase-dependent terms alone.

    -Re μ₁₂² v₁a(cos θ - 1) + Im μ₁₂² v₁a sin θ
    + ¼ Re λ₅ v₁²a²(cos 2θ - 1) - ¼ Im λ₅ v₁²a² sin 2θ
    """
    mu12 = complex(p.mu12_sq)
    l5 = complex(p.lambda5)
    x = v1 * a
    return (-mu12.real * x * (math.cos(theta) - 1.0) + mu12.imag * x * math.sin(theta)
            + 0.25 * l5.real * x * x * (math.cos(2 * theta) - 1.0)
            - 0.25 * l5.imag * x * x * math.sin(2 * theta))


def theta_derivatives(p: TwoHiggsParams, v1: float, a: float) -> tuple[float, float]:
    """First and second θ-derivatives of V at θ = 0."""
    mu12 = complex(p.mu12_sq)
    l5 = complex(p.lambda5)
    x = v1 * a
    return mu12.imag * x - 0.5 * l5.imag * x * x, mu12.real * x - l5.real * x * x


def alignment_conditions(p: TwoHiggsParams, v1: float, a: float) -> tuple[bool, bool, bool]:
    """Conditions for the vacuum values to align.

    Returns
    -------
    theta_stable
        Re λ₅ - Re μ₁₂²/(v₁a) < 0, so θ = 0 is a local minimum in the phase.
    bounded_phase
        Re λ₅ < 0, the same at large field values.
    funnel_to_lower
        λ₄ + Re λ₅ < 0, which removes the v₂' (charge-breaking) direction.
    """
    if v1 * a == 0:
        raise DomainError("phase stability needs v1 * a != 0")
    l5r = complex(p.lambda5).real
    theta_stable = l5r - complex(p.mu12_sq).real / (v1 * a) < 0
    return bool(theta_stable), bool(l5r < 0), bool(p.lambda4 + l5r < 0)


def hessian(p: TwoHiggsParams, v1: float, v2: float) -> np.ndarray:
    """Curvature matrix of V in (v₁, v₂) at an aligned extremum.

    H₁₁ = 2λ₁v₁² + Re μ₁₂² v₂/v₁,  H₂₂ = 2λ₂v₂² + Re μ₁₂² v₁/v₂,
    H₁₂ = -Re μ₁₂² + λ₃₄₅ v₁v₂.
    """
    if v1 * v2 == 0:
        raise DomainError("hessian needs v1 * v2 != 0")
    m = complex(p.mu12_sq).real
    off = -m + p.lambda345 * v1 * v2
    return np.array([[2 * p.lambda1 * v1 ** 2 + m * v2 / v1, off],
                     [off, 2 * p.lambda2 * v2 ** 2 + m * v1 / v2]])


def det_condition_expanded(p: TwoHiggsParams, v1: float, v2: float) -> bool:
    """det H ≥ 0 written as an inequality between couplings.

    4λ₁λ₂ + 2λ₁ Re μ₁₂² v₁/v₂³ + 2λ₂ Re μ₁₂² v₂/v₁³
        ≥ λ₃₄₅² - 2λ₃₄₅ Re μ₁₂²/(v₁v₂)

    which is det H / (v₁v₂)² ≥ 0.
    """
    m = complex(p.mu12_sq).real
    l345 = p.lambda345
    lhs = 4 * p.lambda1 * p.lambda2 + 2 * p.lambda1 * m * v1 / v2 ** 3 + 2 * p.lambda2 * m * v2 / v1 ** 3
    return bool(lhs >= l345 ** 2 - 2 * l345 * m / (v1 * v2))


def stability_check(p: TwoHiggsParams, v1: float, v2: float) -> StabilityReport:
    """Second-order test of the aligned vacuum (v₁, v₂)."""
    h = hessian(p, v1, v2)
    trace = float(np.trace(h))
    det = float(h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0])
    eig = np.linalg.eigvalsh(h)
    theta_ok, bounded, funnel = alignment_conditions(p, v1, v2)
    return StabilityReport(theta_ok, bounded, funnel, trace > 0, det >= 0, h,
                           (float(eig[0]), float(eig[1])))


def special_case_stable(p: TwoHiggsParams) -> bool:
    """Stability when Re μ₁₂² = 0: λ₁ > 0, λ₂ > 0 and 4λ₁λ₂ ≥ λ₃₄₅²."""
    return bool(p.lambda1 > 0 and p.lambda2 > 0 and 4 * p.lambda1 * p.lambda2 >= p.lambda345 ** 2)


def solve_tadpoles(p: TwoHiggsParams, v1: float, v2: float, step: float | None = None) -> TwoHiggsParams:
    """Choose μ₁², μ₂² so that (v₁, v₂) is a stationary point of V.

    Uses only finite differences of the potential: with μ₁² = μ₂² = 0 the
    gradient g_i of V₀ fixes μ_i² = g_i / v_i, because the μ terms contribute
    -μ_i² v_i to ∂V/∂v_i.
    """
    base = p.with_mu(0.0, 0.0)
    h = step or 1e-3 * max(v1, v2)

    def d(fn, x):
        return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)

    g1 = d(lambda x: aligned_potential(base, x, v2), v1)
    g2 = d(lambda x: aligned_potential(base, v1, x), v2)
    return p.with_mu(g1 / v1, g2 / v2)


def fd_hessian(p: TwoHiggsParams, v1: float, v2: float, step: float | None = None) -> np.ndarray:
    """Fourth-order central-difference Hessian of the aligned potential."""
    h = step or 1e-2 * min(v1, v2)
    f = lambda x, y: aligned_potential(p, x, y)  # noqa: E731
    c = [(-2, -1 / 12), (-1, 4 / 3), (0, -5 / 2), (1, 4 / 3), (2, -1 / 12)]
    h11 = sum(w * f(v1 + i * h, v2) for i, w in c) / h ** 2
    h22 = sum(w * f(v1, v2 + i * h) for i, w in c) / h ** 2
    d1 = [(-2, 1 / 12), (-1, -2 / 3), (1, 2 / 3), (2, -1 / 12)]
    h12 = sum(wi * wj * f(v1 + i * h, v2 + j * h) for i, wi in d1 for j, wj in d1) / h ** 2
    return np.array([[h11, h12], [h12, h22]])


def quadratic_fit_hessian(p: TwoHiggsParams, v1: float, v2: float, radius: float | None = None,
                          n: int = 7) -> np.ndarray:
    """Hessian from a least-squares quadratic fit of V on an n×n patch."""
    r = radius or 1e-2 * min(v1, v2)
    offs = np.linspace(-r, r, n)
    rows, vals = [], []
    for dx in offs:
        for dy in offs:
            rows.append([1.0, dx, dy, 0.5 * dx * dx, dx * dy, 0.5 * dy * dy])
            vals.append(aligned_potential(p, v1 + dx, v2 + dy))
    coef = np.linalg.lstsq(np.array(rows), np.array(vals), rcond=None)[0]
    return np.array([[coef[3], coef[4]], [coef[4], coef[5]]])


def theta_minimizer(p: TwoHiggsParams, v1: float, a: float, n_grid: int = 3600) -> float:
    """Phase in [0, 2π) minimising V(a, θ) on a uniform scan."""
    thetas = np.linspace(0.0, 2 * math.pi, n_grid, endpoint=False)
    vals = [potential_on_vevs(p, VevConfig(v1, 0.0, a, th)) for th in thetas]
    return float(thetas[int(np.argmin(vals))])


def charged_higgs_rotation(v1: float, v2: float) -> tuple[float, np.ndarray, tuple[float, float]]:
    """Rotation angle β with tan β = v₂/v₁ and the rotation to the Higgs basis.

    Returns ``(beta, rotation, h_plus)`` where ``rotation @ (v1, v2) =
    (√(v1² + v2²), 0)`` and ``h_plus = (sin β, -cos β)`` are the weights of
    φ₁⁺ and φ₂⁺ in the physical charged field.
    """
    if v1 < 0 or v2 < 0:
        raise DomainError("vacuum values must be non-negative")
    if v1 == 0 and v2 == 0:
        raise DegenerateVev("both vacuum values vanish")
    beta = math.atan2(v2, v1)
    c, s = math.cos(beta), math.sin(beta)
    rotation = np.array([[c, s], [-s, c]])
    return beta, rotation, (s, -c)


def cp_violation_flag(p: TwoHiggsParams) -> bool:
    """True when either complex coupling has a nonzero imaginary part."""
    return complex(p.mu12_sq).imag != 0.0 or complex(p.lambda5).imag != 0.0


def random_params(rng: np.random.Generator, complex_couplings: bool = True) -> TwoHiggsParams:
    """Draw couplings of order one for randomized audits."""
    mu12 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1) if complex_couplings else 0.0)
    l5 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1) if complex_couplings else 0.0)
    return TwoHiggsParams(rng.uniform(-1, 1), rng.uniform(-1, 1), mu12,
                          rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0),
                          rng.uniform(-1, 1), rng.uniform(-1, 1), l5)
