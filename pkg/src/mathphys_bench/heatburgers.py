"""Heat conduction in a rod with Dirichlet ends, and the Cole-Hopf route to
viscous Burgers flow.

Two rod problems are solved by Fourier series: (a) uniform initial
temperature T₀ and cold ends; (b) cold start with a point source of strength
Q at the midpoint. A Crank-Nicolson finite-difference solver serves as the
independent check. On the whole line, solutions of f_t = ν f_xx are built by
heat-kernel convolution and mapped to Burgers solutions v = -2ν f_x / f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, ZeroDenominator
from .numerics import QuadratureSpec, integrate


@dataclass(frozen=True)
class RodSpec:
    l: float = 1.0
    a_sq: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.l > 0 and self.a_sq > 0 and self.c > 0):
            raise DomainError("l, a_sq and c must be positive")

    @property
    def time_scale(self) -> float:
        """(l/(πa))², the decay time of the slowest mode."""
        return self.l ** 2 / (math.pi ** 2 * self.a_sq)


@dataclass(frozen=True)
class SeriesTruncation:
    n_terms: int = 512

    def __post_init__(self):
        if self.n_terms < 1:
            raise DomainError("n_terms must be >= 1")


@dataclass
class Field1D:
    x: np.ndarray
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.x.shape != self.values.shape:
            raise DomainError("grid and values must have the same shape")
        if np.any(np.diff(self.x) <= 0):
            raise DomainError("grid must be strictly increasing")

    def interpolate(self, xq) -> np.ndarray:
        return np.interp(xq, self.x, self.values)


def _odd_modes(r: RodSpec, n_terms: int):
    k = np.arange(n_terms, dtype=float)
    m = 2.0 * k + 1.0
    return k, m, (math.pi * m / r.l) ** 2 * r.a_sq


def _check_x(r: RodSpec, x: float):
    if not 0.0 <= x <= r.l:
        raise DomainError(f"x={x} outside [0, {r.l}]")


def series_case_a(r: RodSpec, T0: float, x: float, t: float,
                  tr: SeriesTruncation | None = None) -> float:
    """(4T₀/π) Σ_k sin(π(2k+1)x/l) e^{-(π(2k+1)a/l)² t} / (2k+1).

    For small positive t the term count grows like l²/(a²t) (capped at 10⁵)
    so that the neglected modes stay negligible.
    """
    _check_x(r, x)
    if t < 0:
        raise DomainError("t must be >= 0")
    if x == 0.0 or x == r.l:
        return 0.0
    n = (tr or SeriesTruncation()).n_terms
    if t > 0:
        n = max(n, int(math.ceil(min(100_000.0, r.l ** 2 / (r.a_sq * t)))))
    _, m, lam = _odd_modes(r, n)
    terms = np.sin(math.pi * m * x / r.l) * np.exp(-lam * t) / m
    return 4.0 * T0 / math.pi * math.fsum(terms)


def stationary_omega(r: RodSpec, Q: float, x: float) -> float:
    """Steady tent profile -(Q/2a²c)|x - l/2| + Ql/(4a²c)."""
    _check_x(r, x)
    k = Q / (r.a_sq * r.c)
    return -0.5 * k * abs(x - 0.5 * r.l) + 0.25 * k * r.l


def stationary_omega_series(r: RodSpec, Q: float, x: float, n_terms: int = 100_000) -> float:
    """Sine-series form (2Ql/π²a²c) Σ_k (-1)^k sin(π(2k+1)x/l)/(2k+1)²."""
    _check_x(r, x)
    k, m, _ = _odd_modes(r, n_terms)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    terms = sign * np.sin(math.pi * m * x / r.l) / m ** 2
    return 2.0 * Q * r.l / (math.pi ** 2 * r.a_sq * r.c) * math.fsum(terms)


def series_case_b(r: RodSpec, Q: float, x: float, t: float,
                  tr: SeriesTruncation | None = None, form: str = "split") -> float:
    """Temperature for the midpoint source, starting from T ≡ 0.

    ``form`` selects how the series is summed:

    ``"split"``
        ω(x) in closed form plus the decaying series
        -(2Ql/π²a²c) Σ (-1)^k sin(…)/(2k+1)² e^{-λ_k t}. For small t the
        term count grows until e^{-λ_k t} < e^{-50} at the cut (capped at
        10⁶); t = 0 returns the initial value 0 exactly.
    ``"direct"``
        (2Ql/π²a²c) Σ (-1)^k sin(…)/(2k+1)² [1 - e^{-λ_k t}]; truncation
        error ~ 1/(4N) once t is large.
    ``"method2"``
        Σ_n C_n(t) sin(πnx/l) with C_n = (2Q/lc) sin(πn/2)(πna/l)^{-2}
        [1 - e^{-(πna/l)² t}], summed over all n ≤ 2N.
    """
    _check_x(r, x)
    if t < 0:
        raise DomainError("t must be >= 0")
    n_terms = (tr or SeriesTruncation()).n_terms
    pref = 2.0 * Q * r.l / (math.pi ** 2 * r.a_sq * r.c)
    if form == "split":
        if t == 0.0:
            return 0.0
        slowest = (math.pi / r.l) ** 2 * r.a_sq
        n_terms = max(n_terms, int(math.ceil(min(1e6, 0.5 * math.sqrt(50.0 / (slowest * t))))))
    if form == "method2":
        n = np.arange(1, 2 * n_terms + 1, dtype=float)
        lam = (math.pi * n / r.l) ** 2 * r.a_sq
        coeff = 2.0 * Q / (r.l * r.c) * np.sin(math.pi * n / 2.0) / lam * (-np.expm1(-lam * t))
        return math.fsum(coeff * np.sin(math.pi * n * x / r.l))
    k, m, lam = _odd_modes(r, n_terms)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    shape = sign * np.sin(math.pi * m * x / r.l) / m ** 2
    if form == "direct":
        return pref * math.fsum(shape * (-np.expm1(-lam * t)))
    if form == "split":
        return stationary_omega(r, Q, x) - pref * math.fsum(shape * np.exp(-lam * t))
    raise DomainError(f"unknown series form {form!r}")


def fd_heat_solve(r: RodSpec, initial: Field1D, source_strength: float, t_end: float,
                  nx: int, nt: int, snapshots=None, rannacher_steps: int = 2):
    """Crank-Nicolson solution of T_t = a² T_xx + (Q/c) δ(x - l/2), T(0) = T(l) = 0.

    The grid has ``nx`` intervals; the point source is lumped as Q/(cΔx) on
    the node nearest l/2 (exactly at l/2 when ``nx`` is even). The first
    ``rannacher_steps`` steps are split into two backward-Euler half steps
    each, which damps the start-up oscillations of a discontinuous initial
    profile. ``initial`` is interpolated onto the grid, then the boundary
    nodes are forced to zero.

    Returns the final :class:`Field1D`, or ``(final, [snapshots])`` when
    ``snapshots`` (a sequence of step indices) is given.
    """
    if nx < 32:
        raise DomainError("nx must be >= 32")
    if nt < 1 or not t_end > 0:
        raise DomainError("need nt >= 1 and t_end > 0")
    x = np.linspace(0.0, r.l, nx + 1)
    dx = r.l / nx
    dt = t_end / nt
    u = initial.interpolate(x).astype(float)
    u[0] = u[-1] = 0.0
    src = np.zeros(nx + 1)
    src[int(round(0.5 * r.l / dx))] = source_strength / (r.c * dx)
    src_in = src[1:-1]
    m = nx - 1

    def banded(theta_dt):
        coef = r.a_sq * theta_dt / dx ** 2
        ab = np.zeros((3, m))
        ab[0, 1:] = -coef
        ab[1, :] = 1.0 + 2.0 * coef
        ab[2, :-1] = -coef
        return ab

    def lap(v):
        return (np.concatenate([[0.0], v[:-1]]) - 2.0 * v + np.concatenate([v[1:], [0.0]])) / dx ** 2

    ab_cn = banded(0.5 * dt)
    ab_be = banded(0.5 * dt)
    want = set(int(s) for s in snapshots) if snapshots is not None else set()
    shots = []
    inner = u[1:-1].copy()
    for step in range(1, nt + 1):
        if step <= rannacher_steps:
            for _ in range(2):
                inner = solve_banded((1, 1), ab_be, inner + 0.5 * dt * src_in)
        else:
            rhs = inner + 0.5 * dt * r.a_sq * lap(inner) + dt * src_in
            inner = solve_banded((1, 1), ab_cn, rhs)
        if step in want:
            shots.append(Field1D(x, np.concatenate([[0.0], inner, [0.0]]), step * dt))
    final = Field1D(x, np.concatenate([[0.0], inner, [0.0]]), t_end)
    if snapshots is not None:
        return final, shots
    return final


def energy_balance_residual(r: RodSpec, Q: float, before: Field1D, after: Field1D) -> float:
    """|Δ∫T dx / Δt - mean of [a²(T_x(l) - T_x(0)) + Q/c]| over one interval.

    Integrals by the trapezoid rule, end fluxes by second-order one-sided
    differences, averaged over the two time levels.
    """
    dt = after.t - before.t

    def wall_flux(f: Field1D) -> float:
        h = f.x[1] - f.x[0]
        v = f.values
        left = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
        right = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
        return r.a_sq * (right - left)

    heat = lambda f: float(np.trapezoid(f.values, f.x))  # noqa: E731
    rate = (heat(after) - heat(before)) / dt
    expected = 0.5 * (wall_flux(before) + wall_flux(after)) + Q / r.c
    return abs(rate - expected)


# ---------------------------------------------------------------------------
# whole-line heat equation and Burgers
# ---------------------------------------------------------------------------

def heat_kernel_convolve(nu: float, f0: Callable, x: float, t: float, derivative: int = 0,
                         spec: QuadratureSpec | None = None, window: float = 12.0) -> float:
    """(4πνt)^{-1/2} ∫ f₀(y) e^{-(x-y)²/4νt} dy, or its x-derivative.

    The integral is restricted to |y - x| ≤ ``window``·√(2νt), outside
    which the Gaussian weight is below e^{-72}.
    """
    if not nu > 0 or not t > 0:
        raise DomainError("need nu > 0 and t > 0")
    if derivative not in (0, 1):
        raise DomainError("derivative must be 0 or 1")
    spec = spec or QuadratureSpec(1e-14, 1e-12)
    four_nu_t = 4.0 * nu * t
    norm = 1.0 / math.sqrt(math.pi * four_nu_t)
    half = window * math.sqrt(2.0 * nu * t)

    def integrand(y):
        y = np.asarray(y, dtype=float)
        g = np.exp(-(x - y) ** 2 / four_nu_t) * norm
        if derivative:
            g = g * (-2.0 * (x - y) / four_nu_t)
        return np.asarray(f0(y), dtype=float) * g

    return integrate(integrand, x - half, x + half, spec, points=[x])


def gaussian_heat_solution(sigma_sq: float, nu: float, x, t):
    """Heat evolution of e^{-x²/2σ²}: amplitude √(σ²/(σ²+2νt)), variance σ² + 2νt."""
    s2 = sigma_sq + 2.0 * nu * np.asarray(t, dtype=float)
    return np.sqrt(sigma_sq / s2) * np.exp(-np.asarray(x, dtype=float) ** 2 / (2.0 * s2))


def cole_hopf(nu: float, f: float, f_x: float, threshold: float = 1e-300) -> float:
    """v = -2ν f_x / f.

    Raises
    ------
    ZeroDenominator
        If |f| ≤ ``threshold``.
    """
    if not nu > 0:
        raise DomainError("nu must be positive")
    if abs(f) <= threshold:
        raise ZeroDenominator(f"|f| = {abs(f)} is below the threshold {threshold}")
    return -2.0 * nu * f_x / f


def cole_hopf_fd(nu: float, f: Callable[[float], float], x: float, h: float = 1e-3) -> float:
    """Cole-Hopf with f_x from a fourth-order central difference."""
    fx = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    return cole_hopf(nu, f(x), fx)


class ExponentialHeatSolution:
    """f = Σ_j w_j exp(-c_j x/2ν + c_j² t/4ν), an exact solution of f_t = ν f_xx.

    With one term the Cole-Hopf image is the constant v ≡ c; with two it is a
    viscous travelling front.
    """

    def __init__(self, nu: float, speeds, weights=None):
        self.nu = nu
        self.speeds = np.atleast_1d(np.asarray(speeds, dtype=float))
        self.weights = (np.ones_like(self.speeds) if weights is None
                        else np.atleast_1d(np.asarray(weights, dtype=float)))

    def _terms(self, x, t):
        x = np.asarray(x, dtype=float)[..., None]
        t = np.asarray(t, dtype=float)[..., None]
        c = self.speeds
        return self.weights * np.exp(-c * x / (2 * self.nu) + c * c * t / (4 * self.nu))

    def value(self, x, t):
        return self._terms(x, t).sum(axis=-1)

    def dx(self, x, t):
        return (self._terms(x, t) * (-self.speeds / (2 * self.nu))).sum(axis=-1)

    def velocity(self, x, t):
        """Cole-Hopf image, weighted mean of the speeds."""
        w = self._terms(x, t)
        return (w * self.speeds).sum(axis=-1) / w.sum(axis=-1)


def two_bump_initial(nu: float) -> Callable:
    """f₀ for v₀ = 1/(1+(x-5)²) + 1/(1+(x+5)²): exp(-(arctan(x-5) + arctan(x+5))/(2ν))."""
    def f0(y):
        y = np.asarray(y, dtype=float)
        return np.exp(-(np.arctan(y - 5.0) + np.arctan(y + 5.0)) / (2.0 * nu))
    return f0


def two_bump_velocity(nu: float, x: float, t: float, spec: QuadratureSpec | None = None) -> float:
    """Burgers solution from the two-bump initial profile, via convolution."""
    f0 = two_bump_initial(nu)
    f = heat_kernel_convolve(nu, f0, x, t, 0, spec)
    fx = heat_kernel_convolve(nu, f0, x, t, 1, spec)
    return cole_hopf(nu, f, fx)


@dataclass
class SpaceTimeField:
    """v sampled on a tensor grid, values[i, j] = v(t_i, x_j)."""

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray

    @classmethod
    def sample(cls, fn: Callable, x, t) -> "SpaceTimeField":
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        tt, xx = np.meshgrid(t, x, indexing="ij")
        try:
            vals = np.asarray(fn(xx, tt), dtype=float)
            if vals.shape != xx.shape:
                raise ValueError
        except (TypeError, ValueError):
            vals = np.array([[fn(float(xi), float(ti)) for xi in x] for ti in t])
        return cls(x, t, vals)


def burgers_residual(nu: float, v: SpaceTimeField) -> float:
    """max |v_t + v v_x - ν v_xx| over interior nodes, all derivatives central."""
    dx = np.diff(v.x)
    dt = np.diff(v.t)
    if not (np.allclose(dx, dx[0]) and np.allclose(dt, dt[0])):
        raise DomainError("burgers_residual expects uniform grids")
    h, k = dx[0], dt[0]
    u = v.values
    c = u[1:-1, 1:-1]
    ut = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * k)
    ux = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * h)
    uxx = (u[1:-1, 2:] - 2 * c + u[1:-1, :-2]) / (h * h)
    return float(np.max(np.abs(ut + c * ux - nu * uxx)))
