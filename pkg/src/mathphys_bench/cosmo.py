"""Temperature history of a radiation-dominated Friedmann universe.

With constant number of relativistic degrees of freedom N and conserved
comoving entropy S, the Friedmann equation becomes an autonomous equation for
the temperature,

    (Ṫ/T)² + ε T² = (4π³/45) G N T⁴,   ε = k (2π² N / (45 S))^{2/3},

and the scale factor obeys a·T = const. Natural units c = ħ = k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StepUnderflow, TurnaroundError
from .numerics import OdeSpec, Trajectory, integrate_ode


@dataclass(frozen=True)
class CosmoParams:
    k: int = 0
    N: float = 1.0
    S: float = 1.0
    G: float = 1.0

    def __post_init__(self):
        if self.k not in (-1, 0, 1):
            raise DomainError("curvature k must be -1, 0 or 1")
        if not (self.N > 0 and self.S > 0 and self.G > 0):
            raise DomainError("N, S and G must be positive")

    @property
    def expansion_coeff(self) -> float:
        """(4π³/45) G N, the coefficient of T⁴."""
        return 4.0 * math.pi ** 3 / 45.0 * self.G * self.N


@dataclass(frozen=True)
class ThermalState:
    t: float
    T: float
    a: float


def epsilon(p: CosmoParams) -> float:
    """k (2π² N / (45 S))^{2/3}."""
    return p.k * (2.0 * math.pi ** 2 * p.N / (45.0 * p.S)) ** (2.0 / 3.0)


def hubble_sq(p: CosmoParams, T: float) -> float:
    """(Ṫ/T)² = (4π³/45) G N T⁴ - ε T², which equals (ȧ/a)²."""
    return p.expansion_coeff * T ** 4 - epsilon(p) * T ** 2


def temperature_rate(p: CosmoParams, T: float, contracting: bool = False) -> float:
    """Ṫ on the cooling branch (or the heating branch if ``contracting``).

    Raises
    ------
    TurnaroundError
        If (Ṫ/T)² would be negative, i.e. a closed universe is past its
        maximum expansion at this temperature.
    """
    if not T > 0:
        raise DomainError("temperature must be positive")
    h2 = hubble_sq(p, T)
    if h2 < 0:
        raise TurnaroundError(f"no real expansion rate at T={T}: closed universe turned around")
    rate = T * math.sqrt(h2)
    return rate if contracting else -rate


def turnaround_temperature(p: CosmoParams) -> float | None:
    """Temperature where the expansion stops (k = +1 only)."""
    eps = epsilon(p)
    if eps <= 0:
        return None
    return math.sqrt(eps / p.expansion_coeff)


def flat_closed_form(p: CosmoParams, T0: float, t) -> np.ndarray:
    """T(t) = T0 / √(1 + 2 C T0² t), C = √((4π³/45) G N); valid for k = 0."""
    c = math.sqrt(p.expansion_coeff)
    return T0 / np.sqrt(1.0 + 2.0 * c * T0 ** 2 * np.asarray(t, dtype=float))


def thermo(p: CosmoParams, T: float) -> tuple[float, float, float]:
    """Energy density, pressure and entropy density of the radiation gas."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    rho = math.pi ** 2 / 30.0 * p.N * T ** 4
    return rho, rho / 3.0, 2.0 * math.pi ** 2 / 45.0 * p.N * T ** 3


class ThermalTrajectory:
    """Evolved (t, T, a) with the underlying dense interpolant.

    The state integrated is (T, ln a), so the reciprocity a·T = const is an
    output to be checked rather than an input.
    """

    def __init__(self, params: CosmoParams, traj: Trajectory, a0: float):
        self.params = params
        self.traj = traj
        self.a0 = a0

    @property
    def t(self) -> np.ndarray:
        return self.traj.t

    @property
    def T(self) -> np.ndarray:
        return self.traj.y[:, 0]

    @property
    def a(self) -> np.ndarray:
        return self.a0 * np.exp(self.traj.y[:, 1])

    def states(self) -> list[ThermalState]:
        return [ThermalState(float(t), float(T), float(a))
                for t, T, a in zip(self.t, self.T, self.a)]

    def at(self, t) -> tuple[np.ndarray, np.ndarray]:
        y = self.traj(t)
        return y[..., 0], self.a0 * np.exp(y[..., 1])

    def rates(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(Ṫ, ȧ/a) from differentiating the dense interpolant."""
        d = self.traj.derivative(t)
        return d[..., 0], d[..., 1]


def evolve(p: CosmoParams, T0: float, t_end: float, spec: OdeSpec | None = None,
           a0: float = 1.0, contracting: bool = False,
           turnaround_rtol: float = 1e-10) -> ThermalTrajectory:
    """Integrate the temperature equation from T(0) = T0 to ``t_end``.

    ``a`` is integrated alongside through d(ln a)/dt = ±√((Ṫ/T)²).

    Raises
    ------
    TurnaroundError
        When (Ṫ/T)² falls to ``turnaround_rtol`` times its flat-space part,
        or the integrator stalls there. ``exc.partial`` holds the trajectory
        up to that point.
    """
    if not T0 > 0:
        raise DomainError("T0 must be positive")
    if hubble_sq(p, T0) <= 0:
        raise TurnaroundError("initial temperature is at or past turnaround")
    spec = spec or OdeSpec(abs_tol=1e-14, rel_tol=1e-12)
    sign = 1.0 if contracting else -1.0
    coeff = p.expansion_coeff

    def rhs(t, y):
        T = y[0]
        h = math.sqrt(max(hubble_sq(p, T), 0.0))
        return np.array([sign * T * h, -sign * h])

    try:
        traj = integrate_ode(rhs, [T0, 0.0], (0.0, t_end), spec)
    except StepUnderflow as exc:
        partial = ThermalTrajectory(p, exc.partial, a0) if exc.partial is not None else None
        raise TurnaroundError(f"integration stalled at t={exc.t:.6g}", partial) from exc

    T = traj.y[:, 0]
    small = np.flatnonzero(coeff * T ** 4 - epsilon(p) * T ** 2 <= turnaround_rtol * coeff * T ** 4)
    if small.size:
        i = int(small[0])
        partial = None
        if i >= 2:
            partial = ThermalTrajectory(p, Trajectory(traj.t[:i], traj.y[:i], traj._q[: i - 1]), a0)
        raise TurnaroundError(f"maximum expansion reached near t={traj.t[i]:.6g}", partial)
    return ThermalTrajectory(p, traj, a0)


def friedmann_residual(tr: ThermalTrajectory, t) -> np.ndarray:
    """|(Ṫ/T)² + εT² - (4π³/45)GNT⁴| / ((4π³/45)GNT⁴), Ṫ from the interpolant."""
    p = tr.params
    T, _ = tr.at(t)
    Tdot, _ = tr.rates(t)
    flat = p.expansion_coeff * T ** 4
    return np.abs((Tdot / T) ** 2 + epsilon(p) * T ** 2 - flat) / flat


def entropy_drift(tr: ThermalTrajectory) -> float:
    """max |s a³ / (s a³)(0) - 1| over the stored steps."""
    s = 2.0 * math.pi ** 2 / 45.0 * tr.params.N * tr.T ** 3
    sa3 = s * tr.a ** 3
    return float(np.max(np.abs(sa3 / sa3[0] - 1.0)))


def reciprocity_drift(tr: ThermalTrajectory) -> float:
    """max |a T / (a0 T0) - 1|."""
    aT = tr.a * tr.T
    return float(np.max(np.abs(aT / aT[0] - 1.0)))


def energy_law_residual(tr: ThermalTrajectory, n_probe: int = 50, rel_step: float = 1e-4) -> float:
    """max |d(ρa³)/dt + p d(a³)/dt| / |ρa³ · ȧ/a| by central differences in t."""
    p = tr.params
    t_lo, t_hi = tr.t[0], tr.t[-1]
    dt = rel_step * (t_hi - t_lo)
    worst = 0.0
    for t in np.linspace(t_lo + 2 * dt, t_hi - 2 * dt, n_probe):
        T, a = tr.at(np.array([t - dt, t, t + dt]))
        rho = math.pi ** 2 / 30.0 * p.N * T ** 4
        vol = a ** 3
        d_energy = (rho[2] * vol[2] - rho[0] * vol[0]) / (2 * dt)
        d_vol = (vol[2] - vol[0]) / (2 * dt)
        scale = abs(rho[1] * d_vol)
        worst = max(worst, abs(d_energy + rho[1] / 3.0 * d_vol) / scale)
    return worst
