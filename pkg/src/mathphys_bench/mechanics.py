"""Two mechanics problems.

Virial averages for the anharmonic oscillator H = p²/2m + λx^{2n}, where
time averages satisfy ⟨K⟩ = n⟨U⟩.

A symmetric heavy top (a ball on a smooth horizontal plane, mass m, centre
of mass at distance l from the contact point, moments J, J, J₀) released
with angular velocity ω₀ about the vertical while tilted by ε. The Euler
angle θ obeys a Lagrange equation in which φ̇ and ψ̇ are fixed functions of
θ through two conserved momenta, and the nutation band is bounded by the
roots of a quadratic Θ(cos θ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexRoots, DomainError
from .numerics import OdeSpec, Trajectory, find_root, gamma, integrate_ode


# ---------------------------------------------------------------------------
# virial theorem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OscillatorSpec:
    m: float = 1.0
    lam: float = 1.0
    n: int = 1
    x0: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and self.lam > 0):
            raise DomainError("m and lambda must be positive")
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.x0 == 0:
            raise DomainError("x0 must be nonzero")

    @property
    def energy(self) -> float:
        return self.lam * self.x0 ** (2 * self.n)

    def period(self) -> float:
        """T = 4|x0| √(m/2E) √π Γ(1 + 1/2n) / Γ(1/2 + 1/2n)."""
        n = self.n
        return (4.0 * abs(self.x0) * math.sqrt(self.m / (2.0 * self.energy)) * math.sqrt(math.pi)
                * gamma(1.0 + 0.5 / n) / gamma(0.5 + 0.5 / n))


def _crossings(traj: Trajectory, component: int) -> list[float]:
    """Times where the component goes from positive to non-positive."""
    out = []
    y = traj.y[:, component]
    for i in range(len(y) - 1):
        if y[i] > 0 >= y[i + 1]:
            lo, hi = traj.t[i], traj.t[i + 1]
            if y[i + 1] == 0:
                out.append(float(hi))
            else:
                out.append(find_root(lambda s: float(traj(s)[component]), (lo, hi), tol=1e-14))
    return out


def virial_average(o: OscillatorSpec, n_periods: int = 200,
                   spec: OdeSpec | None = None) -> tuple[float, float]:
    """Time averages ⟨K⟩ and ⟨U⟩ over ``n_periods`` full oscillations.

    The state is augmented with ∫K dt and ∫U dt. The averaging window runs
    between two downward zero crossings of p found on the trajectory, so
    it spans a whole number of periods without using the analytic period.
    """
    if n_periods < 50:
        raise DomainError("n_periods must be >= 50")
    spec = spec or OdeSpec(abs_tol=1e-10, rel_tol=1e-10)
    m, lam, n = o.m, o.lam, o.n

    def rhs(t, y):
        x, p = y[0], y[1]
        return np.array([p / m, -2.0 * n * lam * x ** (2 * n - 1),
                         0.5 * p * p / m, lam * x ** (2 * n)])

    t_end = (n_periods + 1.5) * o.period()
    traj = integrate_ode(rhs, [o.x0, 0.0, 0.0, 0.0], (0.0, t_end), spec)
    # p starts at 0 and moves away from zero; skip crossings at t = 0
    times = [t for t in _crossings(traj, 1) if t > 1e-9 * t_end]
    if len(times) < n_periods + 1:
        raise DomainError("trajectory too short to contain the requested periods")
    ta, tb = times[0], times[n_periods]
    ya, yb = traj(ta), traj(tb)
    span = tb - ta
    return float((yb[2] - ya[2]) / span), float((yb[3] - ya[3]) / span)


# ---------------------------------------------------------------------------
# whipping top
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopSpec:
    m: float
    l: float
    J: float
    J0: float
    omega0: float
    epsilon: float
    g: float = 9.81

    def __post_init__(self):
        if not (self.m > 0 and self.l > 0 and self.J > 0 and self.g > 0):
            raise DomainError("m, l, J and g must be positive")
        if not 0 <= self.J0 <= 2 * self.J:
            raise DomainError("need 0 <= J0 <= 2J")
        if not 1e-3 <= self.epsilon <= math.pi / 2:
            raise DomainError("epsilon must lie in [1e-3, pi/2]")


@dataclass(frozen=True)
class DimensionlessTop:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0 <= self.alpha <= 2:
            raise DomainError("alpha must lie in [0, 2]")
        if self.beta < 0 or self.gamma < 0:
            raise DomainError("beta and gamma must be non-negative")

    @property
    def betagamma(self) -> float:
        return self.beta * self.gamma


@dataclass(frozen=True)
class MotionBand:
    a0: float
    a1: float
    a2: float
    z_plus: float
    z_minus: float
    lifts_up: bool
    constant_height: bool
    cos_theta_range: tuple[float, float]


def dimensionless(t: TopSpec) -> DimensionlessTop:
    """α = J₀/J, β = ml²/J, γ = g/(lω₀²); γ is +inf when ω₀ = 0."""
    gam = math.inf if t.omega0 == 0 else t.g / (t.l * t.omega0 ** 2)
    return DimensionlessTop(t.J0 / t.J, t.m * t.l ** 2 / t.J, gam)


def theta_coeffs(d: DimensionlessTop, eps: float) -> tuple[float, float, float]:
    """Coefficients of Θ = a₀ + 2a₁ cos θ + a₂ cos² θ."""
    al, bg = d.alpha, d.betagamma
    a0 = -2 * bg - 0.25 * ((al - 1) ** 2 * math.cos(3 * eps) + (al + 1) * (3 * al - 1) * math.cos(eps))
    a1 = 0.25 * ((al * al - 1) * math.cos(2 * eps) + al * al + 1)
    a2 = 2 * bg
    return a0, a1, a2


def theta_poly(d: DimensionlessTop, eps: float, cos_theta):
    a0, a1, a2 = theta_coeffs(d, eps)
    z = np.asarray(cos_theta, dtype=float)
    return a0 + 2 * a1 * z + a2 * z * z


def theta_at_release(d: DimensionlessTop, eps: float) -> float:
    """Θ(ε) = -2 sin²ε ((α - 1) cos ε + βγ)."""
    return -2 * math.sin(eps) ** 2 * ((d.alpha - 1) * math.cos(eps) + d.betagamma)


def lifts_up(d: DimensionlessTop, eps: float) -> bool:
    """True when the centre of mass starts to rise: (α - 1) cos ε + βγ < 0."""
    return (d.alpha - 1) * math.cos(eps) + d.betagamma < 0


def tuned_betagamma(alpha: float, eps: float) -> float:
    """βγ = (1 - α) cos ε, which makes Θ(ε) = 0 (motion at constant height)."""
    return (1 - alpha) * math.cos(eps)


def motion_band(d: DimensionlessTop, eps: float, tol: float = 1e-14) -> MotionBand:
    """Roots of Θ and the interval of cos θ visited by the top."""
    a0, a1, a2 = theta_coeffs(d, eps)
    if a2 > 0:
        disc = (a1 / a2) ** 2 - a0 / a2
        if disc < 0:
            if disc > -1e-12 * max(1.0, (a1 / a2) ** 2):
                disc = 0.0
            else:
                raise ComplexRoots(f"Θ has complex roots (discriminant {disc})")
        root = math.sqrt(disc)
        z_plus, z_minus = -a1 / a2 + root, -a1 / a2 - root
    else:
        if a1 == 0:
            raise ComplexRoots("Θ is constant; no roots")
        z_plus, z_minus = -a0 / (2 * a1), -math.inf
    ce = math.cos(eps)
    th_eps = theta_at_release(d, eps)
    scale = max(1.0, abs(a0) + 2 * abs(a1) + abs(a2))
    constant = abs(th_eps) <= tol * scale
    up = lifts_up(d, eps) and not constant
    if constant:
        rng = (ce, ce)
    elif up:
        rng = (max(-1.0, z_plus), ce)
    else:
        rng = (ce, min(z_plus, 1.0))
    return MotionBand(a0, a1, a2, z_plus, z_minus, up, constant, rng)


def equator_reachable(d: DimensionlessTop, eps: float) -> tuple[bool, tuple[float, float] | None]:
    """Whether some α ∈ [0, 1] makes a₀ = 0 for the given βγ and ε.

    The roots are α = (-sin²ε ± √(sin²ε - 2βγ cos ε)) / cos²ε; the
    non-negative one exists exactly when sin²ε cos²ε - 2βγ cos ε ≥ 0.
    """
    if not 0 < eps < math.pi / 2:
        raise DomainError("epsilon must lie in (0, pi/2)")
    s2, c = math.sin(eps) ** 2, math.cos(eps)
    bg = d.betagamma
    disc = s2 - 2 * bg * c
    roots = None
    if disc >= 0:
        r = math.sqrt(disc)
        roots = ((-s2 + r) / c ** 2, (-s2 - r) / c ** 2)
    return bool(s2 * c * c - 2 * bg * c >= 0), roots


def _phi_psi_dot(t: TopSpec, theta: float) -> tuple[float, float]:
    st2 = math.sin(theta) ** 2
    ct = math.cos(theta)
    ce = math.cos(t.epsilon)
    k = t.J * math.sin(t.epsilon) ** 2 + t.J0 * ce * ce
    phi_dot = t.omega0 / (t.J * st2) * (k - t.J0 * ce * ct)
    psi_dot = t.omega0 / (t.J * st2) * (ce * (t.J * st2 + t.J0 * ct * ct) - ct * k)
    return phi_dot, psi_dot


def _top_rhs(t: TopSpec):
    ml2 = t.m * t.l ** 2
    mgl = t.m * t.g * t.l

    def rhs(_, y):
        th, thd = y[0], y[1]
        s, c = math.sin(th), math.cos(th)
        phd, psd = _phi_psi_dot(t, th)
        num = ml2 * s * c * thd ** 2 + (t.J0 - t.J) * s * c * phd ** 2 + t.J0 * s * phd * psd + mgl * s
        return np.array([thd, -num / (ml2 * s * s + t.J), phd, psd])

    return rhs


@dataclass
class TopRun:
    spec: TopSpec
    traj: Trajectory

    @property
    def t(self) -> np.ndarray:
        return self.traj.t

    @property
    def theta(self) -> np.ndarray:
        return self.traj.y[:, 0]

    @property
    def theta_dot(self) -> np.ndarray:
        return self.traj.y[:, 1]

    @property
    def phi(self) -> np.ndarray:
        return self.traj.y[:, 2]

    @property
    def psi(self) -> np.ndarray:
        return self.traj.y[:, 3]

    @property
    def x_m(self) -> np.ndarray:
        s = self.spec
        return -s.omega0 * self.t * s.l * math.sin(s.epsilon)

    @property
    def y_m(self) -> np.ndarray:
        return np.full_like(self.t, self.spec.l * math.sin(self.spec.epsilon))

    def _rates(self):
        return np.array([_phi_psi_dot(self.spec, th) for th in self.theta]).T

    def energy(self) -> np.ndarray:
        """Left side of the reduced energy balance (translation along x removed)."""
        s = self.spec
        th, thd = self.theta, self.theta_dot
        phd, psd = self._rates()
        st2, ct = np.sin(th) ** 2, np.cos(th)
        return ((s.m * s.l ** 2 * st2 + s.J) * thd ** 2 + (s.J * st2 + s.J0 * ct ** 2) * phd ** 2
                + s.J0 * psd ** 2 + 2 * s.J0 * ct * phd * psd - 2 * s.m * s.g * s.l * ct)

    def initial_energy(self) -> float:
        s = self.spec
        ce = math.cos(s.epsilon)
        return ((s.J * math.sin(s.epsilon) ** 2 + s.J0 * ce * ce) * s.omega0 ** 2
                - 2 * s.m * s.g * s.l * ce)

    def energy_scale(self) -> float:
        s = self.spec
        return max(abs(self.initial_energy()), s.J * s.omega0 ** 2, 2 * s.m * s.g * s.l)

    def p_phi(self) -> np.ndarray:
        s = self.spec
        th = self.theta
        phd, psd = self._rates()
        return s.J * np.sin(th) ** 2 * phd + s.J0 * np.cos(th) * (np.cos(th) * phd + psd)

    def p_psi(self) -> np.ndarray:
        s = self.spec
        phd, psd = self._rates()
        return s.J0 * (np.cos(self.theta) * phd + psd)

    def drifts(self) -> dict:
        """Relative drifts of the energy and both conserved momenta."""
        s = self.spec
        e = self.energy()
        mom_scale = max(s.J, s.J0) * abs(s.omega0)
        pphi, ppsi = self.p_phi(), self.p_psi()
        return {
            "energy": float(np.max(np.abs(e - self.initial_energy())) / self.energy_scale()),
            "p_phi": float(np.max(np.abs(pphi - pphi[0])) / mom_scale),
            "p_psi": float(np.max(np.abs(ppsi - ppsi[0])) / mom_scale),
        }

    def reduced_equation_residual(self) -> float:
        """max |sin²θ(1 + β sin²θ)θ̇² - ω₀²(cos ε - cos θ)Θ(θ)| / (ω₀² max(1, |a₀| + 2a₁ + a₂))."""
        s = self.spec
        d = dimensionless(s)
        th, thd = self.theta, self.theta_dot
        st2 = np.sin(th) ** 2
        lhs = st2 * (1 + d.beta * st2) * thd ** 2
        rhs = s.omega0 ** 2 * (math.cos(s.epsilon) - np.cos(th)) * theta_poly(d, s.epsilon, np.cos(th))
        a0, a1, a2 = theta_coeffs(d, s.epsilon)
        return float(np.max(np.abs(lhs - rhs)) / (s.omega0 ** 2 * max(1.0, abs(a0) + 2 * a1 + a2)))

    def table(self) -> np.ndarray:
        """Columns t, θ, φ, ψ, x_m, y_m, E, p_φ, p_ψ."""
        return np.column_stack([self.t, self.theta, self.phi, self.psi, self.x_m, self.y_m,
                                self.energy(), self.p_phi(), self.p_psi()])


def simulate_top(t: TopSpec, t_end: float, spec: OdeSpec | None = None) -> TopRun:
    """Integrate θ̈ with φ̇(θ), ψ̇(θ) substituted, from θ = ε, θ̇ = 0, φ = ψ = 0.

    φ and ψ are carried as quadratures of their rates. A StepUnderflow from
    the integrator (θ approaching the pole) propagates to the caller.
    """
    spec = spec or OdeSpec(abs_tol=1e-12, rel_tol=1e-12)
    traj = integrate_ode(_top_rhs(t), [t.epsilon, 0.0, 0.0, 0.0], (0.0, t_end), spec)
    return TopRun(t, traj)


def random_top(rng: np.random.Generator, max_tries: int = 1000) -> TopSpec:
    """Draw a top whose nutation band stays clear of the pole θ = 0."""
    for _ in range(max_tries):
        J = rng.uniform(0.5, 2.0)
        spec = TopSpec(m=rng.uniform(0.5, 2.0), l=rng.uniform(0.3, 1.5), J=J,
                       J0=rng.uniform(0.0, 2.0) * J, omega0=rng.uniform(2.0, 10.0),
                       epsilon=rng.uniform(0.15, math.pi / 2 - 0.05), g=rng.uniform(1.0, 10.0))
        band = motion_band(dimensionless(spec), spec.epsilon)
        if band.cos_theta_range[1] < 1.0 - 1e-2:
            return spec
    raise DomainError("could not draw an admissible top")
