"""Point charge outside an isolated charged conducting sphere (Gaussian units).

The sphere (radius R, charge Q) is replaced by two image charges: q1 = -qR/a
at distance d = R²/a from the centre along the line to the point charge,
and q0 = Q + qR/a at the centre. Together with q they make the sphere an
equipotential at q0/R and keep its total charge equal to Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoSignChange, SingularPoint
from .numerics import find_root, golden_section_max


@dataclass(frozen=True)
class SphereChargeSystem:
    """Sphere of radius R centred at the origin, point charge q at (a, 0, 0)."""

    R: float
    Q: float
    q: float
    a: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("R must be positive")
        if not self.a > self.R:
            raise DomainError(f"point charge must lie outside the sphere (a={self.a}, R={self.R})")

    @property
    def like_charges(self) -> bool:
        return self.q * self.Q > 0


@dataclass(frozen=True)
class ImageSystem:
    q1: float
    d: float
    q0: float


def image_system(s: SphereChargeSystem) -> ImageSystem:
    return ImageSystem(q1=-s.q * s.R / s.a, d=s.R ** 2 / s.a, q0=s.Q + s.q * s.R / s.a)


def potential(s: SphereChargeSystem, x: float, y: float, z: float) -> float:
    """Electrostatic potential at (x, y, z).

    Outside the sphere it is the field of q, q1 and q0; inside (and on) the
    conductor it is the constant q0/R.
    """
    img = image_system(s)
    r = math.sqrt(x * x + y * y + z * z)
    if r < s.R:
        return img.q0 / s.R
    r_q = math.sqrt((x - s.a) ** 2 + y * y + z * z)
    if r_q == 0.0:
        raise SingularPoint("potential requested at the point charge")
    r_1 = math.sqrt((x - img.d) ** 2 + y * y + z * z)
    return s.q / r_q + img.q1 / r_1 + img.q0 / r


def force(s: SphereChargeSystem) -> float:
    """x-component of the force on the point charge.

    F = qQ/a² + (q²R/a³)(1 - 1/(1 - R²/a²)²)
    """
    a, R, q = s.a, s.R, s.q
    return q * s.Q / a ** 2 + q * q * R / a ** 3 * (1.0 - 1.0 / (1.0 - R * R / (a * a)) ** 2)


def interaction_energy(s: SphereChargeSystem) -> float:
    """Electrostatic energy of the configuration, up to an a-independent constant.

    Half the sum of charge times potential over the real charges: q sees
    the image charges, the sphere's charge Q sits at potential q0/R. The
    self-energy of q is dropped.
    """
    img = image_system(s)
    phi_at_q = img.q1 / (s.a - img.d) + img.q0 / s.a
    return 0.5 * (s.q * phi_at_q + s.Q * img.q0 / s.R)


def dimensionless_force(alpha: float, s: float) -> float:
    """f(s) = α/s² - (2s² - 1)/(s³(s² - 1)²), equal to R²F/q² with α = Q/q, s = a/R."""
    if not s > 1:
        raise DomainError("s must exceed 1")
    s2 = s * s
    return alpha / s2 - (2.0 * s2 - 1.0) / (s * s2 * (s2 - 1.0) ** 2)


def equilibrium_lhs(s: float) -> float:
    """(2s² - 1)/(s(s² - 1)²); the equilibrium distance solves equilibrium_lhs(s) = α."""
    s2 = s * s
    return (2.0 * s2 - 1.0) / (s * (s2 - 1.0) ** 2)


def _scan_bracket(fn, lo: float, hi: float, n: int = 400):
    grid = np.geomspace(lo - 1.0, hi - 1.0, n) + 1.0
    prev_s, prev_v = grid[0], fn(grid[0])
    for s in grid[1:]:
        v = fn(s)
        if prev_v * v <= 0:
            return prev_s, s
        prev_s, prev_v = s, v
    return None


def equilibrium_distance(alpha: float, s_lo: float = 1.0 + 1e-4, s_hi: float = 1e3) -> float:
    """Root s0 > 1 of f(s) = 0, where the net force on the charge vanishes.

    A geometric scan of (s_lo, s_hi) locates the sign change, then Brent's
    method refines it.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    g = lambda s: equilibrium_lhs(s) - alpha  # noqa: E731
    bracket = _scan_bracket(g, s_lo, s_hi)
    if bracket is None:
        raise NoSignChange(f"no equilibrium found in ({s_lo}, {s_hi}) for alpha={alpha}")
    return find_root(g, bracket, tol=1e-14)


def force_maximum(alpha: float, s_hi: float = 1e3) -> tuple[float, float]:
    """Location and value of the repulsive maximum of f beyond s0.

    Golden-section search in ln s on (s0, s_hi).
    """
    s0 = equilibrium_distance(alpha)
    u, val = golden_section_max(lambda u: dimensionless_force(alpha, math.exp(u)),
                                math.log(s0), math.log(s_hi), tol=1e-12)
    return math.exp(u), val


def count_sign_changes(alpha: float, lo: float = 1.0 + 1e-4, hi: float = 1e3, n: int = 4000) -> int:
    """Number of sign changes of f on a geometric grid over (lo, hi)."""
    grid = np.geomspace(lo - 1.0, hi - 1.0, n) + 1.0
    vals = np.array([dimensionless_force(alpha, s) for s in grid])
    return int(np.count_nonzero(np.sign(vals[1:]) != np.sign(vals[:-1])))


def surface_spread(s: SphereChargeSystem, points: np.ndarray) -> float:
    """Relative spread (max - min)/|mean| of the outer-field potential on the sphere.

    ``points`` are unit vectors; evaluation uses the three-charge formula
    just outside the surface, so this checks the image construction.
    """
    img = image_system(s)
    vals = []
    for u in points:
        x, y, z = s.R * np.asarray(u, dtype=float)
        r_q = math.sqrt((x - s.a) ** 2 + y * y + z * z)
        r_1 = math.sqrt((x - img.d) ** 2 + y * y + z * z)
        vals.append(s.q / r_q + img.q1 / r_1 + img.q0 / s.R)
    vals = np.array(vals)
    scale = max(abs(float(np.mean(vals))), abs(img.q0 / s.R), 1e-300)
    return float((vals.max() - vals.min()) / scale)
