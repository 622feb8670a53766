"""Exponential series with geometric rates and their large-t asymptotics.

    R(t) = Σ_{n≥0} a^{-n} exp(-b^{-n} t)
    S(t) = Σ_{n≥1} n^{-k} a^{-n} exp(-b^{-n} t)

Both decay like t^{-ln a / ln b} (S with an extra (ln t)^{-k}), with a
log-periodic modulation that keeps the ratio to the leading term between
a^{-1} and a. The bounds returned here omit the (1 + o(1)) factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import QuadratureSpec, gamma, integrate


@dataclass(frozen=True)
class SeriesParams:
    a: float
    b: float
    k: int = 0
    tail_tol: float = 1e-16

    def __post_init__(self):
        if not (self.a > 1 and self.b > 1):
            raise DomainError("need a > 1 and b > 1")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")

    @property
    def exponent(self) -> float:
        """ln a / ln b, the power-law decay rate."""
        return math.log(self.a) / math.log(self.b)


def _n_max(p: SeriesParams, t: float) -> int:
    """First index where both the geometric tail and the crossover test pass."""
    # a^{-n} / (1 - 1/a) < tail_tol
    n_tail = math.log(1.0 / (p.tail_tol * (1.0 - 1.0 / p.a))) / math.log(p.a)
    n_cross = (math.log(t) / math.log(p.b) if t > 1 else 0.0) + 10.0
    return int(math.ceil(max(n_tail, n_cross)))


def _terms(p: SeriesParams, t: float, n_start: int, n_terms: int | None, k: int):
    if t < 0:
        raise DomainError("t must be >= 0")
    n_end = _n_max(p, t) if n_terms is None else n_start + n_terms - 1
    n = np.arange(n_start, n_end + 1, dtype=float)
    log_terms = -n * math.log(p.a) - t * np.exp(-n * math.log(p.b))
    if k:
        log_terms -= k * np.log(n)
    return np.exp(log_terms)


def sum_R(p: SeriesParams, t: float, n_terms: int | None = None) -> float:
    """Σ_{n≥0} a^{-n} e^{-b^{-n} t}, truncated by the tail bound unless ``n_terms`` is given."""
    return math.fsum(_terms(p, t, 0, n_terms, 0))


def sum_S(p: SeriesParams, t: float, n_terms: int | None = None) -> float:
    """Σ_{n≥1} n^{-k} a^{-n} e^{-b^{-n} t}."""
    return math.fsum(_terms(p, t, 1, n_terms, p.k))


def _leading(p: SeriesParams, t: float, k: int, log_b_power: float) -> float:
    if not t > math.e:
        raise DomainError(f"asymptotic bounds need t > e, got {t}")
    z = p.exponent
    return (math.log(p.b) ** log_b_power * gamma(z) * math.log(t) ** (-k) * t ** (-z))


def asymptotic_bounds_S(p: SeriesParams, t: float) -> tuple[float, float]:
    """a^{∓1} (ln b)^{k-1} Γ(ln a/ln b) (ln t)^{-k} t^{-ln a/ln b}."""
    c = _leading(p, t, p.k, p.k - 1)
    return c / p.a, c * p.a


def asymptotic_bounds_R(p: SeriesParams, t: float) -> tuple[float, float]:
    """a^{∓1} (ln b)^{-1} Γ(ln a/ln b) t^{-ln a/ln b}."""
    c = _leading(p, t, 0, -1)
    return c / p.a, c * p.a


def loglog_slope(p: SeriesParams, t_lo: float = 1e3, t_hi: float = 1e6,
                 n_points: int = 301) -> float:
    """Least-squares slope of ln R against ln t over a log-spaced grid.

    The grid spans three decades, so the log-periodic ripple of R averages
    out to well below 1% of the slope.
    """
    ts = np.geomspace(t_lo, t_hi, n_points)
    vals = np.array([sum_R(p, t) for t in ts])
    return float(np.polyfit(np.log(ts), np.log(vals), 1)[0])


def gamma_k(z: float, t: float, alpha: float, beta: float, k: int,
            spec: QuadratureSpec | None = None) -> float:
    """∫₀^{αt} (1 - ln(βy)/ln t)^{-k} y^{z-1} e^{-y} dy.

    Tends to Γ(z) as t → ∞ when αβ < 1. The substitution y = u^{1/z} removes
    the algebraic endpoint singularity. The range is cut at y = 750, past
    which e^{-y} underflows, and split at fixed y so the adaptive rule sees
    the bulk of the mass.
    """
    if not (z > 0 and t > 1 and alpha > 0 and beta > 0):
        raise DomainError("need z > 0, t > 1, alpha > 0, beta > 0")
    if alpha * beta >= 1:
        raise DomainError("need alpha * beta < 1")
    ln_t = math.log(t)
    y_max = min(alpha * t, 750.0)
    upper = y_max ** z
    breaks = [y ** z for y in (0.5, 2.0, 8.0, 30.0, 100.0) if y < y_max]

    def integrand(u):
        u = np.asarray(u, dtype=float)
        y = np.power(np.maximum(u, 1e-300), 1.0 / z)
        weight = (1.0 - np.log(beta * y) / ln_t) ** (-k)
        return np.where(u > 0, weight * np.exp(-y), 0.0 if k > 0 else 1.0) / z

    return integrate(integrand, 0.0, upper, spec or QuadratureSpec(1e-12, 1e-10, 8000),
                     points=breaks)
