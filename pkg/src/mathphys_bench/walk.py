"""Continuous-time lattice walk with exponential waiting times.

At each event (waiting times exponential with mean τ) the particle steps to
a neighbouring site with probability α/2 each way, or stays with
probability 1 - α. The number of events up to time t is Poisson with mean
t/τ, and the occupation law is e^{-αt/τ} I_m(αt/τ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from .errors import DomainError
from .numerics import RandomStream, bessel_i, bessel_i_range


@dataclass(frozen=True)
class WalkParams:
    alpha: float
    tau: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise DomainError("alpha must lie in [0, 1]")
        if not self.tau > 0:
            raise DomainError("tau must be positive")

    @property
    def beta(self) -> float:
        """Probability of staying put at an event."""
        return 1.0 - self.alpha

    def z(self, t: float) -> float:
        return self.alpha * t / self.tau


@dataclass
class EmpiricalLaw:
    """Histogram of final sites from a Monte Carlo run."""

    counts: dict[int, int]
    n_samples: int
    t: float
    sum_sq: float = 0.0
    sum_4: float = 0.0

    def __post_init__(self):
        if sum(self.counts.values()) != self.n_samples:
            raise DomainError("counts must sum to n_samples")

    def merge(self, other: "EmpiricalLaw") -> "EmpiricalLaw":
        if other.t != self.t:
            raise DomainError("cannot merge laws at different times")
        counts = dict(self.counts)
        for m, c in other.counts.items():
            counts[m] = counts.get(m, 0) + c
        return EmpiricalLaw(counts, self.n_samples + other.n_samples, self.t,
                            self.sum_sq + other.sum_sq, self.sum_4 + other.sum_4)

    def variance(self) -> float:
        """Second moment about 0 (the walk is symmetric, so this is the variance)."""
        return self.sum_sq / self.n_samples

    def variance_stderr(self) -> float:
        """Standard error of :meth:`variance`, √((μ₄ - σ⁴)/n)."""
        mu2 = self.variance()
        mu4 = self.sum_4 / self.n_samples
        return math.sqrt(max(mu4 - mu2 * mu2, 0.0) / self.n_samples)


def jump_count_pmf(p: WalkParams, n: int, t: float) -> float:
    """Poisson probability of ``n`` events by time ``t``, computed in log space."""
    if n < 0 or t < 0:
        raise DomainError("need n >= 0 and t >= 0")
    mean = t / p.tau
    if mean == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mean) - mean - math.lgamma(n + 1))


def dispersion(p: WalkParams, t: float) -> float:
    """Variance of the site at time t: αt/τ."""
    if t < 0:
        raise DomainError("t must be >= 0")
    return p.alpha * t / p.tau


def occupation(p: WalkParams, m: int, t: float) -> float:
    """e^{-αt/τ} I_|m|(αt/τ)."""
    if t < 0:
        raise DomainError("t must be >= 0")
    return bessel_i(abs(int(m)), p.z(t), scaled=True)


def site_cutoff(p: WalkParams, t: float) -> int:
    """|m| bound that leaves less than ~1e-12 of the mass outside."""
    mean = p.z(t)
    return int(math.ceil(mean + 12.0 * math.sqrt(mean) + 20.0))


def occupation_law(p: WalkParams, t: float, m_max: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Sites -M..M and their probabilities."""
    m_max = site_cutoff(p, t) if m_max is None else m_max
    half = bessel_i_range(m_max, p.z(t), scaled=True)
    sites = np.arange(-m_max, m_max + 1)
    return sites, half[np.abs(sites)]


def occupation_asymptotic(p: WalkParams, t: float) -> float:
    """Leading large-time value 1/√(2π αt/τ), the same for every fixed m."""
    z = p.z(t)
    if not z > 0:
        raise DomainError("asymptotic form needs alpha * t / tau > 0")
    return 1.0 / math.sqrt(2.0 * math.pi * z)


def step_law_power(p: WalkParams, n: int) -> np.ndarray:
    """Law of the site after exactly n events, as an array over -n..n.

    Built by repeated convolution of {-1: α/2, 0: 1-α, +1: α/2}.
    """
    single = np.array([0.5 * p.alpha, 1.0 - p.alpha, 0.5 * p.alpha])
    law = np.array([1.0])
    for _ in range(n):
        law = np.convolve(law, single)
    return law


def mixture_occupation(p: WalkParams, t: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Σ_n Poisson(n; t/τ) · h_n(m) over n ≤ n_max, on sites -n_max..n_max."""
    out = np.zeros(2 * n_max + 1)
    for n in range(n_max + 1):
        law = step_law_power(p, n)
        out[n_max - n: n_max + n + 1] += jump_count_pmf(p, n, t) * law
    return np.arange(-n_max, n_max + 1), out


def simulate(p: WalkParams, t: float, n_samples: int, stream: RandomStream,
             batch: int = 200_000) -> EmpiricalLaw:
    """Event-driven Monte Carlo of the walk up to time ``t``.

    Each sample draws exponential waiting times until their sum exceeds
    ``t``; every event moves the walker by -1, 0, +1 with probabilities
    α/2, 1 - α, α/2. Samples are processed in vectorized batches.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    if t < 0:
        raise DomainError("t must be >= 0")
    rng = stream.rng
    counts: dict[int, int] = {}
    sum_sq = 0.0
    sum_4 = 0.0
    remaining = n_samples
    while remaining > 0:
        size = min(batch, remaining)
        remaining -= size
        clock = np.zeros(size)
        pos = np.zeros(size, dtype=np.int64)
        active = np.arange(size)
        while active.size:
            clock[active] += rng.exponential(p.tau, active.size)
            active = active[clock[active] <= t]
            if not active.size:
                break
            u = rng.random(active.size)
            step = np.where(u < 0.5 * p.alpha, -1, np.where(u < p.alpha, 1, 0))
            pos[active] += step
        sites, c = np.unique(pos, return_counts=True)
        for m, cnt in zip(sites.tolist(), c.tolist()):
            counts[m] = counts.get(m, 0) + cnt
        sq = pos.astype(float) ** 2
        sum_sq += float(sq.sum())
        sum_4 += float((sq * sq).sum())
    return EmpiricalLaw(counts, n_samples, t, sum_sq, sum_4)


def chi_square_test(law: EmpiricalLaw, p: WalkParams, m_window: int = 15,
                    min_expected: float = 5.0) -> tuple[float, int, float]:
    """Pearson χ² of the empirical histogram against the Bessel law.

    Sites |m| ≤ ``m_window`` get their own bin, everything else is pooled
    into one outer bin, and adjacent bins with expected count below
    ``min_expected`` are merged. Returns ``(statistic, dof, p_value)``.
    """
    n = law.n_samples
    sites = np.arange(-m_window, m_window + 1)
    probs = np.array([occupation(p, int(m), law.t) for m in sites])
    expected = list(n * probs)
    observed = [float(law.counts.get(int(m), 0)) for m in sites]
    outer_p = max(1.0 - float(probs.sum()), 0.0)
    expected.append(n * outer_p)
    observed.append(float(n - sum(observed)))

    merged_e, merged_o = [], []
    acc_e = acc_o = 0.0
    for e, o in zip(expected, observed):
        acc_e += e
        acc_o += o
        if acc_e >= min_expected:
            merged_e.append(acc_e)
            merged_o.append(acc_o)
            acc_e = acc_o = 0.0
    if acc_e > 0 or acc_o > 0:
        if merged_e:
            merged_e[-1] += acc_e
            merged_o[-1] += acc_o
        else:
            merged_e.append(acc_e)
            merged_o.append(acc_o)
    e = np.array(merged_e)
    o = np.array(merged_o)
    stat = float(np.sum((o - e) ** 2 / e))
    dof = len(e) - 1
    if dof < 1:
        return stat, 0, 1.0
    return stat, dof, float(chi2.sf(stat, dof))
