"""Volterra equations of the second kind with kernel K(x, t) = α'(x) / (1 - α(x)).

The equation

    φ(x) = f(x) + ∫₀ˣ K(x, t) φ(t) dt

has a closed-form resolvent R(x, t) = α'(x)(1 - α(t)) / (1 - α(x))², obtained
by summing the iterated kernels K_n. This module evaluates those closed forms
and provides two independent oracles: nested quadrature of the iterated-kernel
recursion and a trapezoidal marching solver that works for any kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .numerics import QuadratureSpec, integrate

RealFn = Callable[[float], float]

_PROBE_POINTS = 33


@dataclass(frozen=True)
class KernelFamily:
    """A kernel generator α on [0, h] together with its derivative.

    Construction samples 33 uniform points and rejects families where α
    touches 1 or where ``alpha_prime`` disagrees with a central difference of
    ``alpha`` by more than 1e-6. The difference reaches slightly past the
    endpoints, so α must be defined in a small neighbourhood of [0, h].
    """

    alpha: RealFn
    alpha_prime: RealFn
    h: float = 1.0
    name: str = "custom"

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("h must be positive")
        xs = np.linspace(0.0, self.h, _PROBE_POINTS)
        step = 1e-5 * self.h
        for x in xs:
            ax = float(self.alpha(x))
            if not math.isfinite(ax) or abs(1.0 - ax) < 1e-12:
                raise DomainError(f"alpha({x}) = {ax} is not admissible (must differ from 1)")
            fd = (float(self.alpha(x + step)) - float(self.alpha(x - step))) / (2 * step)
            ap = float(self.alpha_prime(x))
            if abs(fd - ap) > 1e-6 * max(1.0, abs(ap)):
                raise DomainError(
                    f"alpha_prime({x}) = {ap} inconsistent with finite difference {fd}")

    def kernel(self, x: float, t: float = 0.0) -> float:
        """K(x, t) = α'(x) / (1 - α(x)); independent of t."""
        return float(self.alpha_prime(x)) / (1.0 - float(self.alpha(x)))


def zero_family(h: float = 1.0) -> KernelFamily:
    return KernelFamily(lambda x: 0.0, lambda x: 0.0, h, "zero")


def half_linear_family(h: float = 1.0) -> KernelFamily:
    """α(x) = x/2."""
    return KernelFamily(lambda x: 0.5 * x, lambda x: 0.5, h, "half_linear")


def saturating_family(h: float = 1.0) -> KernelFamily:
    """α(x) = (1 - e^{-x}) / 2."""
    return KernelFamily(lambda x: 0.5 * (1.0 - math.exp(-x)),
                        lambda x: 0.5 * math.exp(-x), h, "saturating")


def quadratic_family(h: float = 1.0) -> KernelFamily:
    """α(x) = -x²/3, a family where 1 - α grows."""
    return KernelFamily(lambda x: -x * x / 3.0, lambda x: -2.0 * x / 3.0, h, "quadratic")


SHIPPED_FAMILIES = {
    "zero": zero_family,
    "half_linear": half_linear_family,
    "saturating": saturating_family,
    "quadratic": quadratic_family,
}


@dataclass(frozen=True)
class VolterraProblem:
    kernel: KernelFamily
    f: RealFn

    def __post_init__(self):
        for x in np.linspace(0.0, self.kernel.h, _PROBE_POINTS):
            if not math.isfinite(float(self.f(x))):
                raise DomainError(f"forcing is not finite at x={x}")


def _check_order(kernel: KernelFamily, x: float, t: float):
    if not (0.0 <= t <= x <= kernel.h * (1 + 1e-12)):
        raise DomainError(f"need 0 <= t <= x <= h, got t={t}, x={x}, h={kernel.h}")


def resolvent(kernel: KernelFamily, x: float, t: float) -> float:
    """R(x, t) = α'(x)(1 - α(t)) / (1 - α(x))²."""
    _check_order(kernel, x, t)
    ax = float(kernel.alpha(x))
    return float(kernel.alpha_prime(x)) * (1.0 - float(kernel.alpha(t))) / (1.0 - ax) ** 2


def iterated_kernel(kernel: KernelFamily, n: int, x: float, t: float) -> float:
    """Closed form of the n-th iterated kernel.

    K_n(x, t) = α'(x) / ((n-1)! (1 - α(x))) · ln^{n-1}[(1 - α(t)) / (1 - α(x))]
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    _check_order(kernel, x, t)
    log_ratio = math.log((1.0 - float(kernel.alpha(t))) / (1.0 - float(kernel.alpha(x))))
    return kernel.kernel(x) * log_ratio ** (n - 1) / math.factorial(n - 1)


def iterated_kernel_quadrature(kernel: KernelFamily, n: int, x: float, t: float,
                               spec: QuadratureSpec | None = None) -> float:
    """K_n by the recursion K_n(x, t) = ∫ₜˣ K(x, s) K_{n-1}(s, t) ds.

    Each level is an adaptive quadrature, so the cost grows geometrically in
    n; intended for small n only.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    _check_order(kernel, x, t)
    spec = spec or QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)
    if n == 1:
        return kernel.kernel(x, t)
    kx = kernel.kernel(x)
    return kx * integrate(lambda s: iterated_kernel_quadrature(kernel, n - 1, s, t, spec),
                          t, x, spec)


def neumann_partial_sum(kernel: KernelFamily, n_terms: int, x: float, t: float) -> float:
    """Σ_{n=1..N} K_n(x, t), which tends to the resolvent as N grows."""
    return math.fsum(iterated_kernel(kernel, n, x, t) for n in range(1, n_terms + 1))


def resolvent_identity_residual(kernel: KernelFamily, x: float, t: float,
                                spec: QuadratureSpec | None = None) -> float:
    """R(x, t) - K(x, t) - ∫ₜˣ K(x, s) R(s, t) ds."""
    _check_order(kernel, x, t)
    integral = integrate(lambda s: kernel.kernel(x, s) * resolvent(kernel, s, t), t, x, spec)
    return resolvent(kernel, x, t) - kernel.kernel(x, t) - integral


def solve_closed_form(p: VolterraProblem, x: float, spec: QuadratureSpec | None = None) -> float:
    """φ(x) = f(x) + α'(x)/(1 - α(x))² ∫₀ˣ f(t)(1 - α(t)) dt."""
    k = p.kernel
    if not 0.0 <= x <= k.h * (1 + 1e-12):
        raise DomainError(f"x={x} outside [0, {k.h}]")
    fx = float(p.f(x))
    ap = float(k.alpha_prime(x))
    if ap == 0.0 or x == 0.0:
        return fx
    integral = integrate(lambda t: p.f(t) * (1.0 - k.alpha(t)), 0.0, x, spec)
    return fx + ap / (1.0 - float(k.alpha(x))) ** 2 * integral


def equation_residual(p: VolterraProblem, phi: RealFn, x: float,
                      spec: QuadratureSpec | None = None) -> float:
    """φ(x) - ∫₀ˣ K(x, t) φ(t) dt - f(x) for a candidate solution φ."""
    k = p.kernel
    integral = integrate(lambda t: k.kernel(x, t) * phi(t), 0.0, x, spec) if x > 0 else 0.0
    return float(phi(x)) - integral - float(p.f(x))


def march_volterra(kernel_fn: Callable[[float, np.ndarray], np.ndarray], f: RealFn,
                   h: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoidal marching for φ(x) = f(x) + ∫₀ˣ k(x, s) φ(s) ds on [0, h].

    ``kernel_fn(x, s)`` must accept an array ``s``. Uses ``n`` intervals and
    solves the implicit diagonal term at each node, giving O((h/n)²) error for
    smooth data.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    xs = np.linspace(0.0, h, n + 1)
    dx = h / n
    phi = np.empty(n + 1)
    phi[0] = float(f(0.0))
    for i in range(1, n + 1):
        kv = np.asarray(kernel_fn(xs[i], xs[: i + 1]), dtype=float)
        if kv.ndim == 0:
            kv = np.full(i + 1, float(kv))
        acc = 0.5 * kv[0] * phi[0] + float(np.dot(kv[1:i], phi[1:i]))
        denom = 1.0 - 0.5 * dx * kv[i]
        if denom == 0.0:
            raise DomainError("implicit trapezoid step is singular; refine the grid")
        phi[i] = (float(f(xs[i])) + dx * acc) / denom
    return xs, phi


def solve_marching(p: VolterraProblem, grid_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Marching-quadrature oracle for the problem's equation on [0, h]."""
    if grid_n < 16:
        raise DomainError("grid_n must be >= 16")
    k = p.kernel

    def kern(x, s):
        return np.full(np.shape(s), k.kernel(x))

    return march_volterra(kern, p.f, k.h, grid_n)


def solve_sine_problem(grid_n: int, h: float = math.pi / 2) -> tuple[np.ndarray, np.ndarray]:
    """Marching solution of φ(x) = x + ∫₀ˣ (s - x) φ(s) ds, whose exact solution is sin x."""
    return march_volterra(lambda x, s: s - x, lambda x: x, h, grid_n)


def p4_residual(x: float, spec: QuadratureSpec | None = None) -> float:
    """x + ∫₀ˣ (s - x) sin s ds - sin x, by quadrature; vanishes identically."""
    if x < 0:
        raise DomainError("x must be >= 0")
    if x == 0:
        return 0.0
    integral = integrate(lambda s: (s - x) * np.sin(s), 0.0, x, spec)
    return x + integral - math.sin(x)


def empirical_order(errors, ns) -> float:
    """Least-squares slope of -log(error) against log(n)."""
    slope = np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(errors, float)), 1)[0]
    return float(-slope)
