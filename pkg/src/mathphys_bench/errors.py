"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class MathPhysError(Exception):
    """Base class for all errors raised by :mod:`mathphys_bench`."""


class DomainError(MathPhysError, ValueError):
    """An argument lies outside the domain where the formula is defined."""


class InvalidInterval(DomainError):
    """Integration interval with ``a > b``."""


class SingularPoint(DomainError):
    """Evaluation requested exactly at a singularity of a field."""


class DegenerateVev(DomainError):
    """Both vacuum values vanish, so the mixing angle is undefined."""


class NoSignChange(MathPhysError, ValueError):
    """Bracket endpoints do not straddle a root."""


class NonConvergence(MathPhysError, ArithmeticError):
    """An iterative or adaptive routine exhausted its budget."""


class ComplexRoots(MathPhysError, ArithmeticError):
    """A quadratic expected to have real roots has a negative discriminant."""


class ZeroDenominator(MathPhysError, ZeroDivisionError):
    """A transformation would divide by a (numerically) vanishing value."""


class StepUnderflow(MathPhysError, ArithmeticError):
    """The ODE integrator needed a step below ``min_step``.

    ``partial`` holds the trajectory integrated up to the failure, or None.
    """

    def __init__(self, message: str, t: float, partial=None):
        super().__init__(message)
        self.t = t
        self.partial = partial


class TurnaroundError(MathPhysError):
    """A closed universe reached maximum expansion; the cooling branch ends.

    ``partial`` holds the states integrated before the turnaround, or None.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
