"""Numerical laboratory for Bank-Laine functions.

Core surfaces: an ODE engine producing Wronskian-normalized solution pairs
of y'' + A(z) y = 0, the Bank-Laine product algebra, zero censuses with
convergence-exponent estimation, and a quasiregular surgery map whose real
zeros and poles obey a cubic counting law.
"""

from .coefficients import CoefficientFunction, ComplexPath
from .ode import (
    SolutionPair,
    integrate_ivp,
    solution_pair,
    wronskian_at,
)

__all__ = [
    "CoefficientFunction",
    "ComplexPath",
    "SolutionPair",
    "integrate_ivp",
    "solution_pair",
    "wronskian_at",
]

__version__ = "0.1.0"
