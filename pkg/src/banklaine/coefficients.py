"""Coefficient functions A(z) for y'' + A(z) y = 0, and polyline paths.

The coefficient is entire in every supported form: a constant, a polynomial
(ascending coefficients), or a user-supplied analytic evaluator.  Evaluation
is pure and deterministic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BanklaineError

_CONST = "constant"
_POLY = "polynomial"
_ANALYTIC = "analytic"


@dataclass(frozen=True)
class CoefficientFunction:
    """Entire coefficient A(z), tagged as constant, polynomial or analytic.

    Use the classmethods ``constant``, ``polynomial`` and ``analytic`` to
    construct; the raw constructor is not validated.
    """

    kind: str
    coeffs: tuple = ()
    evaluator: Callable[[complex], complex] | None = field(default=None, compare=False)

    @classmethod
    def constant(cls, c: complex) -> "CoefficientFunction":
        c = complex(c)
        if not cmath.isfinite(c):
            raise BanklaineError("constant coefficient must be finite")
        return cls(kind=_CONST, coeffs=(c,))

    @classmethod
    def polynomial(cls, coeffs: Sequence[complex]) -> "CoefficientFunction":
        """Polynomial with ascending coefficients; trailing zeros are trimmed."""
        cs = [complex(c) for c in coeffs]
        if not cs:
            cs = [0j]
        if not all(cmath.isfinite(c) for c in cs):
            raise BanklaineError("polynomial coefficients must be finite")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if len(cs) == 1:
            return cls(kind=_CONST, coeffs=(cs[0],))
        return cls(kind=_POLY, coeffs=tuple(cs))

    @classmethod
    def analytic(cls, evaluator: Callable[[complex], complex]) -> "CoefficientFunction":
        return cls(kind=_ANALYTIC, evaluator=evaluator)

    @property
    def is_constant(self) -> bool:
        return self.kind == _CONST

    @property
    def is_polynomial(self) -> bool:
        return self.kind in (_CONST, _POLY)

    @property
    def degree(self) -> int:
        """Polynomial degree; raises for analytic coefficients."""
        if not self.is_polynomial:
            raise BanklaineError("degree undefined for analytic coefficient")
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        if self.kind == _CONST:
            return self.coeffs[0]
        if self.kind == _POLY:
            acc = 0j
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        return complex(self.evaluator(z))

    def eval_many(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        if self.kind == _CONST:
            return np.full_like(zs, self.coeffs[0])
        if self.kind == _POLY:
            acc = np.zeros_like(zs)
            for c in reversed(self.coeffs):
                acc = acc * zs + c
            return acc
        return np.array([complex(self.evaluator(z)) for z in zs.ravel()]).reshape(zs.shape)

    def shifted_coeffs(self, z0: complex, direction: complex) -> np.ndarray:
        """Coefficients of sigma -> A(z0 + direction*sigma), ascending.

        Only valid for polynomial (incl. constant) coefficients.
        """
        if not self.is_polynomial:
            raise BanklaineError("shifted_coeffs requires a polynomial coefficient")
        out = np.zeros(len(self.coeffs), dtype=complex)
        # Horner with polynomial accumulator: p(sigma) <- p(sigma)*(z0 + d*sigma) + a_k
        for a in reversed(self.coeffs):
            shifted = np.zeros_like(out)
            shifted[0] = a
            shifted += z0 * out
            shifted[1:] += direction * out[:-1]
            out = shifted
        return out


@dataclass(frozen=True)
class ComplexPath:
    """Polyline in the plane: at least two finite nodes, consecutive distinct."""

    nodes: tuple

    def __post_init__(self):
        nodes = tuple(complex(n) for n in self.nodes)
        if len(nodes) < 2:
            raise BanklaineError("path needs at least 2 nodes")
        if not all(cmath.isfinite(n) for n in nodes):
            raise BanklaineError("path nodes must be finite")
        for a, b in zip(nodes, nodes[1:]):
            if a == b:
                raise BanklaineError("consecutive path nodes must be distinct")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def line(cls, a: complex, b: complex) -> "ComplexPath":
        return cls((complex(a), complex(b)))

    @property
    def start(self) -> complex:
        return self.nodes[0]

    @property
    def end(self) -> complex:
        return self.nodes[-1]

    def length(self) -> float:
        return float(sum(abs(b - a) for a, b in zip(self.nodes, self.nodes[1:])))

    def segments(self):
        return list(zip(self.nodes, self.nodes[1:]))
