"""Bank-Laine products E = f1 f2 and their pointwise algebra.

A Bank-Laine function satisfies E'(z) = +-1 at every zero.  Two sources are
supported: the closed-form trigonometric family

    E(z) = +- sin(eta z - w1) sin(eta z - w2) / (eta sin(w1 - w2)),

valid whenever eta sin(w1 - w2) != 0 (with A = eta^2), and the product of a
Wronskian-normalized solution pair of y'' + A y = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientFunction, ComplexPath
from .errors import (
    BanklaineError,
    CriticalPointError,
    EvaluationAtZeroError,
    NotABankLaineZeroError,
)
from .ode import SolutionPair


@dataclass(frozen=True)
class Jet3:
    """Second-order jet of E at a point: (E, E', E'')."""

    z: complex
    e0: complex
    e1: complex
    e2: complex

    def __post_init__(self):
        for v in (self.z, self.e0, self.e1, self.e2):
            if not cmath.isfinite(complex(v)):
                raise BanklaineError("jet entries must be finite")


class BankLaineFunction:
    """Evaluable Bank-Laine function, from a trig family or a solution pair."""

    def __init__(self, *, trig: tuple | None = None, pair: SolutionPair | None = None):
        if (trig is None) == (pair is None):
            raise BanklaineError("exactly one of trig/pair must be given")
        if trig is not None:
            eta, w1, w2, sign = trig
            eta = float(eta)
            w1 = float(w1)
            w2 = float(w2)
            sign = int(sign)
            if sign not in (1, -1):
                raise BanklaineError("sign must be +1 or -1")
            denom = eta * math.sin(w1 - w2)
            if eta == 0.0 or abs(math.sin(w1 - w2)) < 1e-12:
                raise BanklaineError(
                    "degenerate trig family: eta*sin(w1-w2) must be nonzero"
                )
            self.source = "trig"
            self.eta, self.w1, self.w2, self.sign = eta, w1, w2, sign
            self._denom = denom
        else:
            self.source = "pair"
            self.pair = pair

    @classmethod
    def from_trig(cls, eta: float, w1: float, w2: float, sign: int = 1) -> "BankLaineFunction":
        return cls(trig=(eta, w1, w2, sign))

    @classmethod
    def from_pair(cls, pair: SolutionPair) -> "BankLaineFunction":
        return cls(pair=pair)

    @property
    def coefficient(self) -> CoefficientFunction:
        """The A for which this E solves the Bank-Laine equation."""
        if self.source == "trig":
            return CoefficientFunction.constant(self.eta ** 2)
        return self.pair.coefficient

    def jet_at(self, z: complex, path: ComplexPath | None = None) -> Jet3:
        """(E, E', E'') at z.

        For a pair source, E'' = 2 f1' f2' - 2 A E, using the ODE to remove
        second derivatives of the factors.
        """
        z = complex(z)
        if self.source == "trig":
            eta, w1, w2 = self.eta, self.w1, self.w2
            s1 = cmath.sin(eta * z - w1)
            s2 = cmath.sin(eta * z - w2)
            c1 = cmath.cos(eta * z - w1)
            c2 = cmath.cos(eta * z - w2)
            pref = self.sign / self._denom
            e0 = pref * s1 * s2
            e1 = pref * eta * (c1 * s2 + s1 * c2)
            e2 = pref * (2 * eta ** 2) * (c1 * c2 - s1 * s2)
            return Jet3(z, e0, e1, e2)
        (f1, f1p), (f2, f2p) = self.pair.jets_at(z, path)
        a = self.pair.coefficient(z)
        e0 = f1 * f2
        e1 = f1p * f2 + f1 * f2p
        e2 = 2 * f1p * f2p - 2 * a * e0
        return Jet3(z, e0, e1, e2)

    def real_evaluator(self, interval: tuple[float, float], tolerance: float | None = None):
        """Fast vectorized (E, E') on a real interval.

        For a pair source the pair is propagated once over the interval and
        the dense trace is reused for every query; the trig family is direct.
        Returns a callable x -> (E(x), E'(x)) accepting arrays.
        """
        a, b = float(interval[0]), float(interval[1])
        if self.source == "trig":
            def ev(x):
                x = np.asarray(x, dtype=float)
                eta, w1, w2 = self.eta, self.w1, self.w2
                pref = self.sign / self._denom
                s1, s2 = np.sin(eta * x - w1), np.sin(eta * x - w2)
                c1, c2 = np.cos(eta * x - w1), np.cos(eta * x - w2)
                return pref * s1 * s2, pref * eta * (c1 * s2 + s1 * c2)
            return ev

        base = complex(self.pair.base_point)
        traces = {}
        if b > base.real:
            traces["+"] = self.pair.propagate(ComplexPath.line(base, complex(b)))
        if a < base.real:
            traces["-"] = self.pair.propagate(ComplexPath.line(base, complex(a)))

        def ev(x):
            x = np.asarray(x, dtype=float)
            f = np.empty(x.shape + (2,), dtype=complex)
            fp = np.empty_like(f)
            at_base = x == base.real
            f[at_base] = (1.0, 0.0)
            fp[at_base] = (0.0, 1.0)
            for key, mask in (("+", x > base.real), ("-", x < base.real)):
                if not mask.any():
                    continue
                seg = traces[key].segments[0]
                f[mask] = seg.eval(x[mask].astype(complex), 0)
                fp[mask] = seg.eval(x[mask].astype(complex), 1)
            e0 = f[..., 0] * f[..., 1]
            e1 = fp[..., 0] * f[..., 1] + f[..., 0] * fp[..., 1]
            return e0, e1
        return ev


def jet_at(E: BankLaineFunction, z: complex, path: ComplexPath | None = None) -> Jet3:
    return E.jet_at(z, path)


def bl_residual(E_jet: Jet3, A_value: complex) -> complex:
    """4A - [(E'/E)^2 - 2E''/E - 1/E^2]; zero iff the jet is a Wronskian-1
    product jet for coefficient A."""
    if E_jet.e0 == 0:
        raise EvaluationAtZeroError("bl_residual undefined at a zero of E")
    r = (E_jet.e1 / E_jet.e0) ** 2 - 2 * E_jet.e2 / E_jet.e0 - 1 / E_jet.e0 ** 2
    return 4 * A_value - r


def verify_zero_property(E: BankLaineFunction, zero: complex, tolerance: float) -> int:
    """Check E'(zero) = +-1 and return the sign; raises if neither fits.

    Requires |E(zero)| <= tolerance (the point really is a zero) and
    |E'(zero) -+ 1| <= 100*tolerance.
    """
    jet = E.jet_at(zero)
    if abs(jet.e0) > tolerance:
        raise BanklaineError(
            f"|E({zero!r})| = {abs(jet.e0):.3e} exceeds tolerance {tolerance:.1e}"
        )
    for s in (1, -1):
        if abs(jet.e1 - s) <= 100 * tolerance:
            return s
    raise NotABankLaineZeroError(zero, abs(jet.e1))


def schwarzian(u1: complex, u2: complex, u3: complex) -> complex:
    """U'''/U' - (3/2)(U''/U')^2 from the first three derivatives of U."""
    if u1 == 0:
        raise CriticalPointError("Schwarzian undefined where U' = 0")
    return u3 / u1 - 1.5 * (u2 / u1) ** 2


def quotient_logderiv(E_jet: Jet3) -> complex:
    """U'/U for U = f2/f1, which equals 1/E by the Wronskian normalization."""
    if E_jet.e0 == 0:
        raise EvaluationAtZeroError("1/E undefined at a zero of E")
    return 1 / E_jet.e0


def quotient_schwarzian_exact(E: BankLaineFunction, z: complex) -> complex:
    """S_U at z from exact jets of E, via g = U'/U = 1/E.

    With g = 1/E:  U''/U' = (g' + g^2)/g  and  U'''/U' = (g'' + 3gg' + g^3)/g,
    so S_U needs only the jet (E, E', E'').
    """
    jet = E.jet_at(z)
    if jet.e0 == 0:
        raise EvaluationAtZeroError("S_U evaluation at a zero of E")
    e0, e1, e2 = jet.e0, jet.e1, jet.e2
    g = 1 / e0
    gp = -e1 / e0 ** 2
    gpp = (2 * e1 ** 2 - e0 * e2) / e0 ** 3
    r3 = (gpp + 3 * g * gp + g ** 3) / g
    r2 = (gp + g ** 2) / g
    return r3 - 1.5 * r2 ** 2


def quotient_derivs_fd(E: BankLaineFunction, z: complex, h: float = 1e-2):
    """(U', U'', U''') of U = f2/f1 at z by Richardson-extrapolated central
    differences along the real direction, h and h/2.

    For a pair source all nine stencil values come from one dense trace, so
    integration error varies smoothly across the stencil and cancels in the
    differences.
    """
    z = complex(z)

    if E.source == "pair":
        pair = E.pair
        lo = z - 2 * h
        path = ComplexPath((pair.base_point, lo, z + 2 * h)) \
            if lo != pair.base_point else ComplexPath.line(pair.base_point, z + 2 * h)
        trace = pair.propagate(path)
        seg = trace.segments[-1]

        def U(w):
            vals = seg.eval(np.asarray(w, dtype=complex), 0)
            return vals[..., 1] / vals[..., 0]
    else:
        def U(w):
            # quotient of the base-normalized pair (cos(eta z), sin(eta z)/eta)
            # for A = eta^2; any other solution quotient is a Moebius image of
            # this one and has the same Schwarzian
            eta = E.eta
            return np.tan(eta * np.asarray(w, dtype=complex)) / eta

    def derivs(step):
        pts = z + step * np.array([-2.0, -1.0, 1.0, 2.0])
        um2, um1, up1, up2 = U(pts)
        d1 = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * step)
        u0 = U(np.array([z]))[0]
        d2 = (up1 - 2 * u0 + um1) / step ** 2
        d3 = (up2 - 2 * up1 + 2 * um1 - um2) / (2 * step ** 3)
        return np.array([d1, d2, d3])

    a = derivs(h)
    b = derivs(h / 2)
    # leading error O(h^2) for d2, d3; d1 stencil is already O(h^4)
    extr = (4 * b - a) / 3
    extr[0] = b[0]
    return tuple(extr)


def rectangle_evaluators(E: BankLaineFunction, rectangle):
    """(E, E') callables on the boundary of an axis-aligned rectangle.

    For a pair source the pair is propagated once around the boundary (with
    an approach segment from the base point) and queries reuse the dense
    trace, so argument-principle refinement costs no further integration.
    """
    x0, x1, y0, y1 = map(float, rectangle)
    if E.source == "trig":
        def f(zs):
            zs = np.asarray(zs, dtype=complex)
            eta, w1, w2 = E.eta, E.w1, E.w2
            pref = E.sign / E._denom
            return pref * np.sin(eta * zs - w1) * np.sin(eta * zs - w2)

        def fp(zs):
            zs = np.asarray(zs, dtype=complex)
            eta, w1, w2 = E.eta, E.w1, E.w2
            pref = E.sign / E._denom
            return pref * eta * np.sin(2 * eta * zs - w1 - w2)
        return f, fp

    pair = E.pair
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1),
               complex(x0, y1), complex(x0, y0)]
    nodes = [pair.base_point] + corners if pair.base_point != corners[0] else corners
    trace = pair.propagate(ComplexPath(tuple(nodes)))
    edges = trace.segments[-4:]

    def locate(zs):
        zs = np.asarray(zs, dtype=complex)
        out = np.empty(zs.shape + (2, 2), dtype=complex)
        assigned = np.zeros(zs.shape, dtype=bool)
        for seg in edges:
            sigma = ((zs - seg.start) / seg.direction).real
            on = (~assigned & (sigma >= -1e-9) & (sigma <= seg.arclength + 1e-9)
                  & (np.abs(zs - (seg.start + sigma * seg.direction)) <= 1e-9 * (1 + np.abs(zs))))
            if on.any():
                out[on, 0] = seg.eval(zs[on], 0)
                out[on, 1] = seg.eval(zs[on], 1)
                assigned |= on
        if not assigned.all():
            raise BanklaineError("query point off the rectangle boundary")
        return out

    def f(zs):
        j = locate(zs)
        return j[..., 0, 0] * j[..., 0, 1]

    def fp(zs):
        j = locate(zs)
        return j[..., 1, 0] * j[..., 0, 1] + j[..., 0, 0] * j[..., 1, 1]

    return f, fp


def critical_rays(coefficient: CoefficientFunction) -> list[float]:
    """The n+2 directions theta* in [0, 2pi) with a_n e^{i(n+2)theta*} > 0.

    Along these rays a degree-n polynomial coefficient produces the
    principal-solution transitions; there are exactly n+2 of them, equally
    spaced with gap 2pi/(n+2).
    """
    if not coefficient.is_polynomial:
        raise BanklaineError("critical rays require a polynomial coefficient")
    n = coefficient.degree
    if n < 1:
        raise BanklaineError("critical rays require degree >= 1")
    a_n = coefficient.coeffs[-1]
    if a_n == 0:
        raise BanklaineError("leading coefficient must be nonzero")
    base = -cmath.phase(a_n)
    rays = [((base + 2 * math.pi * k) / (n + 2)) % (2 * math.pi) for k in range(n + 2)]
    rays.sort()
    return rays
