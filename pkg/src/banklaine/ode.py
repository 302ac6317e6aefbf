"""Initial-value integration of y'' + A(z) y = 0 along polyline paths.

Two steppers sit behind one interface.  Polynomial coefficients use a
recursive Taylor-series method: on each step the series coefficients of the
solution are generated exactly from the ODE recurrence, so the local error
is the series truncation and can be driven to roundoff.  Analytic
(black-box) coefficients fall back to scipy's DOP853.

Jets are carried as (y, y'); y'' is always reconstructed from the ODE.
All operations are pure; traces are immutable after construction.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .coefficients import CoefficientFunction, ComplexPath
from .errors import BanklaineError, IntegrationDomainError, StiffnessError

DEFAULT_TOLERANCE = 1e-12
_TAYLOR_ORDER = 26
_MIN_STEP_FACTOR = 1e-13


@dataclass(frozen=True)
class _TaylorStep:
    """One accepted step: solution series about z0 in arclength sigma.

    ``coeffs[k]`` holds the sigma^k coefficients of each propagated column.
    """

    z0: complex
    direction: complex  # unit vector of the segment
    h: float            # arclength advanced by this step
    coeffs: np.ndarray  # shape (order+1, ncols)

    def eval_sigma(self, sigma, derivative: int = 0) -> np.ndarray:
        """d^k/dsigma^k of the column solutions at arclength offset sigma."""
        c = self.coeffs
        for _ in range(derivative):
            n = np.arange(1, len(c), dtype=float)
            c = (c[1:].T * n).T
        sigma = np.asarray(sigma, dtype=float)
        acc = np.zeros(sigma.shape + (c.shape[1],), dtype=complex)
        for row in c[::-1]:
            acc = acc * sigma[..., None] + row
        return acc

    def eval(self, sigma, derivative: int = 0) -> np.ndarray:
        """d^k/dz^k of the column solutions; z = z0 + sigma*direction."""
        return self.eval_sigma(sigma, derivative) * self.direction ** (-derivative)


class SegmentTrace:
    """Dense solution data along one straight segment."""

    def __init__(self, start: complex, end: complex, steps: list[_TaylorStep]):
        self.start = start
        self.end = end
        self.direction = (end - start) / abs(end - start)
        self.arclength = abs(end - start)
        self.steps = steps
        self.offsets = np.concatenate([[0.0], np.cumsum([s.h for s in steps])])

    def eval(self, z, derivative: int = 0) -> np.ndarray:
        """Jet columns (d^k/dz^k) at points z lying on the segment."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        sigma = ((z - self.start) / self.direction).real
        sigma = np.clip(sigma, 0.0, self.arclength)
        idx = np.clip(np.searchsorted(self.offsets, sigma, side="right") - 1,
                      0, len(self.steps) - 1)
        out = np.empty(z.shape + (self.steps[0].coeffs.shape[1],), dtype=complex)
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.steps[i].eval(sigma[mask] - self.offsets[i], derivative)
        return out[0] if scalar else out


class PathTrace:
    """Trace of (z, y, y') along a polyline, with dense evaluation."""

    def __init__(self, path: ComplexPath, segments: list[SegmentTrace],
                 samples_z: np.ndarray, samples_y: np.ndarray, samples_yp: np.ndarray):
        self.path = path
        self.segments = segments
        self.samples_z = samples_z
        self.samples_y = samples_y
        self.samples_yp = samples_yp

    @property
    def end_jet(self):
        return self.samples_y[-1], self.samples_yp[-1]

    def segment_for(self, z: complex) -> SegmentTrace:
        z = complex(z)
        for seg in self.segments:
            sigma = ((z - seg.start) / seg.direction).real
            off = abs(z - (seg.start + sigma * seg.direction))
            if -1e-12 <= sigma <= seg.arclength + 1e-12 and off <= 1e-9 * (1 + abs(z)):
                return seg
        raise BanklaineError(f"point {z!r} does not lie on the traced path")

    def jet(self, z: complex):
        seg = self.segment_for(z)
        return seg.eval(z, 0), seg.eval(z, 1)


def _taylor_coeffs(pcoeffs: np.ndarray, inits: np.ndarray, order: int) -> np.ndarray:
    """Series coefficients of solutions of Y'' = -P(sigma) Y.

    ``inits`` has shape (2, ncols): rows are (value, sigma-slope) at sigma=0.
    """
    ncols = inits.shape[1]
    c = np.zeros((order + 1, ncols), dtype=complex)
    c[0] = inits[0]
    c[1] = inits[1]
    deg = len(pcoeffs) - 1
    for k in range(order - 1):
        jmax = min(k, deg)
        acc = np.zeros(ncols, dtype=complex)
        for j in range(jmax + 1):
            acc += pcoeffs[j] * c[k - j]
        c[k + 2] = -acc / ((k + 1) * (k + 2))
    return c


def _integrate_segment_taylor(coefficient, start, end, state, tolerance):
    """Advance (Y, Y'_sigma) columns from start to end; returns (steps, state)."""
    direction = (end - start) / abs(end - start)
    total = abs(end - start)
    d2 = direction * direction
    steps: list[_TaylorStep] = []
    sigma0 = 0.0
    a0 = coefficient(start)
    if not cmath.isfinite(a0):
        raise IntegrationDomainError(start, a0)
    h = min(total, 0.5 / (1.0 + abs(a0) ** 0.5))
    while sigma0 < total * (1 - 1e-15):
        z0 = start + sigma0 * direction
        a_here = coefficient(z0)
        if not cmath.isfinite(a_here):
            raise IntegrationDomainError(z0, a_here)
        pcoeffs = d2 * coefficient.shifted_coeffs(z0, direction)
        c = _taylor_coeffs(pcoeffs, state, _TAYLOR_ORDER)
        scale = max(1.0, float(np.max(np.abs(state))))
        tail_hi = float(np.max(np.abs(c[-1])))
        tail_lo = float(np.max(np.abs(c[-2])))
        remaining = total - sigma0
        for _ in range(80):
            h = min(h, remaining)
            est = tail_hi * h ** _TAYLOR_ORDER + tail_lo * h ** (_TAYLOR_ORDER - 1)
            allowed = tolerance * h * scale
            if est <= allowed or h <= _MIN_STEP_FACTOR * (1 + abs(z0)):
                break
            h *= min(0.9, 0.75 * (allowed / est) ** (1.0 / _TAYLOR_ORDER))
        # a step that covers the remaining arc is fine however small it is;
        # underflow only counts when the controller is genuinely stuck
        if h <= _MIN_STEP_FACTOR * (1 + abs(z0)) and h < remaining * 0.999:
            raise StiffnessError(z0, h)
        step = _TaylorStep(z0=z0, direction=direction, h=h, coeffs=c)
        steps.append(step)
        state = np.vstack([step.eval_sigma(h, 0), step.eval_sigma(h, 1)])
        sigma0 += h
        h *= 1.4  # widen; the control loop shrinks again if needed
    return steps, state


def _integrate_segment_dop853(coefficient, start, end, state, tolerance):
    direction = (end - start) / abs(end - start)
    total = abs(end - start)
    ncols = state.shape[1]
    d2 = direction * direction

    def rhs(sigma, packed):
        z = start + sigma * direction
        a = coefficient(z)
        if not cmath.isfinite(a):
            raise IntegrationDomainError(z, a)
        return np.concatenate([packed[ncols:], -d2 * a * packed[:ncols]])

    packed0 = np.concatenate([state[0], state[1]]).astype(complex)
    sol = solve_ivp(rhs, (0.0, total), packed0, method="DOP853",
                    rtol=max(tolerance, 1e-13), atol=tolerance, dense_output=True)
    if not sol.success:
        raise StiffnessError(start + sol.t[-1] * direction, 0.0)
    steps = []
    for t0, t1 in zip(sol.t[:-1], sol.t[1:]):
        h = t1 - t0
        if h <= 0:
            continue
        p0, p1 = sol.sol(t0), sol.sol(t1)
        y0, yp0 = p0[:ncols], p0[ncols:]
        y1, yp1 = p1[:ncols], p1[ncols:]
        # cubic Hermite chunk; node accuracy is DOP853's, the chunk only
        # serves dense queries between nodes
        c = np.zeros((4, ncols), dtype=complex)
        c[0], c[1] = y0, yp0
        c[2] = (3 * (y1 - y0) - h * (2 * yp0 + yp1)) / h ** 2
        c[3] = (2 * (y0 - y1) + h * (yp0 + yp1)) / h ** 3
        steps.append(_TaylorStep(z0=start + t0 * direction, direction=direction,
                                 h=h, coeffs=c))
    yT = sol.y[:, -1]
    if not steps:
        c = np.zeros((2, ncols), dtype=complex)
        c[0], c[1] = state[0], state[1]
        steps = [_TaylorStep(z0=start, direction=direction, h=total, coeffs=c)]
    return steps, np.vstack([yT[:ncols], yT[ncols:]])


def _propagate(coefficient, path, inits_dz, tolerance):
    """Drive the stepper along every segment.  Slopes in/out are d/dz."""
    if tolerance <= 0:
        raise BanklaineError("tolerance must be positive")
    inits_dz = np.asarray(inits_dz, dtype=complex)
    segtraces = []
    zs = [path.start]
    ys = [inits_dz[0].copy()]
    yps = [inits_dz[1].copy()]
    y, yp_dz = inits_dz[0], inits_dz[1]
    use_taylor = coefficient.is_polynomial
    for a, b in path.segments():
        direction = (b - a) / abs(b - a)
        state = np.vstack([y, yp_dz * direction])
        if use_taylor:
            steps, state = _integrate_segment_taylor(coefficient, a, b, state, tolerance)
        else:
            steps, state = _integrate_segment_dop853(coefficient, a, b, state, tolerance)
        seg = SegmentTrace(a, b, steps)
        segtraces.append(seg)
        for s in steps:
            zs.append(s.z0 + s.h * direction)
            ys.append(s.eval(s.h, 0))
            yps.append(s.eval(s.h, 1))
        y = state[0]
        yp_dz = state[1] / direction
    trace = PathTrace(path, segtraces, np.array(zs), np.vstack(ys), np.vstack(yps))
    return trace, np.vstack([y, yp_dz])


def integrate_ivp(coefficient: CoefficientFunction, start: complex, value: complex,
                  slope: complex, path: ComplexPath,
                  tolerance: float = DEFAULT_TOLERANCE) -> PathTrace:
    """Integrate y'' + A y = 0 with y(start)=value, y'(start)=slope along `path`.

    The trace carries (z, y, y') at every accepted step and evaluates the
    jet densely anywhere on the path.
    """
    if complex(path.start) != complex(start):
        raise BanklaineError("path must begin at the start point")
    trace, _ = _propagate(coefficient, path,
                          np.array([[value], [slope]], dtype=complex), tolerance)
    return trace


@dataclass(frozen=True)
class SolutionPair:
    """Wronskian-normalized pair of solutions of y'' + A y = 0.

    f1 has jet (1, 0) and f2 has jet (0, 1) at the base point, hence
    W(f1, f2) = f1 f2' - f1' f2 = 1 exactly as constructed.
    """

    coefficient: CoefficientFunction
    base_point: complex = 0j
    tolerance: float = DEFAULT_TOLERANCE

    def default_path(self, z: complex) -> ComplexPath:
        return ComplexPath.line(self.base_point, z)

    def propagate(self, path: ComplexPath) -> PathTrace:
        """Propagate both solutions along a path starting at the base point."""
        if complex(path.start) != complex(self.base_point):
            raise BanklaineError("path must begin at the pair's base point")
        inits = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex)
        trace, _ = _propagate(self.coefficient, path, inits, self.tolerance)
        return trace

    def jets_at(self, z: complex, path: ComplexPath | None = None):
        """((f1, f1'), (f2, f2')) at z; integrates along `path` or a segment."""
        z = complex(z)
        if z == complex(self.base_point):
            return (1 + 0j, 0j), (0j, 1 + 0j)
        trace = self.propagate(path or self.default_path(z))
        y, yp = trace.end_jet
        return (y[0], yp[0]), (y[1], yp[1])


def solution_pair(coefficient: CoefficientFunction, base_point: complex = 0j,
                  tolerance: float = DEFAULT_TOLERANCE) -> SolutionPair:
    return SolutionPair(coefficient=coefficient, base_point=complex(base_point),
                        tolerance=tolerance)


def wronskian_at(pair: SolutionPair, z: complex,
                 path: ComplexPath | None = None) -> complex:
    """f1 f2' - f1' f2 at z; equals 1 up to accumulated integration error."""
    (f1, f1p), (f2, f2p) = pair.jets_at(z, path)
    return f1 * f2p - f1p * f2


def ode_residual_samples(coefficient: CoefficientFunction, trace: PathTrace,
                         per_step: int = 1) -> np.ndarray:
    """|y'' + A y| at step midpoints, y'' reconstructed from the stepper."""
    vals = []
    for seg in trace.segments:
        for step in seg.steps:
            for j in range(per_step):
                s = step.h * (j + 0.5) / per_step
                z = step.z0 + s * seg.direction
                y = step.eval(np.array(s), 0)
                ypp = step.eval(np.array(s), 2)
                vals.append(float(np.max(np.abs(ypp + coefficient(z) * y))))
    return np.array(vals)
