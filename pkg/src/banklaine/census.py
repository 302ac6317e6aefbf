"""Zero location and counting: real scans, argument-principle counts,
the counting function n(r), and growth-exponent estimators.

The real scan brackets sign changes of a real-restricted evaluator and
polishes each bracket with safeguarded Newton.  The contour count is the
standard argument-principle integral over an axis-aligned rectangle, refined
until the value sits within 0.05 of an integer.  The convergence exponent is
read off as the log-log slope of n(r), cross-checked by a partial-sum
divergence bracket.
"""

from __future__ import annotations

import bisect
import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BanklaineError,
    BoundaryTooCloseError,
    InsufficientDataError,
    InsufficientScanError,
    RealityViolationError,
)

log = logging.getLogger(__name__)

MERGE_DISTANCE = 1e-8  # zeros closer than this are refinement duplicates


@dataclass(frozen=True)
class ZeroCensus:
    """Sorted real zeros with the sign of the derivative at each."""

    zeros: tuple
    signs: tuple
    radius_max: float

    def __post_init__(self):
        zs = np.asarray(self.zeros, dtype=float)
        if len(zs) and np.any(np.diff(zs) <= 0):
            raise BanklaineError("census zeros must be strictly increasing")
        if len(self.signs) != len(zs):
            raise BanklaineError("signs must match zeros")
        object.__setattr__(self, "zeros", tuple(zs.tolist()))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))

    def __len__(self):
        return len(self.zeros)


@dataclass(frozen=True)
class ExponentEstimate:
    lambda_fit: float
    lambda_series: float
    window: tuple
    residual: float


def real_zeros_scan(f, interval: tuple[float, float], initial_step: float,
                    refine_tol: float = 1e-12) -> ZeroCensus:
    """Locate simple real zeros of f on [a, b].

    ``f`` maps a float array to (values, derivatives); values must be real up
    to roundoff (imaginary part below 1e-8 of the local scale).  The walk
    halves its step wherever |f| and |f'| are both small relative to scale,
    guarding against close pairs.
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise BanklaineError("empty scan interval")
    step = float(initial_step)
    if step <= 0:
        raise BanklaineError("initial_step must be positive")

    xs = [a]
    while xs[-1] < b:
        xs.append(min(b, xs[-1] + step))
    xs = np.array(xs)
    vals, ders = f(xs)
    _check_real(xs, vals)
    v = vals.real
    d = ders.real
    scale = max(1.0, float(np.median(np.abs(v))))

    # adaptive in-fill where the function is flat and small
    for _ in range(12):
        gap = np.abs(np.diff(xs))
        smallv = (np.abs(v[:-1]) < 0.3 * scale) & (np.abs(v[1:]) < 0.3 * scale)
        smalld = (np.abs(d[:-1]) * gap > 0.5 * np.maximum(np.abs(v[:-1]), 1e-300)) \
            | (np.abs(d[1:]) * gap > 0.5 * np.maximum(np.abs(v[1:]), 1e-300))
        need = smallv & smalld & (gap > 1e-6)
        if not need.any():
            break
        mids = 0.5 * (xs[:-1][need] + xs[1:][need])
        mv, md = f(mids)
        _check_real(mids, mv)
        xs = np.concatenate([xs, mids])
        order = np.argsort(xs)
        xs = xs[order]
        v = np.concatenate([v, mv.real])[order]
        d = np.concatenate([d, md.real])[order]

    crossings = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    zeros = []
    for i in crossings:
        zeros.append(_polish(f, xs[i], xs[i + 1], refine_tol * scale))
    # exact-zero hits on grid nodes
    for i in np.nonzero(v == 0.0)[0]:
        zeros.append(float(xs[i]))

    zeros = sorted(zeros)
    merged = []
    for x in zeros:
        if merged and abs(x - merged[-1]) < MERGE_DISTANCE:
            continue
        merged.append(x)
    if merged:
        _, dz = f(np.array(merged))
        signs = [1 if s >= 0 else -1 for s in dz.real]
    else:
        signs = []
    return ZeroCensus(zeros=tuple(merged), signs=tuple(signs),
                      radius_max=max(abs(a), abs(b)))


def _check_real(xs, vals):
    scale = np.abs(vals) + 1.0
    bad = np.abs(np.imag(vals)) > 1e-8 * scale
    if bad.any():
        i = int(np.argmax(bad))
        raise RealityViolationError(
            f"non-real value {vals[i]!r} at x={xs[i]!r}"
        )


def _polish(f, lo, hi, tol):
    """Safeguarded Newton within a sign-change bracket."""
    flo, _ = f(np.array([lo]))
    flo = float(flo.real[0])
    x = 0.5 * (lo + hi)
    for _ in range(80):
        fv, dv = f(np.array([x]))
        fv, dv = float(fv.real[0]), float(dv.real[0])
        if abs(fv) <= tol:
            return float(x)
        if fv * flo < 0:
            hi = x
        else:
            lo, flo = x, fv
        if dv != 0:
            xn = x - fv / dv
        else:
            xn = 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) < 1e-17 * (1 + abs(x)):
            return float(xn)
        x = xn
    return float(x)


def count_zeros_region(f, fprime, rectangle: tuple[float, float, float, float],
                       tol: float = 0.05, max_refine: int = 14,
                       max_perturb: int = 5) -> int:
    """Argument-principle count of zeros of f inside [x0,x1] x [y0,y1].

    (1/2pi i) * contour integral of f'/f, computed by trapezoid panels that
    are refined until every phase increment is small and the total sits
    within `tol` of an integer.  If a zero hugs the boundary the rectangle is
    nudged by 1e-3 of its diagonal and retried.
    """
    x0, x1, y0, y1 = map(float, rectangle)
    if not (x1 > x0 and y1 > y0):
        raise BanklaineError("degenerate rectangle")
    diag = math.hypot(x1 - x0, y1 - y0)
    rng = np.random.default_rng(0)
    for attempt in range(max_perturb + 1):
        try:
            return _winding_count(f, fprime, x0, x1, y0, y1, tol, max_refine)
        except BoundaryTooCloseError:
            if attempt == max_perturb:
                raise
            dx, dy = (rng.random(2) - 0.5) * 2e-3 * diag
            x0 += dx
            x1 += dx
            y0 += dy
            y1 += dy
    raise BoundaryTooCloseError("exhausted perturbation attempts")


def _winding_count(f, fprime, x0, x1, y0, y1, tol, max_refine):
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1),
               complex(x0, y1), complex(x0, y0)]

    def edge_samples(a, b, n0):
        n = n0
        for _ in range(max_refine):
            ts = np.linspace(0, 1, n + 1)
            zs = a + (b - a) * ts
            fv = np.asarray(f(zs), dtype=complex)
            if np.min(np.abs(fv)) < 1e-12 * (1 + np.max(np.abs(fv))):
                raise BoundaryTooCloseError(
                    f"|f| ~ 0 on boundary near {zs[int(np.argmin(np.abs(fv)))]:.6g}"
                )
            dphi = np.angle(fv[1:] / fv[:-1])
            if np.max(np.abs(dphi)) < 0.8:
                return zs, fv, dphi
            n *= 2
        raise BoundaryTooCloseError("phase steps did not settle under refinement")

    total = 0.0
    phase_total = 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        zs, fv, dphi = edge_samples(a, b, 32)
        g = np.asarray(fprime(zs), dtype=complex) / fv
        dz = np.diff(zs)
        total += float(np.sum(0.5 * (g[:-1] + g[1:]) * dz).imag)
        phase_total += float(np.sum(dphi))
    count = total / (2 * math.pi)
    nearest = round(count)
    if abs(count - nearest) > tol:
        # trapezoid too coarse; the pure phase sum is exact once every
        # increment is below pi
        count = phase_total / (2 * math.pi)
        nearest = round(count)
        if abs(count - nearest) > tol:
            raise BoundaryTooCloseError(
                f"winding {count:.4f} not within {tol} of an integer"
            )
    if nearest < 0:
        raise BanklaineError("negative winding: f has poles inside the rectangle")
    return int(nearest)


def counting_function(census: ZeroCensus, r: float) -> int:
    """n(r): number of census zeros with |x| <= r."""
    if r < 0:
        raise BanklaineError("radius must be nonnegative")
    if r > census.radius_max * (1 + 1e-12):
        raise InsufficientScanError(
            f"r={r} exceeds scanned extent {census.radius_max}"
        )
    zs = census.zeros
    hi = bisect.bisect_right(zs, r)
    lo = bisect.bisect_left(zs, -r)
    return hi - lo


def convergence_exponent(census: ZeroCensus, window: tuple[float, float],
                         samples_per_decade: int = 40) -> ExponentEstimate:
    """Exponent of convergence of the zeros, via the slope of log n(r).

    lambda_fit is the least-squares slope of log n(r) against log r over
    log-spaced radii in the window.  lambda_series brackets the critical s
    of sum |x_k|^{-s} by comparing dyadic-shell partial sums (a divergence
    heuristic, reported as a sanity interval only).
    """
    rmin, rmax = float(window[0]), float(window[1])
    if not 0 < rmin < rmax:
        raise BanklaineError("window must satisfy 0 < r_min < r_max")
    in_window = [abs(x) for x in census.zeros if rmin <= abs(x) <= rmax]
    if len(in_window) < 20:
        raise InsufficientDataError(
            f"need >= 20 zeros in window, found {len(in_window)}"
        )
    ndec = math.log10(rmax / rmin)
    nsamp = max(8, int(round(samples_per_decade * ndec)))
    rs = np.geomspace(rmin, rmax, nsamp)
    ns = np.array([counting_function(census, r) for r in rs], dtype=float)
    keep = ns > 0
    logr = np.log(rs[keep])
    logn = np.log(ns[keep])
    A = np.vstack([logr, np.ones_like(logr)]).T
    (slope, intercept), res, *_ = np.linalg.lstsq(A, logn, rcond=None)
    fit = A @ np.array([slope, intercept])
    residual = float(np.sqrt(np.mean((fit - logn) ** 2)))

    lambda_series = _series_exponent(np.array(in_window))
    return ExponentEstimate(lambda_fit=float(slope), lambda_series=lambda_series,
                            window=(rmin, rmax), residual=residual)


def _series_exponent(moduli: np.ndarray) -> float:
    """Bisect s: dyadic shells of sum |x|^{-s} stop growing at s = lambda."""
    moduli = np.sort(moduli)
    lo_r, hi_r = moduli[0], moduli[-1]
    nshell = max(2, int(math.floor(math.log2(hi_r / lo_r))))
    edges = lo_r * 2.0 ** np.arange(nshell + 1)
    edges[-1] = hi_r * (1 + 1e-12)

    def diverges(s):
        sums = []
        for a, b in zip(edges[:-1], edges[1:]):
            m = moduli[(moduli >= a) & (moduli < b)]
            if len(m):
                sums.append(np.sum(m ** (-s)))
        if len(sums) < 2:
            return False
        return sums[-1] >= sums[0]

    lo, hi = 0.0, 12.0
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        if diverges(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_alternation_check(census: ZeroCensus):
    """True iff signs alternate; otherwise (False, first violating index)."""
    for i in range(1, len(census.signs)):
        if census.signs[i] == census.signs[i - 1]:
            return False, i
    return True, None


def estimate_order(f, radii, n_angles: int = 256) -> float:
    """Max-modulus order proxy: slope of log log max_{|z|=r}|f| vs log r."""
    radii = [float(r) for r in radii]
    if len(radii) < 5:
        raise BanklaineError("need at least 5 radii")
    theta = np.linspace(0, 2 * math.pi, n_angles, endpoint=False)
    ring = np.exp(1j * theta)
    logs = []
    used = []
    for r in radii:
        vals = np.asarray(f(r * ring), dtype=complex)
        m = float(np.max(np.abs(vals)))
        if not math.isfinite(m):
            log.warning("estimate_order: overflow at r=%g; truncating radii", r)
            break
        if m <= 1.0:
            continue
        logs.append(math.log(math.log(m)))
        used.append(math.log(r))
    if len(used) < 5:
        raise InsufficientDataError("fewer than 5 usable radii for order estimate")
    A = np.vstack([used, np.ones(len(used))]).T
    (slope, _), *_ = np.linalg.lstsq(A, np.array(logs), rcond=None)
    return float(slope)


def census_to_csv(census: ZeroCensus, evaluator, path):
    """Write `x,sign,abs_E,abs_Eprime_minus_sign` rows, 17 significant digits."""
    xs = np.array(census.zeros)
    if len(xs):
        e0, e1 = evaluator(xs)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,sign,abs_E,abs_Eprime_minus_sign\n")
        for i, x in enumerate(census.zeros):
            fh.write("%.17g,%d,%.17g,%.17g\n" % (
                x, census.signs[i], abs(e0[i]), abs(e1[i] - census.signs[i])))


def estimate_to_json(estimate: ExponentEstimate, path=None) -> str:
    obj = {
        "lambda_fit": estimate.lambda_fit,
        "lambda_series": estimate.lambda_series,
        "window": [estimate.window[0], estimate.window[1]],
        "residual": estimate.residual,
    }
    text = json.dumps(obj, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
