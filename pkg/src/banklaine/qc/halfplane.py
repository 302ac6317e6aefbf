"""Conformal chart of the strip union D1 = {-pi/2<s<0} u {-pi/2<s<pi/2, t>0}.

The map from the upper half-plane H onto D1 is elementary: with
w = sqrt((z-1)/(z-4)),

    c(z) = i * [ (1/2) log((2w-1)/(2w+1)) - log((w-1)/(w+1)) ] + pi/2,

branches chosen so that c is analytic on H and continuous up to R.  Prevertex
layout on the boundary of H:

    z in (-inf,0): left edge  s = -pi/2          (w in (1/2,1))
    z in (0,1):    lower edge s = 0, t <= 0      (w in (0,1/2))
    z in (1,4):    bottom segment [0, pi/2]      (w on -i(0,inf))
    z in (4,inf):  right edge s = pi/2, t >= 0   (w in (1,inf))

with corners c(1) = 0 (interior angle 3pi/2) and c(4) = pi/2 (angle pi/2),
and both half-strip ends meeting the boundary point z = 0.  c'(z) = i w / z.

The inverse is computed by a damped vectorized Newton iteration with
regime-dependent seeds; boundary points are inverted by bracketed 1-D solves
on the explicit edge parametrizations.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.optimize import brentq

from ..errors import BanklaineError, ConstructionError, MapDomainError

PI = math.pi

# asymptotic constants of the two strip ends:
#   top (t -> +inf):    z ~ (3 sqrt3 / 4) e^{-i(u - pi/2)}
#   bottom (t -> -inf): z ~ (16/27) e^{-2iu}
TOP_SCALE = 3.0 * math.sqrt(3.0) / 4.0
BOT_SCALE = 16.0 / 27.0


def _sqrt_lower(q):
    """Principal sqrt, with negative reals sent to the lower side (-i |.|^.5)."""
    q = np.asarray(q, dtype=complex)
    out = np.sqrt(q)
    fix = (q.imag == 0) & (q.real < 0)
    low = -1j * np.sqrt(np.abs(np.where(fix, q.real, 1.0)))
    return np.where(fix, low, out)


def _log_lower(x):
    """Principal log, with negative reals assigned argument -pi."""
    x = np.asarray(x, dtype=complex)
    out = np.log(x)
    fix = (x.imag == 0) & (x.real < 0)
    low = np.log(np.abs(np.where(fix, x.real, 1.0))) - 1j * PI
    return np.where(fix, low, out)


def _log1p_c(x):
    """log(1+x) for complex arrays, series-corrected for small |x|."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    out = np.log(1 + np.where(small, 0.0, x))
    ser = x * (1 - x * (0.5 - x * (1 / 3 - x * 0.25)))
    return np.where(small, ser, out)


def strip_w(z):
    """w(z) = sqrt((z-1)/(z-4)) with the branch taking H into the fourth
    quadrant; boundary reals continued from inside H."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        q = (z - 1) / (z - 4)
        # interior points of H give Im q < 0 and the principal sqrt lands in
        # Q4; reals in (1,4) give q < 0 and need the lower branch
        return _sqrt_lower(q)


def strip_map(z):
    """The conformal map H -> D1 described in the module docstring."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    with np.errstate(all="ignore"):
        w = strip_w(z)
        # cancellation-free forms of w-1 (for |z| large) and 2w-1 (for z
        # near 0), both exact identities
        d = 3.0 / ((z - 4) * (w + 1))
        e = 3.0 * z / ((z - 4) * (2 * w + 1))
        big = np.abs(w) > 1e3
        dsafe = np.where(big, 1.0, d)
        esafe = np.where(big, 1.0, e)
        wsafe = np.where(big, 2.0, w)
        l1 = np.where(big, _log1p_c(-2 / (2 * w + 1)),
                      _log_lower(esafe / (2 * wsafe + 1)))
        l2 = np.where(big, _log1p_c(-2 / (w + 1)),
                      _log_lower(dsafe / (wsafe + 1)))
        u = 1j * (0.5 * l1 - l2) + PI / 2
    u = np.where(z == 4, PI / 2 + 0j, u)
    u = np.where(z == 1, 0j, u)
    return complex(u[0]) if scalar else u


def strip_map_deriv(z):
    """c'(z) = i w(z) / z."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        return 1j * strip_w(z) / z


def _corner0_seed(u):
    """Seed near the 3pi/2 corner at u=0: z = 1 + ((3 sqrt3/2) u)^(2/3)."""
    u = np.asarray(u, dtype=complex)
    ang = np.angle(u)
    ang = np.where(ang < -1e-12, ang + 2 * PI, ang)  # measure in [0, 3pi/2]
    mod = (1.5 * math.sqrt(3.0) * np.abs(u)) ** (2.0 / 3.0)
    return 1 + mod * np.exp(1j * (2.0 / 3.0) * ang)


def _corner4_seed(u):
    """Seed near the pi/2 corner at u=pi/2: z = 4 - (4/3)(u - pi/2)^2."""
    u = np.asarray(u, dtype=complex)
    return 4 - (4.0 / 3.0) * (u - PI / 2) ** 2


def _top_seed(u):
    return TOP_SCALE * np.exp(-1j * (u - PI / 2))


def _bottom_seed(u):
    return BOT_SCALE * np.exp(-2j * u)


_CENTRAL_SEEDS = (1.8 + 1.2j, 0.6 + 0.6j, 3.2 + 2.0j, 1.0 + 3.0j,
                  2.4 + 0.35j, 0.15 + 0.3j, 0.05 + 0.1j)


def _power_frac(q, p):
    """q**p for ratios q near 1; principal branch is fine there."""
    return np.exp(p * np.log(q))


def invert_strip_map(u, tol: float = 1e-13, max_iter: int = 60):
    """Inverse of strip_map for interior points of D1 (vectorized Newton).

    Points must lie in the open D1; boundary values should go through the
    edge inverters, which are 1-D and bracketed.
    """
    u_in = np.asarray(u, dtype=complex)
    scalar = u_in.ndim == 0
    shape = u_in.shape
    u = np.atleast_1d(u_in).ravel()
    t = u.imag
    z = np.empty_like(u)

    near0 = np.abs(u) < 0.45
    near4 = (np.abs(u - PI / 2) < 0.45) & ~near0
    top = (t >= 1.5) & ~near0 & ~near4
    bot = (t <= -1.5) & ~near0 & ~near4
    mid = ~(near0 | near4 | top | bot)
    z[near0] = _corner0_seed(u[near0])
    z[near4] = _corner4_seed(u[near4])
    z[top] = _top_seed(u[top])
    z[bot] = _bottom_seed(u[bot])
    z[mid] = _CENTRAL_SEEDS[0]
    # multiplicative corrections exploiting the local power structure at the
    # corners, where Newton is ill-conditioned (c' -> 0 or infinity)
    for _ in range(4):
        if near0.any():
            u1 = strip_map(z[near0])
            ratio = _power_frac(u[near0] / u1, 2.0 / 3.0)
            z[near0] = 1 + (z[near0] - 1) * ratio
        if near4.any():
            u1 = strip_map(z[near4])
            z[near4] = 4 + (z[near4] - 4) * ((u[near4] - PI / 2) / (u1 - PI / 2)) ** 2
    z = np.where(z.imag <= 0, z.real + 1e-6j, z)
    # near the pi/2 corner the preimage sits at z ~ 4 where the double grid
    # cannot represent the inverse to full relative accuracy: |c'| grows like
    # 1/|u - pi/2| while ulp(4) is fixed, so the residual floor is ~1e-15
    # divided by the corner distance
    corner_floor = 1e-15 / np.maximum(np.abs(u - PI / 2), 1e-10)
    target_tol = np.maximum(tol * (1 + np.abs(u)), corner_floor)

    def newton(z, mask):
        z = z.copy()
        for _ in range(max_iter):
            idx = np.flatnonzero(mask)
            if len(idx) == 0:
                break
            res = strip_map(z[idx]) - u[idx]
            conv = np.abs(res) <= target_tol[idx]
            if conv.any():
                mask = mask.copy()
                mask[idx[conv]] = False
                idx = idx[~conv]
                res = res[~conv]
                if len(idx) == 0:
                    continue
            with np.errstate(all="ignore"):
                dz = res / strip_map_deriv(z[idx])
            # trust region: never jump further than a fraction of |z|
            cap = 0.25 * (np.abs(z[idx]) + 0.5)
            over = np.abs(dz) > cap
            dz = np.where(over, dz * cap / np.abs(dz), dz)
            step = np.ones(len(dz))
            znew = z[idx] - step * dz
            for _ in range(50):
                bad = znew.imag <= 0
                if not bad.any():
                    break
                step = np.where(bad, 0.5 * step, step)
                znew = z[idx] - step * dz
            z[idx] = znew
        # final residual check for anything still flagged
        idx = np.flatnonzero(mask)
        if len(idx):
            res = strip_map(z[idx]) - u[idx]
            mask = mask.copy()
            mask[idx[np.abs(res) <= target_tol[idx]]] = False
        return z, mask

    active = np.ones(len(u), dtype=bool)
    z, active = newton(z, active)
    for seed in _CENTRAL_SEEDS[1:]:
        if not active.any():
            break
        z[active] = seed
        z, active = newton(z, active)
    if active.any():
        for i in np.flatnonzero(active):
            z[i] = _invert_by_continuation(u[i], tol)
    out = z.reshape(shape) if not scalar else None
    return complex(z[0]) if scalar else out


def _invert_by_continuation(u_target, tol, steps: int = 80):
    """March the inverse along an in-domain polyline from a known anchor.

    The route anchor -> (-1/4 + i t_target) -> u_target stays inside D1 for
    every target in Cl(D1).
    """
    u_target = complex(u_target)
    anchor = -0.25 + 0.5j
    waypoint = complex(-0.25, u_target.imag)
    z = 0.7010387142648933 + 1.5283114484926306j  # inverse of the anchor
    for a, b in ((anchor, waypoint), (waypoint, u_target)):
        n = max(2, int(steps * min(1.0, abs(b - a) / 10) + 2))
        for k in range(1, n + 1):
            u_k = a + (b - a) * k / n
            tol_k = max(tol * (1 + abs(u_k)),
                        1e-15 / max(abs(u_k - PI / 2), 1e-10))
            for _ in range(80):
                res = complex(strip_map(z)) - u_k
                if abs(res) <= tol_k:
                    break
                dz = res / complex(strip_map_deriv(np.array([z]))[0])
                cap = 0.25 * (abs(z) + 0.5)
                if abs(dz) > cap:
                    dz *= cap / abs(dz)
                step = 1.0
                znew = z - dz
                while znew.imag <= 0 and step > 1e-9:
                    step *= 0.5
                    znew = z - step * dz
                z = znew
            else:
                raise ConstructionError(f"continuation stalled near u={u_k!r}")
    return z


# ---------------------------------------------------------------------------
# boundary edge parametrizations and their inverses
#
# On each boundary edge, t (or s) is an explicit monotone function of real z;
# the BA coordinate is xp = -1/z.

def _edge_t_from_z_left(z):
    """t on the left edge s=-pi/2 as a function of z in (-inf, 0)."""
    z = np.asarray(z, dtype=float)
    w = np.sqrt((z - 1) / (z - 4))  # in (1/2, 1)
    r1 = 3 * z / ((z - 4) * (2 * w + 1) ** 2)   # (2w-1)/(2w+1), stable
    r2 = 3 / ((4 - z) * (1 + w) ** 2)           # (1-w)/(1+w), stable
    return 0.5 * np.log(r1) - np.log(r2)


def _edge_t_from_z_lower(z):
    """t on the edge s=0, t<=0 as a function of z in (0, 1)."""
    z = np.asarray(z, dtype=float)
    w = np.sqrt((1 - z) / (4 - z))  # in (0, 1/2)
    r1 = 3 * z / ((4 - z) * (1 + 2 * w) ** 2)   # (1-2w)/(1+2w), stable
    r2 = 3 / ((4 - z) * (1 + w) ** 2)           # (1-w)/(1+w), stable
    return 0.5 * np.log(r1) - np.log(r2)


def _edge_t_from_z_right(z):
    """t on the right edge s=pi/2, t>=0 as a function of z in (4, inf)."""
    z = np.asarray(z, dtype=float)
    iw = np.sqrt((z - 4) / (z - 1))  # 1/w in [0, 1)
    r1 = (2 - iw) / (2 + iw)
    r2 = 3 / ((z - 1) * (1 + iw) ** 2)  # (1-iw)/(1+iw), stable for z large
    return 0.5 * np.log(r1) - np.log(r2)


def _bracket_solve(func, target, q_guess, spread: float = 6.0,
                   qmin: float = -math.inf, qmax: float = math.inf):
    lo = max(q_guess - spread, qmin)
    hi = min(q_guess + spread, qmax)
    flo, fhi = func(lo) - target, func(hi) - target
    grow = 0
    while flo * fhi > 0 and grow < 80:
        lo = max(lo - spread, qmin)
        hi = min(hi + spread, qmax)
        flo, fhi = func(lo) - target, func(hi) - target
        grow += 1
        if lo == qmin and hi == qmax and flo * fhi > 0:
            break
    if flo * fhi > 0:
        raise ConstructionError("edge inversion failed to bracket")
    return brentq(lambda q: func(q) - target, lo, hi, xtol=1e-15, rtol=8.9e-16)


def edge_z_left(t: float) -> float:
    """z in (-inf, 0) with strip_map(z) = -pi/2 + i t."""
    guess = math.log(TOP_SCALE) + t if t > 0 else math.log(BOT_SCALE) + 2 * t
    q = _bracket_solve(lambda q: float(_edge_t_from_z_left(-math.exp(q))), t, guess)
    return -math.exp(q)


def edge_z_lower(t: float) -> float:
    """z in (0, 1) with strip_map(z) = i t, t <= 0."""
    if t > 1e-12:
        raise MapDomainError("lower edge has t <= 0")
    if t >= 0.0:
        return 1.0
    guess = math.log(BOT_SCALE) + 2 * t
    q = _bracket_solve(lambda q: float(_edge_t_from_z_lower(math.exp(q))), t,
                       guess, qmax=-1e-16)
    return math.exp(q)


def edge_z_right(t: float) -> float:
    """z in (4, inf) with strip_map(z) = pi/2 + i t, t >= 0."""
    if t < -1e-12:
        raise MapDomainError("right edge has t >= 0")
    if t == 0.0:
        return 4.0
    t = max(t, 1e-300)
    # corner expansion t ~ (sqrt3/2) sqrt(z-4) for small t, strip end otherwise
    guess = math.log(4.0 * t * t / 3.0) if t < 2 else t + math.log(TOP_SCALE)
    q = _bracket_solve(lambda q: float(_edge_t_from_z_right(4 + math.exp(q))), t, guess)
    return 4 + math.exp(q)


def edge_z_bottom(s: float) -> float:
    """z in (1, 4) with strip_map(z) = s, 0 <= s <= pi/2."""
    if not -1e-12 <= s <= PI / 2 + 1e-12:
        raise MapDomainError("bottom segment has 0 <= s <= pi/2")
    s = min(max(s, 0.0), PI / 2)
    if s == 0.0:
        return 1.0
    if s == PI / 2:
        return 4.0
    f = lambda z: float(np.real(strip_map(complex(z))))
    return brentq(lambda z: f(z) - s, 1 + 1e-13, 4 - 1e-13, xtol=1e-14)


def boundary_xp(u) -> float:
    """BA line coordinate xp = -1/z for a boundary point u of D1."""
    u = complex(u)
    s, t = u.real, u.imag
    if abs(s + PI / 2) < 1e-12:
        return -1.0 / edge_z_left(t)
    if abs(s - PI / 2) < 1e-12 and t >= -1e-12:
        return -1.0 / edge_z_right(max(t, 0.0))
    if abs(s) < 1e-12 and t <= 1e-12:
        return -1.0 / edge_z_lower(min(t, 0.0))
    if abs(t) < 1e-12 and -1e-12 <= s <= PI / 2 + 1e-12:
        return -1.0 / edge_z_bottom(s)
    raise MapDomainError(f"{u!r} is not on the boundary of D1")
