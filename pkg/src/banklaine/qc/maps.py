"""Building blocks of the surgery: the Moebius map T, the locally
univalent factors f1, f2 on the sector, the boundary function h, the
angular shear L, and the level curve gamma2.

Conventions.  u = s + it lives in the closed sector E0 = {0 <= arg u <=
3pi/2}; v = e^{iu}.  T sends the unit circle to the extended real line with
T(e^{i pi/4}) = infinity and T(e^{i 3pi/4}) = 0, so f2 = T(e^{iu}) has poles
at (2k+1/4)pi and zeros at (2k+3/4)pi on the real axis.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import BanklaineError, ConstructionError, MapDomainError

PI = math.pi
SQRT2 = math.sqrt(2.0)
EIP4 = cmath.exp(1j * PI / 4)    # e^{i pi/4}
EIM4 = cmath.exp(-1j * PI / 4)   # e^{-i pi/4}
EI34 = cmath.exp(3j * PI / 4)    # e^{i 3pi/4}

X0 = (0.75 * PI) ** (2.0 / 3.0)  # pullback offset; X0^(3/2) = 3pi/4


def moebius_T(v):
    """T(v) = e^{i pi/4} (1 + e^{i pi/4} v) / (1 - e^{-i pi/4} v).

    Sends |v|=1 to R u {inf}, the unit disk to the upper half-plane, with
    T(i) = -1, T(0) = e^{i pi/4}, T(e^{i 3pi/4}) = 0.  The pole v = e^{i pi/4}
    returns complex infinity.
    """
    v = np.asarray(v, dtype=complex)
    num = EIP4 * (1 + EIP4 * v)
    den = 1 - EIM4 * v
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0, complex(math.inf, 0), num / den)
    return out if out.ndim else complex(out)


def moebius_T_recip(v):
    """1/T(v), stable near the pole of T."""
    v = np.asarray(v, dtype=complex)
    num = 1 - EIM4 * v
    den = EIP4 * (1 + EIP4 * v)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0, complex(math.inf, 0), num / den)
    return out if out.ndim else complex(out)


def moebius_T_prime(v):
    """T'(v) = sqrt(2) e^{i pi/4} / (1 - e^{-i pi/4} v)^2."""
    v = np.asarray(v, dtype=complex)
    out = SQRT2 * EIP4 / (1 - EIM4 * v) ** 2
    return out if out.ndim else complex(out)


def f1_map(u):
    """f1(u) = e^{i pi/4} exp(sqrt(2) e^{iu}); zero-free and entire."""
    u = np.asarray(u, dtype=complex)
    out = EIP4 * np.exp(SQRT2 * np.exp(1j * u))
    return out if out.ndim else complex(out)


def log_f1(u):
    """The branch i pi/4 + sqrt2 e^{iu} of log f1."""
    u = np.asarray(u, dtype=complex)
    out = 1j * PI / 4 + SQRT2 * np.exp(1j * u)
    return out if out.ndim else complex(out)


def f2_map(u):
    """f2(u) = T(e^{iu}); poles at (2k+1/4)pi, zeros at (2k+3/4)pi."""
    u = np.asarray(u, dtype=complex)
    out = moebius_T(np.exp(1j * u))
    return out


def f2_recip(u):
    """1/f2, finite at poles of f2."""
    u = np.asarray(u, dtype=complex)
    return moebius_T_recip(np.exp(1j * u))


def f2_prime(u):
    """f2'(u) = T'(e^{iu}) * i e^{iu}."""
    u = np.asarray(u, dtype=complex)
    v = np.exp(1j * u)
    return moebius_T_prime(v) * 1j * v


def h_boundary(y):
    """Boundary correspondence h: (-inf, 1] -> (-inf, pi].

    h(y) = pi/4 + sqrt(2) y for y <= 0 and h(y) = arg T(iy) for 0 < y <= 1;
    continuous, strictly increasing, with h(1) = pi and both one-sided
    derivatives at 0 equal to sqrt(2).
    """
    y = np.asarray(y, dtype=float)
    if np.any(y > 1 + 1e-15):
        raise MapDomainError("h is defined on (-inf, 1]")
    y = np.minimum(y, 1.0)
    lin = PI / 4 + SQRT2 * y
    with np.errstate(invalid="ignore"):
        num = 1 + EIP4 * 1j * y
        den = 1 - EIM4 * 1j * y
        arc = PI / 4 + np.angle(num / den)
    out = np.where(y <= 0, lin, arc)
    return out if out.ndim else float(out)


_G_NODES = np.array([0.0, PI / 3, PI, 2 * PI])
_G_VALUES = np.array([0.0, PI / 3, PI / 2, 2 * PI])


def shear_g(theta):
    """Piecewise-linear angle map: identity on [0, pi/3], g(pi) = pi/2,
    g(2pi) = 2pi; slopes 1, 1/4, 3/2 on the three pieces."""
    theta = np.asarray(theta, dtype=float)
    out = np.interp(np.mod(theta, 2 * PI), _G_NODES, _G_VALUES)
    return out if out.ndim else float(out)


def angular_L(w):
    """L(r e^{i theta}) = r e^{i g(theta)}; fixes 0 and infinity, identity on
    directions theta <= pi/3."""
    w = np.asarray(w, dtype=complex)
    r = np.abs(w)
    theta = np.mod(np.angle(w), 2 * PI)
    out = r * np.exp(1j * shear_g(theta))
    out = np.where(np.isfinite(r), out, w)  # L(inf) = inf
    out = np.where(r == 0, 0j, out)
    return out if out.ndim else complex(out)


def shear_dilatation(theta):
    """|mu| of L at direction theta: (1-k)/(1+k) in modulus for slope k."""
    k = np.where(np.mod(theta, 2 * PI) <= PI / 3, 1.0,
                 np.where(np.mod(theta, 2 * PI) <= PI, 0.25, 1.5))
    return np.abs((1 - k) / (1 + k))


def gamma2_point(rho):
    """Closed-form parametrization of gamma2: the preimage under f2 of the
    radial segment [0, e^{i pi/4}).

    v(rho) = e^{i 3pi/4} (1 - rho)/(1 - i rho) gives f2 = rho e^{i pi/4};
    lifting by u = -i log v into the half-strip pi/2 < s < 3pi/2 yields

        u(rho) = 3pi/4 + atan(rho) + i log(sqrt(1+rho^2)/(1-rho)),

    which starts at 3pi/4 and tends to infinity with Re u -> pi.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any((rho < 0) | (rho >= 1)):
        raise MapDomainError("gamma2 parameter must lie in [0, 1)")
    s = 0.75 * PI + np.arctan(rho)
    t = np.log(np.sqrt(1 + rho ** 2) / (1 - rho))
    out = s + 1j * t
    return out if out.ndim else complex(out)


def gamma2_s_at(t):
    """Re u on gamma2 as a function of height t >= 0 (monotone graph)."""
    t = np.asarray(t, dtype=float)
    # invert t(rho) = log(sqrt(1+rho^2)/(1-rho)) by bisection; vectorized
    lo = np.zeros_like(t)
    hi = np.full_like(t, 1 - 1e-16)
    target = np.asarray(t, dtype=float)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        val = np.log(np.sqrt(1 + mid ** 2) / (1 - mid))
        takes = val < target
        lo = np.where(takes, mid, lo)
        hi = np.where(takes, hi, mid)
    rho = 0.5 * (lo + hi)
    out = 0.75 * PI + np.arctan(rho)
    return out if out.ndim else float(out)


def trace_gamma2(n_points: int = 400, tau_max: float = 0.999) -> np.ndarray:
    """Numerically continue gamma2 by solving du/dtau = e^{i pi/4} / f2'(u),
    u(0) = 3pi/4, so that f2(u(tau)) = tau e^{i pi/4}.

    Returns the polyline of u-values at tau in [0, tau_max].  Raises if the
    continuation leaves the half-strip pi/2 < Re u < 3pi/2, Im u >= 0 (which
    would indicate a bug, not a data case).
    """
    def rhs(tau, y):
        u = complex(y[0], y[1])
        du = EIP4 / f2_prime(u)
        return [du.real, du.imag]

    taus = np.linspace(0.0, tau_max, n_points)
    sol = solve_ivp(rhs, (0.0, tau_max), [0.75 * PI, 0.0], t_eval=taus,
                    rtol=1e-11, atol=1e-12, method="DOP853")
    if not sol.success:
        raise ConstructionError(f"gamma2 continuation failed: {sol.message}")
    us = sol.y[0] + 1j * sol.y[1]
    s, t = us.real, us.imag
    if np.any((s <= PI / 2) | (s >= 1.5 * PI) | (t < -1e-12)):
        raise ConstructionError("gamma2 left the half-strip")
    return us


class RegionTag(Enum):
    """Classification of a point of the closed sector for map dispatch."""

    OUTSIDE_E0 = "outside_E0"
    F1_REGION = "f1"                 # Re u <= -pi/2 part of E0
    F2_REGION = "f2"                 # Re u >= pi/2, Im u >= 0
    D1_INTERPOLATION = "d1"          # strip union bridged by the interpolant
    E3_MEMBER = "e3"                 # sheared region outside D1
    GAMMA1 = "gamma1"                # on the line Re u = -pi
    GAMMA2 = "gamma2"                # on the traced level curve
    L0_PATH = "l0"                   # on [0, 3pi/4] or the negative imaginary axis


def in_E0(u, tol: float = 1e-12) -> bool:
    u = complex(u)
    s, t = u.real, u.imag
    if t >= 0:
        return True  # closed upper half-plane: arg in [0, pi]
    return s <= tol * abs(u)  # below the axis only the third quadrant qualifies


def in_E3(u, tol: float = 0.0) -> bool:
    """Membership in E3: the component of E0 minus (gamma1 u gamma2)
    containing the strip union D1."""
    u = complex(u)
    s, t = u.real, u.imag
    if s <= -PI:
        return False
    if t > 0:
        return s < gamma2_s_at(t) - tol
    if t == 0 and s >= 0:
        return s < 0.75 * PI - tol
    return True  # third-quadrant strip -pi < s <= 0, t < 0


def in_D1(u, closed: bool = True) -> bool:
    u = complex(u)
    s, t = u.real, u.imag
    if closed:
        return (-PI / 2 <= s <= 0) or (-PI / 2 <= s <= PI / 2 and t >= 0)
    return (-PI / 2 < s < 0) or (-PI / 2 < s < PI / 2 and t > 0)


def classify_region(u, tol: float = 1e-9) -> RegionTag:
    """Partition E0 for dispatch; boundary curves win within `tol`."""
    u = complex(u)
    if not in_E0(u, tol):
        return RegionTag.OUTSIDE_E0
    s, t = u.real, u.imag
    if abs(s + PI) <= tol:
        return RegionTag.GAMMA1
    if (t >= 0 and PI / 2 < s < 1.5 * PI
            and abs(s - gamma2_s_at(max(t, 0.0))) <= tol):
        return RegionTag.GAMMA2
    if (t == 0 and 0 <= s <= 0.75 * PI) or (s == 0 and t < 0):
        return RegionTag.L0_PATH
    if in_D1(u, closed=False):
        return RegionTag.D1_INTERPOLATION
    if s <= -PI / 2:
        return RegionTag.F1_REGION
    if s >= PI / 2 and t >= 0 and not in_E3(u):
        return RegionTag.F2_REGION
    return RegionTag.E3_MEMBER
