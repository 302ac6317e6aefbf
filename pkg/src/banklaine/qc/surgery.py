"""Glued map F on the sector, sheared map V, and the plane extension Y.

F equals f1 on {Re u <= -pi/2}, f2 on {Re u >= pi/2, Im u >= 0} and is
bridged across the strip union by exp of the interpolant H.  V applies the
angular shear L on the component E3 between gamma1 and gamma2; since F maps
those curves into the ray where L is the identity, V is continuous.  The
pullback Y(z) = V((x0 + z^2)^(3/2)) on the first quadrant extends to the
plane by reflection in both axes; Y is real on R, maps the imaginary axis
into itself, and its zeros and poles are all real with closed-form
abscissae giving a cubic counting law.

Dilatation bookkeeping.  |mu_Y(z)| = |mu_V(eta(z))| because eta is
conformal, so sampling happens in the u-chart where feature scales are O(1).
Pointwise values exist while exp(H) has a numerically well-defined argument
(|Im H| below ~1e12, i.e. Im u > -28 or so); deeper in the lower strip end
the argument of the image equidistributes mod 2pi on any resolvable cell and
the meaningful cell value is the occupancy-weighted average over the three
slope zones of the shear.  The averaged field is cross-validated against
pointwise sampling in the overlap band by the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import MapDomainError, UnreliableSampleError
from .interpolant import hmap
from .maps import (
    PI,
    SQRT2,
    X0,
    RegionTag,
    angular_L,
    classify_region,
    f2_map,
    f2_prime,
    f2_recip,
    in_E0,
    in_E3,
    log_f1,
    trace_gamma2,
)
from ..census import ZeroCensus

# shear slope data: mu of the log-chart affine pieces (1-k)/(1+k)
_G_BREAKS = (PI / 3, PI)          # slope changes of g
_MU_PIECES = (0.0, 3.0 / 5.0, -1.0 / 5.0)   # theta in [0,pi/3], (pi/3,pi], (pi,2pi)
_OCCUPANCY = (1.0 / 6.0, 1.0 / 3.0, 1.0 / 2.0)

# regime thresholds in t = Im u for dilatation evaluation
T_POINTWISE = -28.0   # below this, image phase is not resolvable pointwise
T_BAND = -140.0       # below this, use the closed-form limit transport
T_TOP = 20.0          # above this, H is within ~e^{-20} of its limit i pi/4
#                       and finite differences saturate; the limit field
#                       |mu| = 1/3 on the strip applies to O(e^{-t/2})


def _mu_shear_at(theta):
    """Signed log-chart dilatation of L at image direction theta (mod 2pi)."""
    th = np.mod(theta, 2 * PI)
    return np.where(th <= _G_BREAKS[0], _MU_PIECES[0],
                    np.where(th <= _G_BREAKS[1], _MU_PIECES[1], _MU_PIECES[2]))


def glued_F(u):
    """The glued map on the closed sector E0; poles return complex inf.

    Values overflow for deep strip points (|F| grows doubly exponentially);
    use log_abs_F for growth work.
    """
    u = np.asarray(u, dtype=complex)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    _require_E0(u)
    s, t = u.real, u.imag
    out = np.empty(u.shape, dtype=complex)
    m_f1 = s <= -PI / 2
    m_f2 = (s >= PI / 2) & (t >= 0) & ~m_f1
    m_d1 = ~(m_f1 | m_f2)
    if m_f1.any():
        out[m_f1] = np.exp(log_f1(u[m_f1]))
    if m_f2.any():
        out[m_f2] = f2_map(u[m_f2])
    if m_d1.any():
        with np.errstate(all="ignore"):
            out[m_d1] = np.exp(hmap(u[m_d1]))
    return complex(out[0]) if scalar else out


def log_abs_F(u):
    """log |F(u)|, finite wherever F is finite and nonzero; +inf at poles."""
    u = np.asarray(u, dtype=complex)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    _require_E0(u)
    s, t = u.real, u.imag
    out = np.empty(u.shape, dtype=float)
    m_f1 = s <= -PI / 2
    m_f2 = (s >= PI / 2) & (t >= 0) & ~m_f1
    m_d1 = ~(m_f1 | m_f2)
    if m_f1.any():
        out[m_f1] = SQRT2 * np.exp(-t[m_f1]) * np.cos(s[m_f1])
    if m_f2.any():
        v = np.exp(1j * u[m_f2])
        with np.errstate(all="ignore"):
            out[m_f2] = (np.log(np.abs(v - np.exp(3j * PI / 4)))
                         - np.log(np.abs(v - np.exp(1j * PI / 4))))
    if m_d1.any():
        out[m_d1] = hmap(u[m_d1]).real
    return float(out[0]) if scalar else out


def _require_E0(u):
    s, t = u.real, u.imag
    ok = (t >= 0) | (s <= 1e-12 * np.abs(u))
    if not np.all(ok):
        raise MapDomainError(f"{u[~ok].ravel()[0]!r} is outside the closed sector")


def modified_V(u):
    """V = L o F on E3, F elsewhere; continuous on the sector."""
    u = np.asarray(u, dtype=complex)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    f = glued_F(u)
    e3 = _in_E3_vec(u)
    out = np.where(e3, angular_L(f), f)
    return complex(out[0]) if scalar else out


def log_abs_V(u):
    """log |V| = log |F|: the shear preserves modulus."""
    return log_abs_F(u)


def _in_E3_vec(u):
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    return np.array([in_E3(complex(x)) for x in u.ravel()]).reshape(u.shape)


# ---------------------------------------------------------------------------
# dilatation machinery


def dilatation_mu(map_eval, z, step):
    """Beltrami coefficient of `map_eval` at z by central Wirtinger
    differences with one Richardson level (steps h and h/2)."""
    z = complex(z)
    h = float(step)

    def wirtinger(hh):
        fe = map_eval(z + hh)
        fw = map_eval(z - hh)
        fn = map_eval(z + 1j * hh)
        fs = map_eval(z - 1j * hh)
        vals = [fe, fw, fn, fs]
        if not all(np.isfinite([v.real for v in vals] + [v.imag for v in vals])):
            raise UnreliableSampleError(f"nonfinite sample near z={z!r}")
        fz = (fe - fw - 1j * (fn - fs)) / (4 * hh)
        fzb = (fe - fw + 1j * (fn - fs)) / (4 * hh)
        return fz, fzb

    fz1, fzb1 = wirtinger(h)
    fz2, fzb2 = wirtinger(h / 2)
    fz = (4 * fz2 - fz1) / 3
    fzb = (4 * fzb2 - fzb1) / 3
    if abs(fz) < 1e-10:
        raise UnreliableSampleError(
            f"holomorphic derivative ~ 0 at z={z!r}; sample unreliable"
        )
    return fzb / fz


def _sanitize_strip_points(u, h):
    """Nudge strip points so a +-2h stencil stays inside the strip union.

    Shifts are at most 4h and only matter for samples sitting exactly on the
    inner boundary; the dilatation field is continuous there.
    """
    s, t = u.real.copy(), u.imag.copy()
    pad = 4 * h
    s = np.clip(s, -PI / 2 + pad, PI / 2 - pad)
    upper = s > pad
    t = np.where(upper, np.maximum(t, pad), t)
    inner = ~upper & (t < pad) & (s > -pad)
    s = np.where(inner, -pad, s)
    return s + 1j * t


def _hmap_wirtinger(u, h):
    """(H, H_z, H_zbar) at points u by Richardson central differences."""
    u = np.atleast_1d(np.asarray(u, dtype=complex))

    def one(hh):
        he = hmap(u + hh)
        hw = hmap(u - hh)
        hn = hmap(u + 1j * hh)
        hs = hmap(u - 1j * hh)
        hz = (he - hw - 1j * (hn - hs)) / (4 * hh)
        hzb = (he - hw + 1j * (hn - hs)) / (4 * hh)
        return hz, hzb

    hz1, hzb1 = one(h)
    hz2, hzb2 = one(h / 2)
    return hmap(u), (4 * hz2 - hz1) / 3, (4 * hzb2 - hzb1) / 3


def _compose_with_shear(mu_w, lam, mu_piece):
    """mu of L o W from mu_W, the transport phase lam = e^{-2i arg W_z}, and
    the signed shear dilatation at the image direction."""
    a = mu_piece * lam
    return (mu_w + a) / (1 + np.conj(mu_w) * a)


def mu_V_pointwise(u, h: float = 1e-5):
    """|mu_V| (and the complex value in the u-chart) where pointwise values
    are numerically meaningful (Im u > T_POINTWISE).

    In the interpolation strip, mu comes from finite differences of H plus
    the exact shear composition; off the strip the map is f1/f2 composed
    (or not) with the shear, and mu is exact.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    s, t = u.real, u.imag
    if np.any(t < T_POINTWISE):
        raise UnreliableSampleError("image phase unresolvable this deep; use the averaged field")
    out = np.zeros(u.shape, dtype=complex)
    e3 = _in_E3_vec(u)
    strip = np.abs(s) < PI / 2  # interpolation region (strip union)

    if strip.any():
        us = _sanitize_strip_points(u[strip], h)
        h0, hz, hzb = _hmap_wirtinger(us, h)
        with np.errstate(all="ignore"):
            mu_w = hzb / hz
            # the Im H parts of arg(W) and arg(W_z) cancel in mu_L(W) theta_W,
            # leaving e^{-2i arg H_z}; Im H mod 2pi only selects the slope zone
            lam = np.exp(-2j * np.angle(hz))
            piece = _mu_shear_at(np.mod(h0.imag, 2 * PI))
            res = np.where(e3[strip], _compose_with_shear(mu_w, lam, piece), mu_w)
        out[strip] = res

    off = ~strip
    if off.any():
        uo = u[off]
        so, to = uo.real, uo.imag
        left = so <= -PI / 2
        # closed-form image arguments avoid overflow in exp(log f1)
        with np.errstate(all="ignore"):
            argF = np.where(left,
                            PI / 4 + SQRT2 * np.exp(-to) * np.sin(so),
                            np.angle(f2_map(uo)))
            # arg f1' = arg f1 + pi/2 + s; f2' is bounded away from poles
            argFp = np.where(left, argF + PI / 2 + so, np.angle(f2_prime(uo)))
        piece = np.where(e3[off], _mu_shear_at(argF), 0.0)
        out[off] = piece * np.exp(2j * (argF - argFp))
    return out


def mu_V_averaged(u, h: float = 1e-5):
    """Cell-averaged |mu_V| in the deep lower strip end (Im u < T_POINTWISE).

    The image argument sweeps mod 2pi much faster than any resolvable cell,
    so the shear's slope zone behaves as a three-valued variable with
    occupancies (1/6, 1/3, 1/2); the average of the composed |mu| over those
    zones is the effective integrand.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    s, t = u.real, u.imag
    out = np.zeros(u.shape, dtype=float)

    e1 = (s > -PI / 2) & (s < 0)
    band = e1 & (t > T_BAND)
    deep = e1 & ~band
    if band.any():
        _, hz, hzb = _hmap_wirtinger(_sanitize_strip_points(u[band], h), h)
        with np.errstate(all="ignore"):
            mu_w = hzb / hz
            lam = np.exp(-2j * np.angle(hz))
        out[band] = _occupancy_average(mu_w, lam)
    if deep.any():
        # limit transport: z' ~ -(1/BOT) e^{2iu} gives mu_W -> -(1/3)e^{-4is}
        # and arg H_z -> pi/2 + s, hence lam -> -e^{-2is}
        sd = s[deep]
        mu_w = -(1.0 / 3.0) * np.exp(-4j * sd)
        lam = -np.exp(-2j * sd)
        out[deep] = _occupancy_average(mu_w, lam)

    shear_f1 = (s > -PI) & (s <= -PI / 2)
    # L o f1 with equidistributed image argument
    out[shear_f1] = sum(p * abs(m) for p, m in zip(_OCCUPANCY, _MU_PIECES))
    return out


def _occupancy_average(mu_w, lam):
    acc = np.zeros(np.shape(mu_w), dtype=float)
    for p, piece in zip(_OCCUPANCY, _MU_PIECES):
        acc += p * np.abs(_compose_with_shear(mu_w, lam, piece))
    return acc


def mu_V_top_limit(u):
    """|mu_V| in the deep top end: 1/3 on the strip, 0 off it."""
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    return np.where(np.abs(u.real) < PI / 2, 1.0 / 3.0, 0.0)


def mu_V_field(u, h: float = 1e-5):
    """|mu_V| on sector points, dispatching by regime.

    Pointwise where resolvable, occupancy-averaged in the deep lower end,
    limit value in the deep top end.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    t = u.imag
    out = np.empty(u.shape, dtype=float)
    point = (t >= T_POINTWISE) & (t <= T_TOP)
    low = t < T_POINTWISE
    top = t > T_TOP
    if point.any():
        out[point] = np.abs(mu_V_pointwise(u[point], h))
    if low.any():
        out[low] = mu_V_averaged(u[low], h)
    if top.any():
        out[top] = mu_V_top_limit(u[top])
    return out


# ---------------------------------------------------------------------------
# the plane extension


@dataclass
class QuasiregularMapY:
    """The quasimeromorphic plane map with real cubic-density zeros/poles.

    Setup artifacts (the gamma2 trace and the interpolant's boundary data)
    are computed once; all evaluation methods are pure.
    """

    x0: float = X0
    gamma2_samples: int = 400
    gamma2_trace: np.ndarray = field(default=None, repr=False)
    shear_nodes: tuple = ((PI / 3, PI / 3), (PI, PI / 2), (2 * PI, 2 * PI))

    def __post_init__(self):
        if self.gamma2_trace is None:
            self.gamma2_trace = trace_gamma2(self.gamma2_samples)
        # touch the interpolant once so later calls share warm state
        hmap(np.array([0.2 + 0.5j]))

    # -- pullback ----------------------------------------------------------

    def eta(self, z):
        """(x0 + z^2)^(3/2), principal branch; maps Q1 onto the sector."""
        z = np.asarray(z, dtype=complex)
        return (self.x0 + z * z) ** 1.5

    def eta_prime(self, z):
        z = np.asarray(z, dtype=complex)
        return 3.0 * z * np.sqrt(self.x0 + z * z)

    def pullback_z(self, u):
        """Inverse of eta: sector -> closed first quadrant."""
        u = np.asarray(u, dtype=complex)
        r = np.abs(u)
        th = np.angle(u)
        th = np.where(th < -1e-12, th + 2 * PI, np.maximum(th, 0.0))
        zeta = r ** (2.0 / 3.0) * np.exp(2j * th / 3.0) - self.x0
        return np.sqrt(zeta)

    def y_value(self, z):
        """Y(z) anywhere in the plane, via reflections into Q1."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        x, y = z.real, z.imag
        zq = np.abs(x) + 1j * np.abs(y)
        vals = modified_V(self.eta(zq))
        # conjugate once per reflection across the real axis, negate-conj per
        # reflection across the imaginary axis
        lower = y < 0
        leftq = x < 0
        out = vals.copy()
        out = np.where(leftq, -np.conj(out), out)
        out = np.where(lower, np.conj(out), out)
        return complex(out[0]) if scalar else out

    def y_recip(self, z):
        """1/Y, stable near the poles (swapped Moebius numerator)."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        zq = np.abs(z.real) + 1j * np.abs(z.imag)
        u = self.eta(zq)
        # on the real axis the poles sit in the pocket where V = f2
        vals = f2_recip(u)
        e3 = _in_E3_vec(u)
        with np.errstate(all="ignore"):
            general = 1.0 / modified_V(u)
        vals = np.where(e3, general, vals)
        out = np.where(z.real < 0, -np.conj(vals), vals)
        out = np.where(z.imag < 0, np.conj(out), out)
        return complex(out[0]) if scalar else out

    def log_abs(self, z):
        """log |Y(z)|; reflections preserve modulus."""
        z = np.asarray(z, dtype=complex)
        zq = np.abs(z.real) + 1j * np.abs(z.imag)
        return log_abs_V(self.eta(zq))

    # -- censuses ------------------------------------------------------------

    def zero_abscissae(self, r_max: float) -> np.ndarray:
        """Nonnegative zeros of Y up to r_max: eta(x) at the zeros of f2."""
        kmax = int(((self.x0 + r_max ** 2) ** 1.5 / PI - 0.75) / 2) + 1
        k = np.arange(0, kmax + 1)
        vals = ((2 * k + 0.75) * PI) ** (2.0 / 3.0) - self.x0
        vals = vals[vals >= 0]
        xs = np.sqrt(vals)
        return xs[xs <= r_max]

    def pole_abscissae(self, r_max: float) -> np.ndarray:
        kmax = int(((self.x0 + r_max ** 2) ** 1.5 / PI - 0.25) / 2) + 1
        k = np.arange(0, kmax + 1)
        vals = ((2 * k + 0.25) * PI) ** (2.0 / 3.0) - self.x0
        vals = vals[vals >= 0]
        xs = np.sqrt(vals)
        return xs[xs <= r_max]

    def zero_pole_census(self, r_max: float):
        """(zeros, poles) as ZeroCensus objects, symmetric under x -> -x.

        The sign column holds the crossing direction of the real restriction
        (+1 throughout: Y and 1/Y increase through their real zeros).
        """
        if r_max < 10:
            raise MapDomainError("census requires r_max >= 10")
        zs = self.zero_abscissae(r_max)
        ps = self.pole_abscissae(r_max)
        allz = np.unique(np.concatenate([-zs, zs]))
        allp = np.unique(np.concatenate([-ps, ps]))
        zeros = ZeroCensus(zeros=tuple(allz), signs=tuple([1] * len(allz)),
                           radius_max=float(r_max))
        poles = ZeroCensus(zeros=tuple(allp), signs=tuple([1] * len(allp)),
                           radius_max=float(r_max))
        return zeros, poles

    def counting_function(self, r: float) -> int:
        """n_Y(r): zeros plus poles in [-r, r]."""
        zs = self.zero_abscissae(r)
        ps = self.pole_abscissae(r)
        nz = 2 * len(zs) - (1 if len(zs) and zs[0] == 0.0 else 0)
        return nz + 2 * len(ps)

    # -- dilatation sampling -------------------------------------------------

    def in_support(self, z) -> np.ndarray:
        """Membership of the dilatation support F4 (pullback of the |Re u| <
        2 pi strip, with reflections)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        zq = np.abs(z.real) + 1j * np.abs(z.imag)
        u = self.eta(zq)
        return np.abs(u.real) < 2 * PI

    def dilatation_sample(self, z, step: float | None = None):
        """Pointwise mu_Y at z by finite differences of Y itself.

        Valid where Y is finite and the image phase is resolvable; the
        u-chart machinery (mu_V_field) covers the rest of the support.
        """
        z = complex(z)
        if step is None:
            step = 1e-4 * max(1.0, abs(z)) / (1.0 + 3 * abs(z) ** 2)
        mu = dilatation_mu(self.y_value, z, step)
        tag = classify_region(complex(self.eta(np.abs(z.real) + 1j * abs(z.imag))))
        return DilatationSample(z=z, mu=mu, region=tag)

    def dilatation_sweep(self, n_s: int, n_t: int, t_range=(T_POINTWISE + 1, T_TOP),
                         s_range=(-2 * PI + 1e-3, 2 * PI - 1e-3)):
        """Sampled |mu_V| over a u-chart grid of the support band.

        Returns (samples z, |mu| values, u points).  |mu_Y(z)| equals
        |mu_V(u)| at u = eta(z) exactly, the pullback being conformal.
        """
        ss = np.linspace(s_range[0], s_range[1], n_s)
        ts = np.linspace(t_range[0], t_range[1], n_t)
        S, T = np.meshgrid(ss, ts)
        u = (S + 1j * T).ravel()
        keep = np.array([in_E0(complex(x)) for x in u])
        u = u[keep]
        mu = mu_V_field(u)
        z = self.pullback_z(u)
        return z, mu, u

    def dilatation_field_rows(self, n_s: int, n_t: int):
        """Rows (re_z, im_z, re_mu, im_mu, abs_mu, region) for export.

        The exported complex mu is the z-chart value: mu_V transported by
        the unimodular factor conj(eta')/eta'.
        """
        z, mu_abs, u = self.dilatation_sweep(n_s, n_t)
        point = (u.imag >= T_POINTWISE) & (u.imag <= T_TOP)
        rows = []
        mu_cplx = np.zeros(len(u), dtype=complex)
        if point.any():
            etp = self.eta_prime(z[point])
            with np.errstate(all="ignore"):
                phase = np.conj(etp) / etp
            mu_cplx[point] = mu_V_pointwise(u[point]) * phase
        mu_cplx[~point] = mu_abs[~point]  # averaged values carry no phase
        for i in range(len(u)):
            tag = classify_region(complex(u[i]))
            rows.append((z[i].real, z[i].imag, mu_cplx[i].real,
                         mu_cplx[i].imag, mu_abs[i], tag.value))
        return rows

    # -- integrability -------------------------------------------------------

    def integrability_check(self, radius: float = 64.0, n_s: int = 48,
                            n_t_per_decade: int = 48):
        """Integral of |mu_Y / z^2| over F4 within 1 <= |z| <= radius.

        Computed in the u-chart: dx dy = dkappa dlambda / |eta'|^2, so the
        integrand is |mu_V(u)| / (|z|^2 |eta'(z)|^2) over the strip |Re u| <
        2 pi.  Returns (total, per-annulus dict j -> contribution).
        """
        u_lo = 1.0
        u_hi = (self.x0 + radius ** 2) ** 1.5
        ss = np.linspace(-2 * PI, 2 * PI, n_s + 1)
        n_dec = math.log10(u_hi / u_lo)
        n_t = max(8, int(n_t_per_decade * n_dec))
        # symmetric log grids for the two ends (t > 0 and t < 0)
        tg = np.geomspace(u_lo, u_hi, n_t + 1)
        total = 0.0
        annuli = {}
        for sign in (1.0, -1.0):
            t_edges = sign * tg
            for i in range(n_t):
                t0, t1 = t_edges[i], t_edges[i + 1]
                tm = 0.5 * (t0 + t1)
                sm = 0.5 * (ss[:-1] + ss[1:])
                if sign < 0:
                    # lower part of the sector exists only for s < 0
                    keep = sm < 0
                else:
                    keep = np.ones_like(sm, dtype=bool)
                if not keep.any():
                    continue
                u_cells = sm[keep] + 1j * tm
                z_cells = self.pullback_z(u_cells)
                rr = np.abs(z_cells)
                inside = (rr >= 1.0) & (rr <= radius)
                if not inside.any():
                    continue
                u_in = u_cells[inside]
                z_in = z_cells[inside]
                mu = mu_V_field(u_in)
                w = np.abs(self.eta_prime(z_in)) ** 2 * np.abs(z_in) ** 2
                area = np.abs(t1 - t0) * (ss[1] - ss[0])
                contrib = area * mu / w
                total += float(np.sum(contrib))
                jbins = np.clip(np.floor(np.log2(np.abs(z_in))).astype(int), 0, 64)
                for j in np.unique(jbins):
                    annuli[int(j)] = annuli.get(int(j), 0.0) + float(
                        np.sum(contrib[jbins == j]))
        return total, dict(sorted(annuli.items()))

    # -- growth --------------------------------------------------------------

    def growth_on_curve(self, n: int, samples: int = 512):
        """max of log+ log+ |Y| on the curve |x0 + z^2| = (n pi)^(2/3).

        Returns (max_loglog, samples_skipped).  Pole-adjacent samples (|u| on
        top of a pole of f2) are skipped and counted.
        """
        if n < 2:
            raise MapDomainError("growth curve needs n >= 2")
        phis = np.linspace(0.0, PI, samples)
        rad = (n * PI) ** (2.0 / 3.0)
        z = np.sqrt(rad * np.exp(1j * phis) - self.x0)
        la = self.log_abs(z)
        good = np.isfinite(la)
        skipped = int(np.sum(~good))
        la = la[good]
        with np.errstate(all="ignore"):
            ll = np.log(np.maximum(la, 1.0))
        ll = np.maximum(ll, 0.0)
        return float(np.max(ll)), skipped


@dataclass(frozen=True)
class DilatationSample:
    z: complex
    mu: complex
    region: RegionTag


def dilatation_rows_to_csv(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("re_z,im_z,re_mu,im_mu,abs_mu,region\n")
        for r in rows:
            fh.write("%.17g,%.17g,%.17g,%.17g,%.17g,%s\n" % r)


def y_census_to_csv(ymap: QuasiregularMapY, zeros: ZeroCensus, poles: ZeroCensus, path):
    """Census export with the extra `kind` column; the abs columns hold the
    evaluator cross-check residuals |Y| (zeros) and |1/Y| (poles)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,sign,abs_E,abs_Eprime_minus_sign,kind\n")
        for census, kind in ((zeros, "zero"), (poles, "pole")):
            xs = np.array(census.zeros)
            if not len(xs):
                continue
            if kind == "zero":
                resid = np.abs(ymap.y_value(xs + 0j))
            else:
                resid = np.abs(ymap.y_recip(xs + 0j))
            for x, s, r in zip(census.zeros, census.signs, resid):
                fh.write("%.17g,%d,%.17g,%.17g,%s\n" % (x, s, r, 0.0, kind))


def growth_report_json(entries, path=None) -> str:
    """entries: list of (n, max_loglog, samples_skipped)."""
    arr = [{"n": int(n), "max_loglog": float(m), "samples_skipped": int(k)}
           for (n, m, k) in entries]
    text = json.dumps(arr, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
