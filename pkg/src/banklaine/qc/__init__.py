"""Quasiregular surgery construction.

Builds, on the sector 0 <= arg u <= 3pi/2, a continuous map F that equals
two explicit locally univalent functions off a strip union and is bridged
across the strip by a quasiconformal interpolant; applies an angular shear L
on a subregion; pulls the result back to the first quadrant through
u = (x0 + z^2)^(3/2) and extends by double reflection.  The extension Y is
meromorphic off a thin set, has only real zeros and poles with a cubic
counting law, and has integrable dilatation against |z|^-2.
"""

from .maps import (
    RegionTag,
    angular_L,
    classify_region,
    f1_map,
    f2_map,
    f2_recip,
    gamma2_point,
    h_boundary,
    moebius_T,
    shear_g,
    trace_gamma2,
)
from .interpolant import psi_interpolant, hmap, boundary_rho, psi_dilatation_sup
from .surgery import (
    QuasiregularMapY,
    glued_F,
    log_abs_F,
    modified_V,
)

__all__ = [
    "RegionTag",
    "angular_L",
    "classify_region",
    "f1_map",
    "f2_map",
    "f2_recip",
    "gamma2_point",
    "h_boundary",
    "moebius_T",
    "shear_g",
    "trace_gamma2",
    "psi_interpolant",
    "hmap",
    "boundary_rho",
    "psi_dilatation_sup",
    "QuasiregularMapY",
    "glued_F",
    "log_abs_F",
    "modified_V",
]
