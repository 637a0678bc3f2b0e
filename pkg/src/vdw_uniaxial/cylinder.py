"""Microparticle outside a solid cylinder or cylindrical shell (proximity-force form).

``F = -C3c / a^3`` where ``C3c`` is the planar Matsubara sum with the
prefactor ``sqrt(R / (R + a))`` and the integrand weighted by
``1 - a / (2 (R + a) y)``.  A solid cylinder uses semispace reflection
coefficients, a shell of thickness ``d < R`` plate coefficients.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .planar import (
    QUAD_RTOL, ContinuumWarning, LifshitzResult, MatsubaraDiagnostics, c3_planar,
    lifshitz_c3_sum, _warn_separation,
)
from .permittivity import Material
from .polarizability import OscillatorModel
from .quantities import C3_AU_SI
from .reflection import WallGeometry

__all__ = ["CylinderResult", "c3_cylinder", "delta_semispace_cylinder", "shell_thickness_scan"]

HIGH_PRECISION = "high-precision"
EXTRAPOLATED = "extrapolated"


@dataclass
class CylinderResult(LifshitzResult):
    delta_vs_semispace: float = math.nan
    validity: str = HIGH_PRECISION
    c3_semispace: float = math.nan


def c3_cylinder(particle: OscillatorModel, wall: WallGeometry, a, T, *,
                quad_rtol=QUAD_RTOL, grid=None, with_semispace=True) -> CylinderResult:
    """C3 of a particle at distance ``a`` from the outer surface of a cylinder.

    Separations beyond R/2 are computed but flagged ``extrapolated``.
    With ``with_semispace`` the semispace C3 of the same material is also
    computed and ``delta_vs_semispace`` filled in.
    """
    if wall.kind not in ("solid-cylinder", "shell"):
        raise ValueError(f"cylinder engine needs a solid-cylinder or shell, got {wall.kind}")
    if not a > 0:
        raise ValueError("separation must be positive")
    _warn_separation(a)
    R = wall.R
    if wall.kind == "shell" and wall.d < 3e-9:
        warnings.warn(f"shell thickness {wall.d * 1e9:.3g} nm is below 3 nm; the continuum "
                      "description may not apply", ContinuumWarning, stacklevel=2)
    d = wall.layer_thickness
    thick = math.inf if d is None else d / (2.0 * a)
    shift = a / (2.0 * (R + a))
    pref = math.sqrt(R / (R + a))
    c3, diag = lifshitz_c3_sum(particle, wall.material, a, T, thick=thick, shift=shift,
                               prefactor=pref, quad_rtol=quad_rtol, grid=grid)
    validity = HIGH_PRECISION if a <= R / 2 else EXTRAPOLATED
    c3s = delta = math.nan
    if with_semispace:
        c3s = c3_planar(particle, WallGeometry("semispace", wall.material), a, T,
                        quad_rtol=quad_rtol, grid=grid).c3
        delta = (c3s - c3) / c3s if c3s != 0 else 0.0
    F = -c3 * C3_AU_SI / a**3
    return CylinderResult(F, c3, a, T, diag, {
        "particle": particle.describe(), "wall": wall.describe(), "a_m": a, "T_K": T},
        delta_vs_semispace=delta, validity=validity, c3_semispace=c3s)


def delta_semispace_cylinder(particle: OscillatorModel, material: Material, R, a, T, **kw) -> float:
    """(C3_semispace - C3_cylinder) / C3_semispace for a solid cylinder of radius R."""
    res = c3_cylinder(particle, WallGeometry("solid-cylinder", material, R=R), a, T, **kw)
    return res.delta_vs_semispace


def shell_thickness_scan(particle: OscillatorModel, material: Material, R, a, T, d_grid, **kw):
    """[(d, C3)] for shells of outer radius R; d = R gives the solid cylinder."""
    out = []
    for d in d_grid:
        if not (0 < d <= R * (1 + 1e-12)):
            raise ValueError(f"shell thickness {d} outside (0, R]")
        wall = WallGeometry("shell", material, d=min(d, R), R=R)
        out.append((d, c3_cylinder(particle, wall, a, T, with_semispace=False, **kw).c3))
    return out
