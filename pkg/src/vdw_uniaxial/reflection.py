"""Reflection coefficients on the imaginary frequency axis.

Dimensionless variables: ``y = 2 a q`` and ``zeta = 2 a xi / c`` with
``y >= zeta``.  The optic axis of the uniaxial medium is normal to the
surface; ``eps_x`` is the in-plane (ordinary) permittivity and ``eps_z``
the normal (extraordinary) one.  Isotropic media use ``eps_x == eps_z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._kernels_py import coth, reflection_dimensionless
from .permittivity import Material

__all__ = [
    "ReflectionPair", "WallGeometry", "refl_semispace", "refl_plate", "refl_zero_frequency",
    "material_reflection", "coth",
]


class ReflectionPair(NamedTuple):
    r_par: np.ndarray  # TM
    r_perp: np.ndarray  # TE


def _check(eps_x, eps_z, zeta, y):
    zeta = np.asarray(zeta, dtype=float)
    y = np.asarray(y, dtype=float)
    ex = np.asarray(eps_x, dtype=float)
    ez = np.asarray(eps_z, dtype=float)
    if np.any(zeta < 0):
        raise ValueError("zeta must be >= 0")
    if np.any(y < zeta):
        raise ValueError("y < zeta lies outside the integration region")
    if np.any(ex < 1) or np.any(ez < 1):
        raise ValueError("permittivities below 1 on the imaginary axis are not supported")
    return ex, ez, zeta, y


def _pair(rpar, rperp):
    if rpar.ndim == 0:
        return ReflectionPair(float(rpar), float(rperp))
    return ReflectionPair(rpar, rperp)


def refl_semispace(eps_x, eps_z, zeta, y, ideal=False):
    """Semispace coefficients; ``eps = inf`` (or ``ideal``) is a perfect mirror."""
    ex, ez, zeta, y = _check(eps_x, eps_z, zeta, y)
    if np.any((zeta == 0) & ~ideal):
        raise ValueError("zeta = 0 needs the static limit; use refl_zero_frequency")
    rpar, rperp = reflection_dimensionless(y, zeta, ex, ez, ideal, np.inf)
    return _pair(rpar, rperp)


def refl_plate(eps_x, eps_z, d, a, zeta, y, ideal=False):
    """Coefficients of a plate of thickness ``d`` seen from separation ``a``."""
    if not (d > 0 and a > 0):
        raise ValueError("plate thickness and separation must be positive")
    ex, ez, zeta, y = _check(eps_x, eps_z, zeta, y)
    if np.any((zeta == 0) & ~ideal):
        raise ValueError("zeta = 0 needs the static limit; use refl_zero_frequency")
    rpar, rperp = reflection_dimensionless(y, zeta, ex, ez, ideal, d / (2.0 * a))
    return _pair(rpar, rperp)


def refl_zero_frequency(material: Material, y=1.0, d=None, a=None):
    """l = 0 limit of the coefficients.

    For a semispace ``r_par = (E - 1)/(E + 1)`` with ``E = sqrt(eps_x0 eps_z0)``,
    and 1 when either static permittivity diverges.  For a plate of
    thickness ``d`` at separation ``a`` the finite-E value depends on ``y``.
    ``r_perp`` is 0 except for the ideal metal, where it is 1.
    """
    y = np.asarray(y, dtype=float)
    if material.is_ideal:
        one = np.ones_like(y)
        return _pair(one, one.copy())
    ex0, ez0 = material.static_pair()
    thick = np.inf if d is None else d / (2.0 * a)
    rpar, rperp = reflection_dimensionless(y, 0.0, ex0, ez0, False, thick)
    return _pair(rpar, rperp)


def material_reflection(material: Material, a, zeta, y, d=None):
    """Coefficients of ``material`` at ``xi = zeta c / (2a)`` (semispace or plate)."""
    from .quantities import C_LIGHT

    zeta = float(zeta)
    if zeta == 0:
        return refl_zero_frequency(material, y, d, a)
    xi = zeta * C_LIGHT / (2.0 * a)
    if material.is_ideal:
        ex = ez = np.inf
    else:
        ex, ez = material.eps(xi)
    if d is None:
        return refl_semispace(ex, ez, zeta, y, material.is_ideal)
    return refl_plate(ex, ez, d, a, zeta, y, material.is_ideal)


@dataclass(frozen=True)
class WallGeometry:
    """Macrobody description.

    kind : 'semispace', 'plate' (needs ``d``), 'solid-cylinder' (needs ``R``)
    or 'shell' (needs ``R`` and ``0 < d <= R``; ``d == R`` is the solid cylinder).
    Lengths in metres.
    """

    kind: str
    material: Material
    d: float | None = None
    R: float | None = None

    def __post_init__(self):
        k = self.kind
        if k not in ("semispace", "plate", "solid-cylinder", "shell"):
            raise ValueError(f"unknown geometry kind {k!r}")
        if k in ("plate", "shell") and not (self.d is not None and self.d > 0):
            raise ValueError(f"{k} needs a positive thickness d")
        if k in ("solid-cylinder", "shell") and not (self.R is not None and self.R > 0):
            raise ValueError(f"{k} needs a positive radius R")
        if k == "shell" and self.d > self.R * (1 + 1e-12):
            raise ValueError("shell thickness cannot exceed its radius")

    @property
    def planar(self) -> bool:
        return self.kind in ("semispace", "plate")

    @property
    def layer_thickness(self):
        """Thickness entering the plate coefficients, or None for semispace ones."""
        if self.kind == "plate":
            return self.d
        if self.kind == "shell" and self.d < self.R:
            return self.d
        return None

    @property
    def inner_radius(self):
        if self.kind == "solid-cylinder":
            return 0.0
        if self.kind == "shell":
            return max(self.R - self.d, 0.0)
        return None

    def describe(self):
        return {"kind": self.kind, "d_m": self.d, "R_m": self.R, "material": self.material.describe()}
