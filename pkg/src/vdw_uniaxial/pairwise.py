"""Pairwise-additive (Hamaker-type) free energies normalised to the semispace C3.

For a body ``v`` the free energy is ``-(6 C3s / pi) * int_v dv / r^6``,
which reproduces ``-C3s / a^3`` for a semispace.  After the z- and
radial integrations the cylinder cases reduce to one angular integral:

    exterior (solid radius R):  -(3/2) C3s int_0^theta_m [rho1^-3 - rho2^-3] dtheta
    interior (cavity R0, wall d): -(3/2) C3s int_0^pi [rho1~^-3 - rho2~^-3] dtheta
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .cylinder import c3_cylinder
from .planar import NumericError, c3_planar
from .quantities import C3_AU_SI
from .reflection import WallGeometry

__all__ = [
    "exterior_angular_integral", "interior_angular_integral", "pairwise_exterior",
    "pairwise_interior", "inside_outside_difference", "interior_transect", "SemispaceC3",
]

THETA_RTOL = 1e-10


def _quad(f, lo, hi, points=None):
    pts = None
    if points:
        pts = sorted(p for p in points if lo < p < hi)
    val, err = quad(f, lo, hi, points=pts or None, epsabs=0.0, epsrel=THETA_RTOL, limit=500)
    if not math.isfinite(val) or err > 1e-7 * abs(val):
        raise NumericError(f"angular quadrature failed: value {val}, error {err}")
    return val


def exterior_angular_integral(R, a):
    """int_0^theta_m [rho1^-3 - rho2^-3] dtheta for a solid cylinder (units m^-3).

    rho_{1,2} = (R+a) cos(t) -/+ sqrt(R^2 - (R+a)^2 sin^2 t); rho1 is
    evaluated as (D^2 - R^2) / (D cos t + root) to avoid cancellation.  The
    square-root endpoint at theta_m is removed by t = theta_m - u^2.
    """
    if not (R > 0 and a > 0):
        raise ValueError("R and a must be positive")
    D = R + a
    D2mR2 = a * (2.0 * R + a)
    theta_m = math.asin(R / D)

    def g(t):
        s = math.sin(t)
        root2 = (R - D * s) * (R + D * s)
        root = math.sqrt(max(root2, 0.0))
        dc = D * math.cos(t)
        rho2 = dc + root
        rho1 = D2mR2 / rho2
        return rho1**-3 - rho2**-3

    split = 0.5 * theta_m
    w = math.sqrt(a / D)
    head = _quad(g, 0.0, split, points=[0.1 * w, w, 3 * w, 10 * w])
    umax = math.sqrt(theta_m - split)
    tail = _quad(lambda u: 2.0 * u * g(theta_m - u * u), 0.0, umax)
    return head + tail


def interior_angular_integral(R0, d, a):
    """int_0^pi [rho1~^-3 - rho2~^-3] dtheta for an atom inside a cavity of radius R0."""
    if not (R0 > 0 and d >= 0 and 0 < a < 2 * R0):
        raise ValueError("need R0 > 0, d >= 0 and 0 < a < 2 R0")
    if d == 0:
        return 0.0
    b = R0 - a
    Rout = R0 + d
    in2 = R0 * R0 - b * b
    out2 = Rout * Rout - b * b

    def g(t):
        c, s = math.cos(t), math.sin(t)
        bs2 = (b * s) ** 2
        r1 = in2 / (b * c + math.sqrt(R0 * R0 - bs2))
        r2 = out2 / (b * c + math.sqrt(Rout * Rout - bs2))
        return r1**-3 - r2**-3

    near = min(a, 2 * R0 - a)
    w = math.sqrt(near / R0)
    pts = [0.1 * w, w, 3 * w] if b > 0 else [math.pi - 3 * w, math.pi - w, math.pi - 0.1 * w]
    return _quad(g, 0.0, math.pi, points=pts)


class SemispaceC3:
    """Cache of semispace C3 values (a.u.) keyed by separation."""

    def __init__(self, particle, material, T, **kw):
        self.particle = particle
        self.material = material
        self.T = T
        self.kw = kw
        self._cache = {}

    def __call__(self, a):
        key = round(a * 1e15)  # femtometre resolution
        if key not in self._cache:
            wall = WallGeometry("semispace", self.material)
            self._cache[key] = c3_planar(self.particle, wall, a, self.T, **self.kw).c3
        return self._cache[key]


def _c3s_value(c3s, particle, material, a, T):
    if c3s is None:
        return c3_planar(particle, WallGeometry("semispace", material), a, T).c3
    if callable(c3s):
        return c3s(a)
    return float(c3s)


def pairwise_exterior(particle, material, R, a, T, c3s=None, inner_radius=0.0):
    """Free energy (J) outside a solid cylinder, or a shell with ``inner_radius``.

    ``c3s`` may be a number (a.u.), a callable of separation, or None to
    compute the semispace coefficient here.
    """
    X = exterior_angular_integral(R, a)
    if inner_radius > 0:
        X -= exterior_angular_integral(inner_radius, a + (R - inner_radius))
    C = _c3s_value(c3s, particle, material, a, T)
    return -1.5 * C * C3_AU_SI * X


def pairwise_interior(particle, material, R0, d, a, T, c3s=None):
    """Free energy (J) of an atom inside a tube (cavity radius R0, wall d).

    ``a`` is measured from the cavity surface along a diameter; the
    normalising semispace C3 is taken at the distance to the nearer wall
    point, min(a, 2 R0 - a).
    """
    X = interior_angular_integral(R0, d, a)
    if X == 0.0:
        return 0.0
    near = min(a, 2.0 * R0 - a)
    C = _c3s_value(c3s, particle, material, near, T)
    return -1.5 * C * C3_AU_SI * X


def inside_outside_difference(particle, material, R0, d, a, T, exterior="lifshitz", c3s=None):
    """F_ext(a) - F_int(a) for atoms at distance ``a`` outside and inside a tube.

    ``exterior='lifshitz'`` uses the proximity-force cylinder formula for
    the shell of outer radius R0 + d; ``'pairwise'`` uses pairwise summation.
    """
    R = R0 + d
    if c3s is None:
        c3s = SemispaceC3(particle, material, T)
    if exterior == "lifshitz":
        wall = WallGeometry("shell", material, d=d, R=R)
        F_ext = c3_cylinder(particle, wall, a, T, with_semispace=False).free_energy
    elif exterior == "pairwise":
        F_ext = pairwise_exterior(particle, material, R, a, T, c3s=c3s, inner_radius=R0)
    else:
        raise ValueError("exterior must be 'lifshitz' or 'pairwise'")
    F_int = pairwise_interior(particle, material, R0, d, a, T, c3s=c3s)
    return F_ext - F_int


def interior_transect(particle, material, R0, d, T, positions, c3s=None):
    """[(position, F)] along a diameter; position measured from one cavity wall."""
    if c3s is None:
        c3s = SemispaceC3(particle, material, T)
    return [(p, pairwise_interior(particle, material, R0, d, p, T, c3s=c3s)) for p in positions]
