"""Pure-numpy implementation of the Matsubara-term kernel.

Mirrors ``_kernels.pyx`` operation for operation; used when the compiled
extension is unavailable or ``VDW_UNIAXIAL_PURE_PYTHON=1`` is set.
"""
from __future__ import annotations

import numpy as np

from .quadrature import integrate_batch

T_MAX = 40.0
INIT_EDGES = np.array([0.0, 0.1, 0.4, 1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 23.0, 31.0, T_MAX])
MAX_LEVEL = 8
COTH_SMALL = 1e-4
COTH_LARGE = 350.0

BACKEND = "python"


def coth(u):
    """Overflow-free coth for u > 0 (u may be +inf)."""
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    small = u < COTH_SMALL
    mid = (~small) & (u <= COTH_LARGE)
    us = u[small]
    out[small] = 1.0 / us + us / 3.0
    out[mid] = 1.0 + 2.0 / np.expm1(2.0 * u[mid])
    return out


def reflection_dimensionless(y, zeta, ex, ez, ideal, thick):
    """(r_par, r_perp) for a uniaxial semispace (thick = inf) or plate.

    ``thick`` is d / (2a).  Arrays broadcast.  At ``zeta == 0`` the
    static limits are returned: ``ex``/``ez`` may then be ``inf`` for
    conductors, giving ``r_par = 1``; ``r_perp`` is 0 unless ``ideal``.
    """
    y, zeta, ex, ez = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (y, zeta, ex, ez)))
    shape = y.shape
    rpar = np.empty(shape)
    rperp = np.empty(shape)
    if ideal:
        rpar.fill(1.0)
        rperp.fill(1.0)
        return rpar, rperp
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        static = zeta == 0.0
        infinite = ~(np.isfinite(ex) & np.isfinite(ez))
        # static, finite permittivities: f_x = f_z = y
        E = np.sqrt(ex * ez)
        ct0 = coth(y * thick)
        rpar_static = np.where(
            np.isinf(E), 1.0,
            (E * E - 1.0) / (E * E + 1.0 + 2.0 * E * ct0),
        )
        z2 = zeta * zeta
        dx = z2 * (ex - 1.0)
        dz = z2 * (ez - 1.0)
        fx = np.sqrt(y * y + dx)
        fz = np.sqrt(y * y + dz)
        exz1 = (ex - 1.0) * (ez - 1.0) + (ex - 1.0) + (ez - 1.0)
        num = exz1 * y * y - dz
        ctz = coth(fz * thick)
        ctx = coth(fx * thick)
        rpar_dyn = num / (E * E * y * y + fz * fz + 2.0 * E * y * fz * ctz)
        rperp_dyn = dx / (y * y + fx * fx + 2.0 * y * fx * ctx)
    rpar[...] = np.where(static, rpar_static, np.where(infinite, 1.0, rpar_dyn))
    rperp[...] = np.where(static, 0.0, np.where(infinite, 1.0, rperp_dyn))
    return rpar, rperp


def _integrand(y, zeta, ex, ez, ideal, thick, shift):
    rpar, rperp = reflection_dimensionless(y, zeta, ex, ez, ideal, thick)
    z2 = zeta * zeta
    return 2.0 * y * (y - shift) * rpar + z2 * (rperp - rpar) * (1.0 - shift / y)


def tail_bound(zeta, shift):
    """Upper bound of the integrand tail beyond t = T_MAX (|r| <= 1)."""
    Y = zeta + T_MAX
    return np.exp(-T_MAX) * (2.0 * Y * Y + 4.0 * Y + 4.0 + 2.0 * shift * (Y + 1.0) + 2.0 * zeta * zeta)


def lifshitz_terms(zeta, ex, ez, ideal=False, thick=np.inf, shift=0.0, rtol=1e-6, max_level=MAX_LEVEL):
    """Scaled y-integrals for a batch of Matsubara terms.

    Returns ``I`` and an error estimate such that the term integral is
    ``exp(-zeta) * I`` with

        I = int_0^T_MAX dt e^{-t} g(zeta + t),
        g(y) = (1 - shift/y) [2 y^2 r_par + zeta^2 (r_perp - r_par)].
    """
    zeta = np.ascontiguousarray(zeta, dtype=float)
    ex = np.ascontiguousarray(ex, dtype=float)
    ez = np.ascontiguousarray(ez, dtype=float)
    n = zeta.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros(0)
    edges = np.broadcast_to(INIT_EDGES, (n, INIT_EDGES.size))

    def f(idx, t):
        z = zeta[idx][:, None, None]
        y = z + t
        return np.exp(-t) * _integrand(y, z, ex[idx][:, None, None], ez[idx][:, None, None],
                                       ideal, thick, shift)

    val, err, _ = integrate_batch(f, edges, rtol=rtol, atol=0.0, max_level=max_level)
    return val, err + tail_bound(zeta, shift)
