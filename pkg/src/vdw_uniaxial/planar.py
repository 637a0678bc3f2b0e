"""Lifshitz free energy of a microparticle near a planar wall, and of two planar bodies.

The atom-wall free energy is written as ``F = -C3(a, T) / a^3`` with

    C3 = (k_B T / 8) * P * sum'_l alpha(i xi_l)
         * int_{zeta_l}^inf dy e^{-y} (1 - s/y) [2 y^2 r_par + zeta_l^2 (r_perp - r_par)]

where ``P = 1`` and ``s = 0`` for planar walls; the cylinder module reuses
the same sum with its own prefactor ``P`` and shift ``s``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from ._kernels_py import T_MAX, reflection_dimensionless, tail_bound
from .permittivity import Material
from .polarizability import OscillatorModel
from .quadrature import integrate_batch
from .quantities import (
    C3_AU_SI, HARTREE_J, K_B, MatsubaraGrid, characteristic_frequency, rad_s_to_au,
)
from .reflection import WallGeometry

__all__ = [
    "NumericError", "ContinuumWarning", "MatsubaraDiagnostics", "LifshitzResult",
    "lifshitz_c3_sum", "c3_planar", "free_energy_planar",
    "two_body_free_energy_per_area", "two_body_force_per_area",
    "QUAD_RTOL", "MATSUBARA_RTOL",
]

QUAD_RTOL = 1e-6
MATSUBARA_RTOL = 1e-7
CONTINUUM_MIN_SEPARATION = 3e-9


class NumericError(ArithmeticError):
    """A quadrature or summation did not converge."""


class ContinuumWarning(UserWarning):
    """Separation or thickness below the range where a continuum description holds."""


@dataclass
class MatsubaraDiagnostics:
    n_terms: int
    tail_estimate: float
    quad_error: float
    cap_hit: bool
    tolerance: float
    backend: str

    def as_dict(self):
        return asdict(self)


@dataclass
class LifshitzResult:
    """Free energy (J) and its C3 coefficient (Hartree bohr^3)."""

    free_energy: float
    c3: float
    a: float
    temperature: float
    diagnostics: MatsubaraDiagnostics
    inputs: dict = field(default_factory=dict)

    @property
    def c3_si(self) -> float:
        return self.c3 * C3_AU_SI


def _chunks():
    size = 64
    while True:
        yield size
        size = min(2 * size, 4096)


def _stop_index(terms, S0, rtol, min_terms, offset):
    """Scan ``terms`` (indices offset.. offset+len-1) for the stop rule.

    Returns ``(stop, running_sums)``; ``stop`` is the position inside
    ``terms`` of the last term kept, or None.
    """
    S = np.cumsum(np.concatenate([[S0], terms]))[1:]
    small = np.abs(terms) <= rtol * np.abs(S)
    return small, S


def lifshitz_c3_sum(particle: OscillatorModel, material: Material, a, T, *,
                    thick=math.inf, shift=0.0, prefactor=1.0,
                    quad_rtol=QUAD_RTOL, grid: MatsubaraGrid | None = None):
    """Evaluate the C3 Matsubara sum; returns ``(c3_au, diagnostics)``.

    ``thick`` is d / (2a) for plate-type coefficients (inf for semispace);
    ``shift`` is the cylinder bracket offset a / (2 (R + a)).
    """
    if not a > 0:
        raise ValueError("separation must be positive")
    grid = grid or MatsubaraGrid(T, rtol=MATSUBARA_RTOL)
    rtol = grid.rtol
    backend = kernels.BACKEND

    # l = 0
    ex0, ez0 = (np.inf, np.inf) if material.is_ideal else material.static_pair()
    I0, e0 = kernels.lifshitz_terms(np.zeros(1), np.array([ex0]), np.array([ez0]),
                                    material.is_ideal, thick, shift, quad_rtol)
    alpha0 = particle.static_au
    _check_quad(I0, e0, np.zeros(1), shift, quad_rtol, 0)
    S = 0.5 * alpha0 * float(I0[0])
    qerr = 0.5 * alpha0 * float(e0[0])
    n_used = 1
    consec = 0
    cap_hit = False
    tail = 0.0
    last = [abs(S)]
    omega_c = characteristic_frequency(a)
    l_next = 1
    chunker = _chunks()
    done = False
    while not done:
        size = next(chunker)
        size = min(size, grid.max_terms - l_next)
        if size <= 0:
            cap_hit = True
            break
        ls = np.arange(l_next, l_next + size)
        xi = grid.xi(ls)
        zeta = xi / omega_c
        ex, ez = material.matsubara_eps(T, l_next + size - 1)
        ex, ez = ex[l_next - 1:], ez[l_next - 1:]
        alpha = particle.alpha_au(rad_s_to_au(xi))
        I, err = kernels.lifshitz_terms(zeta, ex, ez, material.is_ideal, thick, shift, quad_rtol)
        _check_quad(I, err, zeta, shift, quad_rtol, l_next)
        ez_fac = np.exp(-zeta)
        terms = alpha * ez_fac * I
        errs = alpha * ez_fac * err
        small, run = _stop_index(terms, S, rtol, grid.min_terms, l_next)
        stop = None
        for j in range(size):
            consec = consec + 1 if small[j] else 0
            if consec >= 3 and (l_next + j + 1) >= grid.min_terms:
                stop = j
                break
        if stop is None:
            S = float(run[-1])
            qerr += float(errs.sum())
            n_used += size
            last = list(np.abs(terms[-3:]))
            l_next += size
        else:
            S = float(run[stop])
            qerr += float(errs[:stop + 1].sum())
            n_used += stop + 1
            last = list(np.abs(terms[max(0, stop - 2):stop + 1]))
            done = True
    if S != 0:
        tail = max(last) / abs(S)
    elif any(v != 0 for v in last):
        tail = math.inf
    c3 = prefactor * (K_B * T / HARTREE_J) / 8.0 * S
    rel_q = qerr / abs(S) if S != 0 else 0.0
    if cap_hit:
        warnings.warn(f"Matsubara sum hit the cap of {grid.max_terms} terms "
                      f"(tail estimate {tail:.2e})", RuntimeWarning, stacklevel=2)
    diag = MatsubaraDiagnostics(n_used, tail, rel_q, cap_hit, rtol, backend)
    return c3, diag


def _check_quad(I, err, zeta, shift, rtol, l0):
    bad = err > rtol * np.abs(I) + 2.0 * tail_bound(zeta, shift) + 1e-300
    if np.any(bad):
        j = int(np.argmax(np.where(bad, err / np.maximum(np.abs(I), 1e-300), -1)))
        raise NumericError(
            f"y-quadrature did not converge for Matsubara term l={l0 + j}: "
            f"value {I[j]:.6e}, error {err[j]:.3e}")


def _warn_separation(a):
    if a < CONTINUUM_MIN_SEPARATION:
        warnings.warn(f"separation {a * 1e9:.3g} nm is below 3 nm; the continuum "
                      "description of the wall may not apply", ContinuumWarning, stacklevel=3)


def _planar_thick(wall: WallGeometry, a):
    if wall.kind == "semispace":
        return math.inf
    if wall.kind == "plate":
        return wall.d / (2.0 * a)
    raise ValueError(f"planar engine needs a semispace or plate, got {wall.kind}")


def c3_planar(particle: OscillatorModel, wall: WallGeometry, a, T, *,
              quad_rtol=QUAD_RTOL, grid=None) -> LifshitzResult:
    """C3(a, T) of a particle at separation ``a`` (m) from a semispace or plate."""
    _warn_separation(a)
    thick = _planar_thick(wall, a)
    c3, diag = lifshitz_c3_sum(particle, wall.material, a, T, thick=thick,
                               quad_rtol=quad_rtol, grid=grid)
    F = -c3 * C3_AU_SI / a**3
    return LifshitzResult(F, c3, a, T, diag, {
        "particle": particle.describe(), "wall": wall.describe(), "a_m": a, "T_K": T})


free_energy_planar = c3_planar


# ---------------------------------------------------------------------------
# two planar bodies

def _two_body_sum(kind, left: Material, right: Material, d_left, a, T, quad_rtol, grid):
    if not a > 0:
        raise ValueError("separation must be positive")
    grid = grid or MatsubaraGrid(T, rtol=MATSUBARA_RTOL)
    if left.is_vacuum or right.is_vacuum:
        return 0.0, MatsubaraDiagnostics(0, 0.0, 0.0, False, grid.rtol, "python")
    thick = math.inf if d_left is None else d_left / (2.0 * a)
    omega_c = characteristic_frequency(a)
    edges0 = np.array([0.0, 0.1, 0.4, 1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 23.0, 31.0, T_MAX])

    def integrate(zeta, lx, lz, rx, rz, static):
        n = zeta.size
        edges = np.broadcast_to(edges0, (n, edges0.size))

        def f(idx, t):
            z = zeta[idx][:, None, None]
            y = z + t
            args_l = (lx[idx][:, None, None], lz[idx][:, None, None])
            args_r = (rx[idx][:, None, None], rz[idx][:, None, None])
            zz = 0.0 if static else z
            p1, s1 = reflection_dimensionless(y, zz, *args_l, left.is_ideal, thick)
            p2, s2 = reflection_dimensionless(y, zz, *args_r, right.is_ideal, math.inf)
            ey = np.exp(-y)
            out = 0.0
            for x in (p1 * p2 * ey, s1 * s2 * ey):
                if kind == "energy":
                    out = out + y * np.log1p(-x)
                else:
                    out = out + y * y * x / (1.0 - x)
            return out

        val, err, ok = integrate_batch(f, edges, rtol=quad_rtol, max_level=10)
        if not np.all(ok):
            raise NumericError("two-body y-quadrature did not converge")
        return val, err

    def static_pair(m):
        return (np.inf, np.inf) if m.is_ideal else m.static_pair()

    lx0, lz0 = static_pair(left)
    rx0, rz0 = static_pair(right)
    v0, e0 = integrate(np.zeros(1), np.array([lx0]), np.array([lz0]),
                       np.array([rx0]), np.array([rz0]), True)
    S = 0.5 * float(v0[0])
    qerr = 0.5 * float(e0[0])
    n_used, consec, last, l_next, cap_hit = 1, 0, [abs(S)], 1, False
    chunker = _chunks()
    while True:
        size = min(next(chunker), grid.max_terms - l_next)
        if size <= 0:
            cap_hit = True
            break
        ls = np.arange(l_next, l_next + size)
        zeta = grid.xi(ls) / omega_c
        lx, lz = left.matsubara_eps(T, l_next + size - 1)
        rx, rz = right.matsubara_eps(T, l_next + size - 1)
        sl = slice(l_next - 1, None)
        v, e = integrate(zeta, lx[sl], lz[sl], rx[sl], rz[sl], False)
        small, run = _stop_index(v, S, grid.rtol, grid.min_terms, l_next)
        stop = None
        for j in range(size):
            consec = consec + 1 if small[j] else 0
            if consec >= 3 and (l_next + j + 1) >= grid.min_terms:
                stop = j
                break
        if stop is None:
            S, qerr, n_used = float(run[-1]), qerr + float(e.sum()), n_used + size
            last = list(np.abs(v[-3:]))
            l_next += size
            continue
        S, qerr, n_used = float(run[stop]), qerr + float(e[:stop + 1].sum()), n_used + stop + 1
        last = list(np.abs(v[max(0, stop - 2):stop + 1]))
        break
    tail = max(last) / abs(S) if S != 0 else 0.0
    diag = MatsubaraDiagnostics(n_used, tail, qerr / abs(S) if S else 0.0, cap_hit, grid.rtol, "python")
    return S, diag


def two_body_free_energy_per_area(wall_left: Material, wall_right: Material, d_left, a, T, *,
                                  quad_rtol=1e-8, grid=None, diagnostics=False):
    """Free energy per unit area (J/m^2) between a uniaxial semispace or plate
    (thickness ``d_left``, None for a semispace) and a semispace ``wall_right``."""
    S, diag = _two_body_sum("energy", wall_left, wall_right, d_left, a, T, quad_rtol, grid)
    val = K_B * T / (2.0 * np.pi) / (4.0 * a * a) * S
    return (val, diag) if diagnostics else val


def two_body_force_per_area(wall_left: Material, wall_right: Material, d_left, a, T, *,
                            quad_rtol=1e-8, grid=None, diagnostics=False):
    """Force per unit area (N/m^2), negative for attraction; equals -dF/da."""
    S, diag = _two_body_sum("force", wall_left, wall_right, d_left, a, T, quad_rtol, grid)
    val = -K_B * T / (8.0 * np.pi * a**3) * S
    return (val, diag) if diagnostics else val
