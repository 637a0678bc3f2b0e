"""Physical constants, unit conversions and the Matsubara frequency grid.

All engine internals work in SI.  Atomic-unit and electron-volt views use
the conversion factors the graphite/hydrogen reference values were
produced with, so that reproduced numbers do not drift in the fourth digit:

* 1 eV          = 1.519e15 rad/s
* 1 a.u. energy = 27.11 eV
* 1 a.u. polarizability = 1.482e-31 m^3

Energies in joule are tied to frequencies through hbar, so
``EV_TO_J = hbar * EV_TO_RAD_S``.  With this chain the closed-form
ideal-mirror coefficient ``alpha(0) * omega / 8`` holds exactly in a.u.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann as K_B
from scipy.constants import c as C_LIGHT
from scipy.constants import hbar as HBAR

__all__ = [
    "K_B", "HBAR", "C_LIGHT",
    "EV_TO_RAD_S", "EV_TO_J", "HARTREE_EV", "HARTREE_J", "HARTREE_RAD_S",
    "AU_POLARIZABILITY_M3", "BOHR_M", "C3_AU_SI",
    "ev_to_rad_s", "rad_s_to_ev", "au_to_rad_s", "rad_s_to_au",
    "alpha_au_to_m3", "alpha_m3_to_au", "c3_si_to_au", "c3_au_to_si",
    "nm", "to_nm", "bohr_to_m", "m_to_bohr", "j_to_ev", "ev_to_j",
    "j_to_au", "au_to_j",
    "MatsubaraGrid", "matsubara_frequency", "dimensionless_zeta",
    "characteristic_frequency",
]

EV_TO_RAD_S = 1.519e15
EV_TO_J = HBAR * EV_TO_RAD_S
HARTREE_EV = 27.11
HARTREE_J = HARTREE_EV * EV_TO_J
HARTREE_RAD_S = HARTREE_EV * EV_TO_RAD_S
AU_POLARIZABILITY_M3 = 1.482e-31
# bohr^3 is the polarizability unit, so the length view is its cube root
BOHR_M = AU_POLARIZABILITY_M3 ** (1.0 / 3.0)
C3_AU_SI = HARTREE_J * AU_POLARIZABILITY_M3


def ev_to_rad_s(x):
    return np.multiply(x, EV_TO_RAD_S)


def rad_s_to_ev(x):
    return np.divide(x, EV_TO_RAD_S)


def au_to_rad_s(x):
    return np.multiply(x, HARTREE_RAD_S)


def rad_s_to_au(x):
    return np.divide(x, HARTREE_RAD_S)


def alpha_au_to_m3(x):
    return np.multiply(x, AU_POLARIZABILITY_M3)


def alpha_m3_to_au(x):
    return np.divide(x, AU_POLARIZABILITY_M3)


def c3_si_to_au(x):
    """J m^3 -> Hartree bohr^3."""
    return np.divide(x, C3_AU_SI)


def c3_au_to_si(x):
    return np.multiply(x, C3_AU_SI)


def nm(x):
    return np.multiply(x, 1e-9)


def to_nm(x):
    return np.divide(x, 1e-9)


def bohr_to_m(x):
    return np.multiply(x, BOHR_M)


def m_to_bohr(x):
    return np.divide(x, BOHR_M)


def j_to_ev(x):
    return np.divide(x, EV_TO_J)


def ev_to_j(x):
    return np.multiply(x, EV_TO_J)


def j_to_au(x):
    return np.divide(x, HARTREE_J)


def au_to_j(x):
    return np.multiply(x, HARTREE_J)


def _check_temperature(T):
    if not (T > 0) or not np.isfinite(T):
        raise ValueError(f"temperature must be positive and finite, got {T!r}")


def matsubara_frequency(T, l):
    """Matsubara frequency ``2 pi k_B T l / hbar`` in rad/s.

    ``l`` may be an integer or an integer array.
    """
    _check_temperature(T)
    l = np.asarray(l)
    if np.any(l < 0):
        raise ValueError("Matsubara index must be non-negative")
    xi = (2.0 * np.pi * K_B * T / HBAR) * l
    return float(xi) if xi.ndim == 0 else xi


def characteristic_frequency(a):
    """omega_c = c / (2a) in rad/s."""
    if not a > 0:
        raise ValueError(f"separation must be positive, got {a!r}")
    return C_LIGHT / (2.0 * a)


def dimensionless_zeta(a, xi):
    """zeta = 2 a xi / c = xi / omega_c."""
    if not a > 0:
        raise ValueError(f"separation must be positive, got {a!r}")
    z = np.multiply(2.0 * a / C_LIGHT, xi)
    return float(z) if np.ndim(z) == 0 else z


@dataclass(frozen=True)
class MatsubaraGrid:
    """Matsubara frequencies at temperature ``T`` with a summation cutoff.

    Parameters
    ----------
    temperature : float
        Kelvin.
    rtol : float
        A summation stops once three consecutive terms each contribute
        less than ``rtol`` of the running sum.
    min_terms : int
        Never stop before this many terms (including l = 0).
    max_terms : int
        Hard cap on the number of terms; hitting it is reported, not hidden.
    """

    temperature: float
    rtol: float = 1e-7
    min_terms: int = 10
    max_terms: int = 20000

    def __post_init__(self):
        _check_temperature(self.temperature)
        if self.max_terms < self.min_terms:
            raise ValueError("max_terms must be >= min_terms")

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi * K_B * self.temperature / HBAR

    def xi(self, l):
        return matsubara_frequency(self.temperature, l)

    @property
    def kbt(self) -> float:
        return K_B * self.temperature
