"""Dynamic polarizability of hydrogen on the imaginary frequency axis.

Oscillator sums ``alpha(i xi) = sum_j g_j / (w_j^2 + xi^2)`` evaluated in
atomic units; conversion to SI happens only at the public boundary.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .quantities import HARTREE_EV, alpha_au_to_m3, rad_s_to_au

__all__ = [
    "OscillatorModel", "HYDROGEN_10_OSCILLATOR", "alpha_ixi", "alpha_ixi_au",
    "builtin_models", "single_oscillator", "load_oscillator_csv",
]

# strengths g_j and eigenenergies w_j (a.u.) of the 10-oscillator H atom
HYDROGEN_10_OSCILLATOR = (
    (0.41619993, 0.37500006),
    (0.08803654, 0.44533064),
    (0.08993244, 0.48877611),
    (0.10723836, 0.56134416),
    (0.10489786, 0.68364018),
    (0.08700329, 0.89169023),
    (0.06013601, 1.2698693),
    (0.03259492, 2.0478339),
    (0.01199044, 4.0423429),
    (0.00197021, 12.194172),
)


@dataclass(frozen=True, eq=False)
class OscillatorModel:
    """Sum of oscillators, strengths and energies in atomic units."""

    terms: tuple
    species: str = "particle"

    def __post_init__(self):
        terms = tuple((float(g), float(w)) for g, w in self.terms)
        for g, w in terms:
            if not (g >= 0 and w > 0):
                raise ValueError(f"oscillator needs g >= 0 and w > 0, got ({g}, {w})")
        object.__setattr__(self, "terms", terms)
        g = np.array([t[0] for t in terms])
        w = np.array([t[1] for t in terms])
        g.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "_g", g)
        object.__setattr__(self, "_w", w)

    @property
    def strengths(self):
        return self._g

    @property
    def energies(self):
        return self._w

    @property
    def static_au(self) -> float:
        return float(np.sum(self._g / self._w**2)) if self.terms else 0.0

    @property
    def is_zero(self) -> bool:
        return not np.any(self._g > 0)

    def alpha_au(self, xi_au):
        """alpha(i xi) in a.u. for xi in a.u. of frequency."""
        x = np.asarray(xi_au, dtype=float)
        out = np.zeros_like(x)
        for g, w in self.terms:
            out = out + g / (w * w + x * x)
        return float(out) if out.ndim == 0 else out

    def describe(self):
        return {"species": self.species, "terms_au": [list(t) for t in self.terms]}


def single_oscillator(alpha0_au, omega_ev, species):
    """One-oscillator model with g = alpha(0) w^2, w given in eV."""
    w = omega_ev / HARTREE_EV
    return OscillatorModel(((alpha0_au * w * w, w),), species)


def alpha_ixi_au(model: OscillatorModel, xi):
    """alpha(i xi) in a.u. for xi in rad/s."""
    x = np.asarray(xi, dtype=float)
    if np.any(x < 0):
        raise ValueError("xi must be >= 0")
    return model.alpha_au(rad_s_to_au(x))


def alpha_ixi(model: OscillatorModel, xi):
    """alpha(i xi) in m^3 for xi in rad/s."""
    return alpha_au_to_m3(alpha_ixi_au(model, xi))


def builtin_models() -> dict[str, OscillatorModel]:
    return {
        "H-10osc": OscillatorModel(HYDROGEN_10_OSCILLATOR, "H-10osc"),
        "H-1osc": single_oscillator(4.50, 11.65, "H-1osc"),
        "H2-1osc": single_oscillator(5.439, 14.09, "H2-1osc"),
    }


def load_oscillator_csv(path, species=None):
    """User species from CSV rows ``g_au,omega_au`` (header required)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if line.strip() and not line.startswith("#"))]
    if not rows:
        raise ValueError(f"{path}: empty oscillator file")
    header = [h.strip() for h in rows[0]]
    try:
        ig, iw = header.index("g_au"), header.index("omega_au")
    except ValueError:
        raise ValueError(f"{path}: header must contain g_au and omega_au") from None
    terms = []
    for n, r in enumerate(rows[1:], start=1):
        try:
            terms.append((float(r[ig]), float(r[iw])))
        except (IndexError, ValueError):
            raise ValueError(f"{path}: malformed row {n}: {r!r}") from None
    return OscillatorModel(tuple(terms), species or path.stem)
