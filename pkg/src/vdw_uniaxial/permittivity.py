"""Dielectric permittivity on the imaginary frequency axis.

Models take ``xi`` in rad/s and return eps(i xi).  The tabulated model
builds eps(i xi) from Im eps(omega) with the Kramers-Kronig integral split
into a low-frequency extrapolation below the table window, the table
itself, and an ``A / omega^3`` tail above it.  Two evaluation routes exist:
every segment by quadrature (``numeric``) or the two extrapolated
segments in closed form (``closed``).
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

import numpy as np

from .optics import DataSet, ExtrapolationSpec, OpticalDataTable, interpolate_im_eps
from .quadrature import NODES15, WG15, WK15, integrate_batch
from .quantities import EV_TO_RAD_S, matsubara_frequency

__all__ = [
    "StaticKind", "StaticLimit", "PermittivityModel", "Vacuum", "IdealMetal", "Drude",
    "Oscillator", "TabulatedKK", "LowDrude", "LowConstant", "Material",
    "eps_ixi_numeric", "eps_ixi_closed_segments", "eps_static_behavior",
    "builtin_materials", "material_from_dataset", "synthetic_drude_table",
]

KK_RTOL = 1e-7


class StaticKind(enum.Enum):
    FINITE = "finite"
    CONDUCTOR = "diverges-as-conductor"
    DIVERGENT = "diverges"  # slower than 1/xi, e.g. constant Im eps at low frequency
    IDEAL = "ideal-metal"


@dataclass(frozen=True)
class StaticLimit:
    kind: StaticKind
    value: float = np.inf

    @property
    def infinite(self) -> bool:
        return self.kind is not StaticKind.FINITE


def _as_xi(xi):
    x = np.asarray(xi, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("eps(i xi) needs xi > 0; use the static limit at xi = 0")
    return x


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


class PermittivityModel:
    """Base class: ``eps(xi)`` for xi > 0 and the xi -> 0 behaviour."""

    label = "model"
    is_ideal = False

    def eps(self, xi):
        raise NotImplementedError

    def static(self) -> StaticLimit:
        raise NotImplementedError

    def __call__(self, xi):
        return self.eps(xi)

    def describe(self) -> dict:
        return {"variant": type(self).__name__, "label": self.label}


class Vacuum(PermittivityModel):
    label = "vacuum"

    def eps(self, xi):
        x = _as_xi(xi)
        return _ret(np.ones_like(x))

    def static(self):
        return StaticLimit(StaticKind.FINITE, 1.0)


class IdealMetal(PermittivityModel):
    """Perfect conductor.  Engines branch on ``is_ideal``; ``eps`` returns inf."""

    label = "ideal-metal"
    is_ideal = True

    def eps(self, xi):
        x = _as_xi(xi)
        return _ret(np.full_like(x, np.inf))

    def static(self):
        return StaticLimit(StaticKind.IDEAL)


@dataclass(frozen=True, eq=False)
class Drude(PermittivityModel):
    """eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma)); parameters in eV."""

    omega_p: float
    gamma: float
    label: str = "drude"

    def __post_init__(self):
        if not (self.omega_p > 0 and self.gamma > 0):
            raise ValueError("Drude parameters must be positive")

    def eps(self, xi):
        x = _as_xi(xi) / EV_TO_RAD_S
        return _ret(1.0 + self.omega_p**2 / (x * (x + self.gamma)))

    def static(self):
        return StaticLimit(StaticKind.CONDUCTOR)

    def im_eps_real(self, omega):
        w = np.asarray(omega, dtype=float)
        return self.omega_p**2 * self.gamma / (w * (w * w + self.gamma**2))

    def describe(self):
        return {"variant": "Drude", "label": self.label, "omega_p_eV": self.omega_p, "gamma_eV": self.gamma}


@dataclass(frozen=True, eq=False)
class Oscillator(PermittivityModel):
    """eps(i xi) = eps_inf + sum_j s_j w_j^2 / (w_j^2 + xi^2); w_j in eV."""

    terms: tuple = ((1.0, 10.0),)
    eps_inf: float = 1.0
    label: str = "oscillator"

    def __post_init__(self):
        if self.eps_inf < 1:
            raise ValueError("eps_inf < 1 is not supported")
        for s, w in self.terms:
            if not (s >= 0 and w > 0):
                raise ValueError("oscillator strengths must be >= 0 and frequencies > 0")

    def eps(self, xi):
        x = _as_xi(xi) / EV_TO_RAD_S
        out = np.full_like(x, self.eps_inf)
        for s, w in self.terms:
            out = out + s * w * w / (w * w + x * x)
        return _ret(out)

    def static(self):
        return StaticLimit(StaticKind.FINITE, self.eps_inf + sum(s for s, _ in self.terms))

    def describe(self):
        return {"variant": "Oscillator", "label": self.label, "eps_inf": self.eps_inf,
                "terms": [list(t) for t in self.terms]}


@dataclass(frozen=True)
class LowDrude:
    omega_p: float
    gamma: float

    def im_eps(self, w):
        return self.omega_p**2 * self.gamma / (w * (w * w + self.gamma**2))


@dataclass(frozen=True)
class LowConstant:
    value: float

    def im_eps(self, w):
        return np.full_like(np.asarray(w, dtype=float), self.value)


def _middle_segment(table: OpticalDataTable, xi_ev, rtol=KK_RTOL, max_level=8, block=2_000_000):
    """(2/pi) int_{W1}^{W2} w Im eps(w) / (w^2 + xi^2) dw for many xi.

    Integrated in u = ln w on the table intervals (the interpolant is
    smooth inside each), bisecting every panel until the Kronrod-Gauss
    estimate meets ``rtol`` for all xi.
    """
    xi2 = np.asarray(xi_ev, dtype=float) ** 2
    u_edges = np.log(table.omega)
    value = np.zeros_like(xi2)
    for level in range(max_level + 1):
        lo, hi = u_edges[:-1], u_edges[1:]
        half = 0.5 * (hi - lo)
        u = (0.5 * (hi + lo))[:, None] + half[:, None] * NODES15
        w = np.exp(u)
        w2 = w * w
        g = w2 * interpolate_im_eps(table, np.clip(w, table.omega[0], table.omega[-1]))
        gk = (g * WK15 * half[:, None]).ravel()
        gd = (g * (WK15 - WG15) * half[:, None])
        w2f = w2.ravel()
        err = np.zeros_like(xi2)
        npan = half.size
        chunk = max(1, block // w2f.size)
        for s in range(0, xi2.size, chunk):
            ker = 1.0 / (w2f[None, :] + xi2[s:s + chunk, None])
            value[s:s + chunk] = ker @ gk
            diff = (ker.reshape(-1, npan, 15) * gd[None]).sum(axis=2)
            err[s:s + chunk] = np.abs(diff).sum(axis=1)
        if np.all(err <= rtol * np.abs(value)) or level == max_level:
            break
        mid = 0.5 * (lo + hi)
        nxt = np.empty(2 * u_edges.size - 1)
        nxt[0::2] = u_edges
        nxt[1::2] = mid
        u_edges = nxt
    return (2.0 / np.pi) * value


def _low_numeric(low, w1, xi_ev, rtol=KK_RTOL):
    x = np.asarray(xi_ev, dtype=float)
    if isinstance(low, LowConstant) and low.value == 0:
        return np.zeros_like(x)
    frac = np.array([0.0, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0])
    edges = np.broadcast_to(frac * w1, (x.size, frac.size))

    def f(idx, w):
        xx = x[idx][:, None, None]
        return w * low.im_eps(w) / (w * w + xx * xx)

    val, _, _ = integrate_batch(f, edges, rtol=rtol * 1e-2, max_level=10)
    return (2.0 / np.pi) * val


def _high_numeric(A, w2, xi_ev, rtol=KK_RTOL):
    # omega = w2 / u maps [w2, inf) onto (0, 1]
    x = np.asarray(xi_ev, dtype=float)
    if A == 0:
        return np.zeros_like(x)
    frac = np.array([0.0, 1e-3, 1e-2, 0.03, 0.1, 0.2, 0.4, 0.7, 1.0])
    edges = np.broadcast_to(frac, (x.size, frac.size))

    def f(idx, u):
        xx = x[idx][:, None, None]
        return A * u * u / (w2 * (w2 * w2 + xx * xx * u * u))

    val, _, _ = integrate_batch(f, edges, rtol=rtol * 1e-2, max_level=10)
    return (2.0 / np.pi) * val


def _low_closed(low, w1, xi_ev):
    x = np.asarray(xi_ev, dtype=float)
    if isinstance(low, LowConstant):
        return (low.value / np.pi) * np.log1p((w1 / x) ** 2)
    g = low.gamma
    wp2 = low.omega_p**2
    with np.errstate(invalid="ignore", divide="ignore"):
        gen = (x * np.arctan(w1 / g) - g * np.arctan(w1 / x)) / (x * (x * x - g * g))
    # removable singularity at xi = gamma
    at_g = (np.arctan(w1 / g) + g * w1 / (w1 * w1 + g * g)) / (2.0 * g**3) * g
    near = np.abs(x - g) <= 1e-6 * g
    return (2.0 / np.pi) * wp2 * np.where(near, at_g, gen)


def _high_closed(A, w2, xi_ev):
    x = np.asarray(xi_ev, dtype=float)
    r = x / w2
    small = r < 1e-2
    with np.errstate(invalid="ignore", divide="ignore"):
        gen = (A / x**2) * (2.0 / (np.pi * w2) + (1.0 / x) * ((2.0 / np.pi) * np.arctan(w2 / x) - 1.0))
    # (A/xi^2)(2/pi)(1/w2)(1 - atan(r)/r) expanded for small r
    r2 = r * r
    series = (2.0 / np.pi) * A / w2**3 * (1.0 / 3 - r2 / 5 + r2 * r2 / 7 - r2**3 / 9 + r2**4 / 11)
    return np.where(small, series, gen)


class TabulatedKK(PermittivityModel):
    """Kramers-Kronig permittivity from one axis table plus extrapolations.

    Parameters
    ----------
    table : OpticalDataTable
    low : LowDrude or LowConstant
        Im eps below the table window.
    high_amplitude : float
        A in ``Im eps = A / omega^3`` above the window (eV^3).
    method : {'closed', 'numeric'}
        How the extrapolated segments are integrated.
    """

    def __init__(self, table, low, high_amplitude, method="closed", label=None):
        if method not in ("closed", "numeric"):
            raise ValueError("method must be 'closed' or 'numeric'")
        if high_amplitude < 0:
            raise ValueError("high-frequency amplitude must be >= 0")
        self.table = table
        self.low = low
        self.A = float(high_amplitude)
        self.method = method
        self.label = label or f"tabulated-{table.axis}"

    @classmethod
    def from_spec(cls, table, spec: ExtrapolationSpec, method="closed"):
        if table.axis == "x":
            low = LowDrude(spec.omega_p, spec.gamma)
            A = spec.A_x
        else:
            low = LowConstant(spec.eps_z0)
            A = spec.A_z
        return cls(table, low, A, method=method)

    def with_method(self, method):
        return TabulatedKK(self.table, self.low, self.A, method=method, label=self.label)

    def segments(self, xi, method=None):
        """(low, middle, high) contributions to eps(i xi) - 1."""
        method = method or self.method
        x = _as_xi(xi) / EV_TO_RAD_S
        xa = np.atleast_1d(x)
        w1, w2 = self.table.window
        mid = _middle_segment(self.table, xa)
        if method == "closed":
            lo = _low_closed(self.low, w1, xa)
            hi = _high_closed(self.A, w2, xa)
        else:
            lo = _low_numeric(self.low, w1, xa)
            hi = _high_numeric(self.A, w2, xa)
        return lo, mid, hi

    def eps(self, xi):
        lo, mid, hi = self.segments(xi)
        out = 1.0 + lo + mid + hi
        return _ret(out.reshape(np.shape(xi)))

    def static(self):
        if isinstance(self.low, LowDrude):
            return StaticLimit(StaticKind.CONDUCTOR)
        if self.low.value > 0:
            return StaticLimit(StaticKind.DIVERGENT)
        # xi = 0: middle integrand Im eps / w, tail A / (3 W2^3)
        w1, w2 = self.table.window
        mid = float(_middle_segment(self.table, np.array([0.0]))[0])
        return StaticLimit(StaticKind.FINITE, 1.0 + mid + (2.0 / np.pi) * self.A / (3.0 * w2**3))

    def describe(self):
        low = ({"drude": {"omega_p_eV": self.low.omega_p, "gamma_eV": self.low.gamma}}
               if isinstance(self.low, LowDrude) else {"constant": self.low.value})
        return {"variant": "TabulatedKK", "label": self.label, "axis": self.table.axis,
                "source": self.table.source, "window_eV": list(self.table.window),
                "low": low, "A_eV3": self.A, "method": self.method, "rows": len(self.table)}


def eps_ixi_numeric(model: TabulatedKK, xi):
    """All three Kramers-Kronig segments by quadrature."""
    if not isinstance(model, TabulatedKK):
        raise TypeError("eps_ixi_numeric needs a TabulatedKK model")
    lo, mid, hi = model.segments(xi, method="numeric")
    return _ret((1.0 + lo + mid + hi).reshape(np.shape(xi)))


def eps_ixi_closed_segments(model: TabulatedKK, xi):
    """Extrapolated segments in closed form, table segment by quadrature."""
    if not isinstance(model, TabulatedKK):
        raise TypeError("eps_ixi_closed_segments needs a TabulatedKK model")
    lo, mid, hi = model.segments(xi, method="closed")
    return _ret((1.0 + lo + mid + hi).reshape(np.shape(xi)))


def eps_static_behavior(model: PermittivityModel) -> StaticLimit:
    return model.static()


class _MatsubaraCache:
    """Per-model memo of eps(i xi_l), l >= 1, grown on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict[tuple[int, float], tuple] = {}

    def get(self, model, T, n):
        key = (id(model), float(T))
        with self._lock:
            entry = self._store.get(key)
            # the model is kept alive by the entry, so its id cannot be reused
            have = entry[1] if entry is not None and entry[0] is model else None
            if have is not None and have.size >= n:
                return have[:n]
            start = 0 if have is None else have.size
            new_n = max(n, 2 * start)
            ls = np.arange(start + 1, new_n + 1)
            vals = np.asarray(model.eps(matsubara_frequency(T, ls)), dtype=float).reshape(-1)
            full = vals if have is None else np.concatenate([have, vals])
            full.setflags(write=False)
            self._store[key] = (model, full)
            return full[:n]

    def clear(self):
        with self._lock:
            self._store.clear()


MATSUBARA_CACHE = _MatsubaraCache()


@dataclass(frozen=True, eq=False)
class Material:
    """A (possibly uniaxial) wall material: ordinary (x) and extraordinary (z) axes."""

    eps_x: PermittivityModel
    eps_z: PermittivityModel
    name: str = "material"

    def __post_init__(self):
        if self.eps_x.is_ideal != self.eps_z.is_ideal:
            raise ValueError("ideal-metal must be used on both axes")

    @classmethod
    def isotropic(cls, model, name=None):
        return cls(model, model, name or model.label)

    @property
    def is_isotropic(self) -> bool:
        return self.eps_x is self.eps_z

    @property
    def is_ideal(self) -> bool:
        return self.eps_x.is_ideal

    @property
    def is_vacuum(self) -> bool:
        return isinstance(self.eps_x, Vacuum) and isinstance(self.eps_z, Vacuum)

    def eps(self, xi):
        return self.eps_x.eps(xi), self.eps_z.eps(xi)

    def matsubara_eps(self, T, n):
        """eps_x, eps_z at xi_1 .. xi_n (memoized per temperature)."""
        if self.is_ideal:
            inf = np.full(n, np.inf)
            return inf, inf
        ex = MATSUBARA_CACHE.get(self.eps_x, T, n)
        ez = ex if self.eps_z is self.eps_x else MATSUBARA_CACHE.get(self.eps_z, T, n)
        return ex, ez

    def static_pair(self):
        """Static permittivities for the zero-frequency term (inf when divergent)."""
        sx, sz = self.eps_x.static(), self.eps_z.static()
        return (np.inf if sx.infinite else sx.value), (np.inf if sz.infinite else sz.value)

    def describe(self):
        return {"name": self.name, "x": self.eps_x.describe(), "z": self.eps_z.describe()}


# Drude parameters of the in-plane graphite low-frequency continuation
TEST_DRUDE = Drude(1.226, 0.04, label="drude-test")


def builtin_materials() -> dict[str, Material]:
    """Materials available without optical data.

    ``drude-test`` is an isotropic Drude metal with omega_p = 1.226 eV and
    gamma = 0.04 eV; ``dielectric-test`` a single-oscillator insulator
    (static eps 3, resonance 10 eV); ``uniaxial-test`` combines them as
    (x, z) axes.
    """
    return dict(_BUILTIN)


_DIELECTRIC_TEST = Oscillator(((2.0, 10.0),), label="dielectric-test")
# shared instances, so the Matsubara cache is reused across calls
_BUILTIN = {
    "vacuum": Material.isotropic(Vacuum(), "vacuum"),
    "ideal-metal": Material.isotropic(IdealMetal(), "ideal-metal"),
    "drude-test": Material.isotropic(TEST_DRUDE, "drude-test"),
    "dielectric-test": Material.isotropic(_DIELECTRIC_TEST, "dielectric-test"),
    "uniaxial-test": Material(TEST_DRUDE, _DIELECTRIC_TEST, "uniaxial-test"),
}


def material_from_dataset(ds: DataSet, method="closed") -> Material:
    return Material(TabulatedKK.from_spec(ds.table_x, ds.spec, method),
                    TabulatedKK.from_spec(ds.table_z, ds.spec, method), ds.name)


def synthetic_drude_table(omega_p=1.226, gamma=0.04, window=(0.02, 40.0), n=2000, axis="x"):
    """Dense log-spaced table of a Drude Im eps with matching extrapolations.

    Returns ``(table, model)`` where ``model`` is the tabulated-KK model
    whose exact continuation is ``1 + omega_p^2 / (xi (xi + gamma))``.
    """
    w = np.geomspace(window[0], window[1], n)
    im = omega_p**2 * gamma / (w * (w * w + gamma**2))
    table = OpticalDataTable(axis=axis, omega=w, im_eps=im, source="synthetic-drude")
    model = TabulatedKK(table, LowDrude(omega_p, gamma), omega_p**2 * gamma, label="synthetic-drude")
    return table, model
