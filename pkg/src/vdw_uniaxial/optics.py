"""Tabulated optical data: loading, validation, interpolation, extrapolation specs.

One CSV file per crystal axis.  Canonical headers are ``omega_eV,im_eps``
or ``omega_eV,re_n,im_n``; in the latter case ``Im eps = 2 Re n Im n`` is
computed on load.  A JSON descriptor bundles the two axis files with the
parameters of the low- and high-frequency extrapolations.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "OpticalDataError", "JoiningWarning", "OpticalDataTable", "ExtrapolationSpec",
    "GRAPHITE_EXTRAPOLATION", "load_table", "write_table", "interpolate_im_eps",
    "joining_residuals", "load_descriptor", "DataSet",
]


class OpticalDataError(ValueError):
    """Malformed or physically invalid optical data."""


class JoiningWarning(UserWarning):
    """An extrapolation does not join the tabulated data smoothly."""


@dataclass(frozen=True)
class OpticalDataTable:
    axis: str
    omega: np.ndarray  # eV, strictly increasing
    im_eps: np.ndarray
    re_n: np.ndarray | None = None
    im_n: np.ndarray | None = None
    source: str = ""

    def __post_init__(self):
        if self.axis not in ("x", "z"):
            raise OpticalDataError(f"axis must be 'x' or 'z', got {self.axis!r}")
        om = np.asarray(self.omega, dtype=float)
        ie = np.asarray(self.im_eps, dtype=float)
        if om.ndim != 1 or om.shape != ie.shape:
            raise OpticalDataError("omega and im_eps must be 1-D arrays of equal length")
        if om.size < 2:
            raise OpticalDataError("at least two rows are needed (degenerate window)")
        bad = np.flatnonzero(np.diff(om) <= 0)
        if bad.size:
            raise OpticalDataError(f"frequency not strictly increasing at row {bad[0] + 2}")
        if om[0] <= 0:
            raise OpticalDataError("frequencies must be positive")
        neg = np.flatnonzero(~(ie >= 0))
        if neg.size:
            raise OpticalDataError(f"negative or invalid Im eps at row {neg[0] + 1}")
        om.setflags(write=False)
        ie.setflags(write=False)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "im_eps", ie)
        for name in ("re_n", "im_n"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float)
                v.setflags(write=False)
                object.__setattr__(self, name, v)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.omega[0]), float(self.omega[-1])

    def __len__(self):
        return self.omega.size


_ALIASES = {
    "omega": ("omega_eV", "omega_ev", "omega", "energy_eV", "eV"),
    "im_eps": ("im_eps", "eps2", "Im_eps"),
    "re_n": ("re_n", "n"),
    "im_n": ("im_n", "k", "kappa"),
}


def _resolve_schema(header, schema):
    if schema:
        cols = dict(schema)
    else:
        cols = {}
        for key, names in _ALIASES.items():
            for nm in names:
                if nm in header:
                    cols[key] = nm
                    break
    if "omega" not in cols:
        raise OpticalDataError(f"no frequency column in header {header}")
    if "im_eps" not in cols and not ("re_n" in cols and "im_n" in cols):
        raise OpticalDataError(f"need im_eps or re_n/im_n columns, header {header}")
    for key, nm in cols.items():
        if nm not in header:
            raise OpticalDataError(f"column {nm!r} for {key} not in header {header}")
    return cols


def load_table(path, schema=None, axis=None):
    """Load one axis table from CSV.

    Parameters
    ----------
    path : path-like
    schema : dict, optional
        Maps ``omega``, ``im_eps`` or ``re_n``/``im_n`` to column names.
        Canonical headers are recognised automatically.
    axis : {'x', 'z'}, optional
        Defaults to an ``axis`` comment line (``# axis: z``) or ``'x'``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"optical data file not found: {path}")
    lines = path.read_text().splitlines()
    body = []
    for ln in lines:
        s = ln.strip()
        if s.startswith("#"):
            if axis is None and s[1:].strip().lower().startswith("axis"):
                axis = s.split(":", 1)[-1].strip()
            continue
        if s:
            body.append(ln)
    if not body:
        raise OpticalDataError(f"{path}: empty file")
    reader = csv.reader(body)
    header = [h.strip() for h in next(reader)]
    cols = _resolve_schema(header, schema)
    pos = {k: header.index(v) for k, v in cols.items()}
    data = {k: [] for k in pos}
    for rowno, row in enumerate(reader, start=1):
        try:
            for k, i in pos.items():
                data[k].append(float(row[i]))
        except (IndexError, ValueError) as exc:
            raise OpticalDataError(f"{path}: malformed row {rowno}: {row!r}") from exc
    for k, v in data.items():
        arr = np.asarray(v)
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
            raise OpticalDataError(f"{path}: non-finite {k} at row {bad}")
    omega = np.asarray(data["omega"])
    if "re_n" in data and "im_n" in data:
        re_n = np.asarray(data["re_n"])
        im_n = np.asarray(data["im_n"])
        neg = np.flatnonzero(im_n < 0)
        if neg.size:
            raise OpticalDataError(f"{path}: negative Im n at row {neg[0] + 1}")
        im_eps = 2.0 * re_n * im_n
    else:
        re_n = im_n = None
        im_eps = np.asarray(data["im_eps"])
    if omega.size < 2:
        raise OpticalDataError(f"{path}: at least two rows are needed (degenerate window)")
    try:
        return OpticalDataTable(axis=axis or "x", omega=omega, im_eps=im_eps,
                                re_n=re_n, im_n=im_n, source=str(path))
    except OpticalDataError as exc:
        raise OpticalDataError(f"{path}: {exc}") from None


def write_table(table: OpticalDataTable, path):
    """Write the canonical CSV form (shortest round-trip float repr)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# axis: {table.axis}\n")
        if table.re_n is not None:
            fh.write("omega_eV,re_n,im_n\n")
            for w, n1, n2 in zip(table.omega, table.re_n, table.im_n):
                fh.write(f"{float(w)!r},{float(n1)!r},{float(n2)!r}\n")
        else:
            fh.write("omega_eV,im_eps\n")
            for w, e in zip(table.omega, table.im_eps):
                fh.write(f"{float(w)!r},{float(e)!r}\n")
    return path


def interpolate_im_eps(table: OpticalDataTable, omega):
    """Im eps at ``omega`` (eV) inside the table window.

    Log-log piecewise-linear between nodes, linear where either node
    value is not positive.
    """
    w = np.asarray(omega, dtype=float)
    lo, hi = table.window
    if np.any(w < lo) or np.any(w > hi):
        raise ValueError(f"omega outside tabulated window [{lo}, {hi}] eV")
    om, v = table.omega, table.im_eps
    k = np.clip(np.searchsorted(om, w, side="right") - 1, 0, om.size - 2)
    w0, w1 = om[k], om[k + 1]
    v0, v1 = v[k], v[k + 1]
    pos = (v0 > 0) & (v1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_log = np.log(w / w0) / np.log(w1 / w0)
        loglog = v0 * np.exp(t_log * np.log(v1 / v0))
    lin = v0 + (v1 - v0) * (w - w0) / (w1 - w0)
    out = np.where(pos, loglog, lin)
    # exact node reproduction
    out = np.where(w == w0, v0, out)
    out = np.where(w == w1, v1, out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ExtrapolationSpec:
    """Parameters of the analytic continuations outside the table window.

    High frequencies: ``Im eps = A / omega^3`` per axis (A in eV^3).
    Low frequencies: Drude for x (``omega_p``, ``gamma`` in eV), a
    constant ``eps_z0`` for z.
    """

    A_x: float = 9.60e3
    A_z: float = 3.49e4
    omega_p: float = 1.226
    gamma: float = 0.04
    eps_z0: float = 3.0

    def __post_init__(self):
        for name in ("A_x", "A_z", "omega_p", "gamma"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise OpticalDataError(f"{name} must be positive, got {v!r}")
        if not (self.eps_z0 >= 0 and math.isfinite(self.eps_z0)):
            raise OpticalDataError(f"eps_z0 must be >= 0, got {self.eps_z0!r}")

    def high(self, axis, omega):
        A = self.A_x if axis == "x" else self.A_z
        return A / np.asarray(omega, dtype=float) ** 3

    def low(self, axis, omega):
        w = np.asarray(omega, dtype=float)
        if axis == "x":
            return self.omega_p**2 * self.gamma / (w * (w * w + self.gamma**2))
        return np.full_like(w, self.eps_z0)


GRAPHITE_EXTRAPOLATION = ExtrapolationSpec()


def joining_residuals(table: OpticalDataTable, spec: ExtrapolationSpec, threshold=0.10, warn=True):
    """Relative mismatch of the extrapolations at the window edges.

    Returns ``{'low': r1, 'high': r2}`` with ``r = |extrap - table| / table``
    (``inf`` if the table value is zero and the extrapolation is not).
    Emits :class:`JoiningWarning` for residuals above ``threshold``.
    """
    lo, hi = table.window
    out = {}
    for key, w, tv in (("low", lo, table.im_eps[0]), ("high", hi, table.im_eps[-1])):
        ev = float(spec.low(table.axis, w) if key == "low" else spec.high(table.axis, w))
        if tv == 0:
            r = 0.0 if ev == 0 else math.inf
        else:
            r = abs(ev - tv) / abs(tv)
        out[key] = r
        if warn and r > threshold:
            warnings.warn(
                f"axis {table.axis}: {key}-frequency extrapolation misses the table by "
                f"{100 * r:.1f}% at {w} eV", JoiningWarning, stacklevel=2)
    return out


@dataclass(frozen=True)
class DataSet:
    """Per-axis tables plus extrapolation parameters, as read from a descriptor."""

    table_x: OpticalDataTable
    table_z: OpticalDataTable
    spec: ExtrapolationSpec
    name: str = "dataset"
    residuals: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "name": self.name,
            "x": self.table_x.source,
            "z": self.table_z.source,
            "extrapolation": asdict(self.spec),
        }


def load_descriptor(path, eps_z0=None, warn=True):
    """Read a JSON descriptor::

        {"name": "graphite",
         "x": "graphite_x.csv", "z": "graphite_z.csv",
         "extrapolation": {"A_x": 9.6e3, "A_z": 3.49e4, "omega_p": 1.226,
                           "gamma": 0.04, "eps_z0": 3}}

    File paths are relative to the descriptor.  Missing extrapolation
    fields default to the graphite values.  ``eps_z0`` overrides the
    descriptor's low-frequency z constant.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"descriptor not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise OpticalDataError(f"{path}: invalid JSON ({exc})") from None
    base = path.parent
    tabs = {}
    for axis in ("x", "z"):
        entry = doc.get(axis)
        if entry is None:
            raise OpticalDataError(f"{path}: missing '{axis}' table entry")
        if isinstance(entry, str):
            entry = {"path": entry}
        p = Path(entry["path"])
        if not p.is_absolute():
            p = base / p
        tabs[axis] = load_table(p, schema=entry.get("schema"), axis=axis)
    params = dict(asdict(GRAPHITE_EXTRAPOLATION))
    params.update(doc.get("extrapolation", {}))
    if eps_z0 is not None:
        params["eps_z0"] = eps_z0
    spec = ExtrapolationSpec(**params)
    res = {ax: joining_residuals(t, spec, warn=warn) for ax, t in tabs.items()}
    return DataSet(tabs["x"], tabs["z"], spec, name=doc.get("name", path.stem), residuals=res)
