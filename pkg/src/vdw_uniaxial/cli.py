"""Command-line front end.

Every command reads an optional JSON scenario (``--config``); explicit
command-line flags override config fields, which override built-in
defaults.  Results go to ``--out`` as CSV (stdout if omitted) with a
``<out>.meta.json`` sidecar holding the resolved scenario and run
diagnostics at full precision.

Exit codes: 0 success, 1 numeric failure, 2 input failure.
"""
from __future__ import annotations

import argparse
import copy
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .cylinder import c3_cylinder
from .optics import OpticalDataError, load_descriptor
from .pairwise import SemispaceC3, inside_outside_difference, interior_transect
from .permittivity import builtin_materials, material_from_dataset
from .planar import c3_planar
from .polarizability import builtin_models, load_oscillator_csv
from .quantities import MatsubaraGrid, matsubara_frequency, rad_s_to_au
from .reflection import WallGeometry
from .validation import analytic_fixtures, run_fixtures, table1_fixtures, table2_fixtures

EXIT_OK, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2

DEFAULTS = {
    "particle": "H-1osc",
    "material": "drude-test",
    "temperature": 300.0,
    "geometry": {"kind": "semispace"},
    "scan": {"variable": "a", "values": [3, 5, 10, 20, 30, 40, 50]},
    "eps": {"grid": "matsubara", "n": 2000},
    "nanotube": {"mode": "transect", "R0_nm": 10.0, "R_nm": 50.0, "a_nm": 3.0,
                 "fixed": "R0", "exterior": "lifshitz"},
}


class InputError(Exception):
    """Bad configuration or unreadable input files (exit code 2)."""


# --------------------------------------------------------------------------
# configuration

GRID_KEYS = ("values", "start", "stop", "step", "log")


def _merge(base, over):
    out = copy.deepcopy(base)
    if any(k in over for k in GRID_KEYS):
        # a grid given in the override replaces the base grid, whatever its form
        for k in GRID_KEYS:
            out.pop(k, None)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path):
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise InputError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InputError(f"{p}: top level must be a JSON object")
    base = p.parent
    # resolve relative file references against the config location
    for key in ("material", "particle"):
        v = doc.get(key)
        if isinstance(v, dict):
            for fk in ("descriptor", "csv"):
                if fk in v and not Path(v[fk]).is_absolute():
                    v[fk] = str(base / v[fk])
    return doc


def resolve_config(args):
    cfg = _merge(DEFAULTS, load_config(args.config))
    if args.temperature is not None:
        cfg["temperature"] = args.temperature
    if args.eps_z_variant is not None:
        cfg["eps_z_variant"] = args.eps_z_variant
    for key in ("particle", "material"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    return cfg


def _positive(x, what):
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a number, got {x!r}") from None
    if not (math.isfinite(x) and x > 0):
        raise InputError(f"{what} must be positive and finite, got {x}")
    return x


def resolve_grid(spec, what="scan"):
    """Explicit ``values``, ``{start, stop, step}`` or ``{log: [lo, hi, n]}``."""
    if spec is None:
        return []
    if isinstance(spec, list):
        vals = spec
    elif sum(k in spec for k in ("values", "log", "start")) > 1:
        raise InputError(f"{what}: give only one of 'values', 'log' or 'start/stop/step'")
    elif "values" in spec:
        vals = spec["values"]
    elif "log" in spec:
        lo, hi, n = spec["log"]
        vals = list(np.geomspace(float(lo), float(hi), int(n))) if int(n) > 0 else []
    elif "start" in spec:
        start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        if step <= 0:
            raise InputError(f"{what}: step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        vals = [start + i * step for i in range(max(n, 0))]
    else:
        raise InputError(f"{what}: need 'values', 'log' or 'start/stop/step'")
    out = [float(v) for v in vals]
    if any(not math.isfinite(v) for v in out):
        raise InputError(f"{what}: grid values must be finite")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise InputError(f"{what}: grid must be strictly increasing")
    return out


def resolve_particle(ref):
    models = builtin_models()
    if isinstance(ref, str):
        if ref not in models:
            raise InputError(f"unknown particle {ref!r}; choose from {', '.join(models)}")
        return models[ref]
    if isinstance(ref, dict) and "csv" in ref:
        return load_oscillator_csv(ref["csv"], species=ref.get("species"))
    raise InputError(f"cannot interpret particle reference {ref!r}")


def resolve_material(ref, variant=None):
    if isinstance(ref, str):
        mats = builtin_materials()
        if ref in mats:
            return mats[ref]
        if ref.endswith(".json"):
            ref = {"descriptor": ref}
        else:
            raise InputError(f"unknown material {ref!r}; choose from {', '.join(mats)} "
                             "or give an optical-data descriptor (.json)")
    if isinstance(ref, dict) and "descriptor" in ref:
        eps_z0 = {"const3": 3.0, "const0": 0.0, None: None}[variant]
        ds = load_descriptor(ref["descriptor"], eps_z0=eps_z0)
        return material_from_dataset(ds, method=ref.get("method", "closed"))
    raise InputError(f"cannot interpret material reference {ref!r}")


# --------------------------------------------------------------------------
# output

def fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if v == 0:
        return "0"
    return f"{v:.6g}"


def csv_text(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


def svg_chart(header, rows, title=""):
    """Minimal static line chart of the second CSV column against the first."""
    W, H, m = 640, 400, 60
    # only the first value column: the others usually have unrelated scales
    cols = [1] if len(header) > 1 and rows and all(
        isinstance(r[1], (int, float, np.floating, np.integer)) for r in rows) else []
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}">',
             '<rect width="100%" height="100%" fill="white"/>',
             f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{m}" y1="{H - m}" x2="{W - m}" y2="{H - m}" stroke="black"/>',
             f'<line x1="{m}" y1="{m}" x2="{m}" y2="{H - m}" stroke="black"/>']
    if rows and cols:
        x = np.array([float(r[0]) for r in rows])
        ys = np.array([[float(r[j]) for r in rows] for j in cols])
        x0, x1 = x.min(), x.max()
        y0, y1 = np.nanmin(ys), np.nanmax(ys)
        x1 = x1 if x1 > x0 else x0 + 1
        y1 = y1 if y1 > y0 else y0 + 1
        colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
        for k, j in enumerate(cols):
            pts = " ".join(
                f"{m + (xi - x0) / (x1 - x0) * (W - 2 * m):.2f},"
                f"{H - m - (yi - y0) / (y1 - y0) * (H - 2 * m):.2f}"
                for xi, yi in zip(x, ys[k]))
            c = colors[k % len(colors)]
            parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
            parts.append(f'<text x="{W - m}" y="{m + 14 * k}" text-anchor="end" '
                         f'font-size="11" fill="{c}">{header[j]}</text>')
        parts.append(f'<text x="{m}" y="{H - m + 16}" font-size="10">{fmt(x0)}</text>')
        parts.append(f'<text x="{W - m}" y="{H - m + 16}" text-anchor="end" font-size="10">{fmt(x1)}</text>')
        parts.append(f'<text x="{m - 4}" y="{H - m}" text-anchor="end" font-size="10">{fmt(y0)}</text>')
        parts.append(f'<text x="{m - 4}" y="{m + 4}" text-anchor="end" font-size="10">{fmt(y1)}</text>')
    parts.append(f'<text x="{W / 2}" y="{H - 15}" text-anchor="middle" font-size="12">{header[0]}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def emit(args, command, cfg, header, rows, meta, suffix=""):
    """Write CSV (+ sidecar, + optional SVG); stdout when no --out is given."""
    text = csv_text(header, rows)
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    if suffix:
        out = out.with_name(f"{out.stem}{suffix}{out.suffix or '.csv'}")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        fh.write(text)
    side = {"command": command, "version": __version__, "backend": kernels.BACKEND,
            "config": cfg, "columns": header, **meta}
    Path(str(out) + ".meta.json").write_text(json.dumps(_jsonable(side), indent=2, sort_keys=True) + "\n")
    if args.svg:
        out.with_suffix(".svg").write_text(svg_chart(header, rows, title=f"{command} {out.stem}"))
    print(f"wrote {out} ({len(rows)} rows)", file=sys.stderr)


# --------------------------------------------------------------------------
# commands

def _xi_grid(cfg, T):
    e = cfg.get("eps", {})
    if e.get("grid", "matsubara") == "matsubara":
        n = int(e.get("n", 2000))
        if n < 0:
            raise InputError("eps.n must be non-negative")
        return matsubara_frequency(T, np.arange(1, n + 1)) if n else np.zeros(0)
    return np.asarray(resolve_grid(e, "eps grid"))


def cmd_eps(args, cfg):
    T = _positive(cfg["temperature"], "temperature")
    mat = resolve_material(cfg["material"], cfg.get("eps_z_variant"))
    xi = _xi_grid(cfg, T)
    if xi.size and not mat.is_ideal:
        ex, ez = mat.eps(xi)
        ex = np.broadcast_to(ex, xi.shape)
        ez = np.broadcast_to(ez, xi.shape)
    else:
        ex = ez = np.full(xi.shape, np.inf)
    rows = [(float(a), float(b), float(c)) for a, b, c in zip(xi, ex, ez)]
    emit(args, "eps", cfg, ["xi_rad_s", "eps_x", "eps_z"], rows,
         {"material": mat.describe(), "static": [str(v) for v in mat.static_pair()]})
    return EXIT_OK


def cmd_alpha(args, cfg):
    T = _positive(cfg["temperature"], "temperature")
    p = resolve_particle(cfg["particle"])
    xi = _xi_grid(cfg, T)
    al = p.alpha_au(rad_s_to_au(xi)) if xi.size else np.zeros(0)
    rows = [(float(a), float(b)) for a, b in zip(xi, al)]
    emit(args, "alpha", cfg, ["xi_rad_s", "alpha_au"], rows,
         {"particle": p.describe(), "alpha0_au": p.static_au})
    return EXIT_OK


def _wall(geom, mat, R_nm=None, d_nm=None):
    kind = geom.get("kind", "semispace")
    R = geom.get("R_nm") if R_nm is None else R_nm
    d = geom.get("d_nm") if d_nm is None else d_nm
    try:
        return WallGeometry(kind, mat, d=None if d is None else float(d) * 1e-9,
                            R=None if R is None else float(R) * 1e-9)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _compute(p, wall, a, T, grid):
    if wall.planar:
        return c3_planar(p, wall, a, T, grid=grid)
    return c3_cylinder(p, wall, a, T, grid=grid)


def cmd_c3(args, cfg):
    T = _positive(cfg["temperature"], "temperature")
    p = resolve_particle(cfg["particle"])
    mat = resolve_material(cfg["material"], cfg.get("eps_z_variant"))
    geom = cfg.get("geometry", {})
    scan = cfg.get("scan", {})
    var = scan.get("variable", "a")
    grid_vals = resolve_grid(scan, "scan")
    grid = MatsubaraGrid(T, rtol=float(cfg.get("matsubara_rtol", 1e-7)))
    if var == "a":
        wall = _wall(geom, mat)
        cyl = not wall.planar
        header = ["a_nm", "C3_au", "F_J", "n_terms"]
        if cyl:
            header += ["C3_semispace_au", "delta_pct", "validity"]
        rows, diags = [], []
        for a_nm in grid_vals:
            r = _compute(p, wall, _positive(a_nm, "a_nm") * 1e-9, T, grid)
            row = [a_nm, r.c3, r.free_energy, r.diagnostics.n_terms]
            if cyl:
                row += [r.c3_semispace, 100.0 * r.delta_vs_semispace, r.validity]
            rows.append(row)
            diags.append({"a_nm": a_nm, "c3_au": r.c3, **r.diagnostics.as_dict()})
        emit(args, "c3", cfg, header, rows, {"results": diags, "wall": wall.describe(),
                                             "particle": p.describe()})
        return EXIT_OK
    if var in ("R", "d"):
        seps = geom.get("a_nm", scan.get("a_nm", 3.0))
        seps = seps if isinstance(seps, list) else [seps]
        for a_nm in seps:
            a = _positive(a_nm, "a_nm") * 1e-9
            rows, diags = [], []
            for v in grid_vals:
                if var == "R":
                    wall = _wall(geom, mat, R_nm=v)
                else:
                    wall = _wall(geom, mat, d_nm=v)
                r = _compute(p, wall, a, T, grid)
                rows.append([v, r.c3])
                diags.append({f"{var}_nm": v, "c3_au": r.c3, **r.diagnostics.as_dict()})
            suffix = f"_a{fmt(a_nm)}nm" if len(seps) > 1 else ""
            emit(args, "c3", cfg, [f"{var}_nm", "C3_au"], rows,
                 {"a_nm": a_nm, "results": diags, "particle": p.describe()}, suffix=suffix)
        return EXIT_OK
    raise InputError(f"c3 scan variable must be 'a', 'R' or 'd', got {var!r}")


def cmd_nanotube(args, cfg):
    T = _positive(cfg["temperature"], "temperature")
    p = resolve_particle(cfg["particle"])
    mat = resolve_material(cfg["material"], cfg.get("eps_z_variant"))
    nt = cfg.get("nanotube", {})
    mode = nt.get("mode", "transect")
    c3s = SemispaceC3(p, mat, T)
    if mode == "transect":
        R0 = _positive(nt.get("R0_nm", 10.0), "R0_nm")
        R = _positive(nt.get("R_nm", 50.0), "R_nm")
        if R <= R0:
            raise InputError("R_nm must exceed R0_nm")
        margin = float(nt.get("margin_nm", 3.0))
        spec = nt.get("positions", {"start": margin, "stop": 2 * R0 - margin,
                                    "step": nt.get("step_nm", 0.5)})
        pos = resolve_grid(spec, "positions")
        if any(not 0 < x < 2 * R0 for x in pos):
            raise InputError("transect positions must lie strictly inside the cavity")
        tr = interior_transect(p, mat, R0 * 1e-9, (R - R0) * 1e-9, T, [x * 1e-9 for x in pos], c3s=c3s)
        rows = [(x, F) for x, (_, F) in zip(pos, tr)]
        emit(args, "nanotube", cfg, ["position_nm", "F_J"], rows,
             {"R0_nm": R0, "R_nm": R, "particle": p.describe()})
        return EXIT_OK
    if mode == "difference":
        a = _positive(nt.get("a_nm", 3.0), "a_nm") * 1e-9
        fixed = nt.get("fixed", "R0")
        d_vals = resolve_grid(nt.get("d", {"start": 3, "stop": 40, "step": 1}), "d grid")
        rows = []
        for d_nm in d_vals:
            d = _positive(d_nm, "d_nm") * 1e-9
            if fixed == "R0":
                R0 = _positive(nt.get("R0_nm", 10.0), "R0_nm") * 1e-9
            elif fixed == "R":
                R0 = _positive(nt.get("R_nm", 50.0), "R_nm") * 1e-9 - d
                if R0 <= a / 2:
                    raise InputError(f"d = {d_nm} nm leaves no cavity for R = {nt.get('R_nm')} nm")
            else:
                raise InputError("nanotube.fixed must be 'R0' or 'R'")
            dF = inside_outside_difference(p, mat, R0, d, a, T, exterior=nt.get("exterior", "lifshitz"),
                                           c3s=c3s)
            rows.append((d_nm, dF))
        emit(args, "nanotube", cfg, ["d_nm", "deltaF_J"], rows,
             {"fixed": fixed, "a_nm": a * 1e9, "particle": p.describe()})
        return EXIT_OK
    raise InputError(f"nanotube mode must be 'transect' or 'difference', got {mode!r}")


def cmd_validate_data(args, cfg):
    fixtures = table1_fixtures() + analytic_fixtures()
    ctx = {}
    desc = args.descriptor or (cfg.get("material", {}).get("descriptor")
                               if isinstance(cfg.get("material"), dict) else None)
    if desc:
        ctx["material"] = resolve_material({"descriptor": desc}, cfg.get("eps_z_variant") or "const3")
        fixtures += table2_fixtures()
    outcomes = run_fixtures(fixtures, ctx)
    lines = [o.line() for o in outcomes]
    if not desc:
        lines.append("SKIP table2: no optical dataset supplied (pass a descriptor)")
    n_fail = sum(not o.passed for o in outcomes)
    lines.append(f"{len(outcomes) - n_fail}/{len(outcomes)} fixtures passed")
    report = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(report)
    sys.stdout.write(report)
    return EXIT_OK if n_fail == 0 else EXIT_NUMERIC


# --------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--temperature", type=float, help="temperature in K (overrides config)")
    common.add_argument("--svg", action="store_true", help="also write an SVG line chart")
    common.add_argument("--eps-z-variant", choices=["const3", "const0"],
                        help="low-frequency Im eps_z below the data window: 3 or 0")

    ap = argparse.ArgumentParser(prog="vdw-uniaxial", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("eps", parents=[common], help="permittivity on the imaginary axis")
    s.add_argument("--material")
    s = sub.add_parser("alpha", parents=[common], help="dynamic polarizability alpha(i xi)")
    s.add_argument("--particle")
    for name, hlp in (("c3", "C3 scans for planar and cylindrical walls"),
                      ("nanotube", "interior transect or exterior-minus-interior scans")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--particle")
        s.add_argument("--material")
    s = sub.add_parser("validate-data", parents=[common], help="run golden-number fixtures")
    s.add_argument("descriptor", nargs="?", help="optical-data descriptor JSON")
    return ap


COMMANDS = {"eps": cmd_eps, "alpha": cmd_alpha, "c3": cmd_c3, "nanotube": cmd_nanotube,
            "validate-data": cmd_validate_data}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args, cfg)
    except (InputError, OpticalDataError, FileNotFoundError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
