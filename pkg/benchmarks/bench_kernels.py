"""Compare the compiled and pure-Python Matsubara-term kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the y-integral kernel on batches of Matsubara terms and a complete
C3 evaluation with each backend, and checks that both give the same
numbers.
"""
import argparse
import math
import time
import warnings

import numpy as np

from vdw_uniaxial import kernels
from vdw_uniaxial.permittivity import builtin_materials
from vdw_uniaxial.polarizability import builtin_models
from vdw_uniaxial.quantities import characteristic_frequency, matsubara_frequency
from vdw_uniaxial.reflection import WallGeometry


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_batches(compiled, repeat):
    m = builtin_materials()["uniaxial-test"]
    print(f"{'terms':>6} {'geometry':>10} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'max rel diff':>13}")
    for n in (64, 512, 4096):
        a = 3e-9
        zeta = matsubara_frequency(300.0, np.arange(1, n + 1)) / characteristic_frequency(a)
        ex, ez = m.matsubara_eps(300.0, n)
        for label, thick, shift in (("semispace", math.inf, 0.0), ("shell", 1.0, 0.025)):
            args = (zeta, ex, ez, False, thick, shift, 1e-6)
            tp, (Ip, _) = best_of(lambda: kernels.lifshitz_terms_python(*args), repeat)
            tc, (Ic, _) = best_of(lambda: compiled(*args), repeat)
            diff = float(np.max(np.abs(Ic - Ip) / np.maximum(np.abs(Ip), 1e-300)))
            print(f"{n:>6} {label:>10} {1e3 * tp:>12.2f} {1e3 * tc:>12.2f} {tp / tc:>8.1f} {diff:>13.1e}")


def end_to_end(compiled, repeat):
    from vdw_uniaxial import planar
    from vdw_uniaxial.cylinder import c3_cylinder

    p = builtin_models()["H-1osc"]
    cases = [
        ("ideal metal, 0.5 nm", WallGeometry("semispace", builtin_materials()["ideal-metal"]), 0.5e-9),
        ("uniaxial cylinder, 3 nm",
         WallGeometry("solid-cylinder", builtin_materials()["uniaxial-test"], R=50e-9), 3e-9),
    ]
    print(f"\n{'case':<26} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'C3 (a.u.)':>12}")
    original = kernels.lifshitz_terms
    try:
        for label, wall, a in cases:
            res = {}
            for name, fn in (("python", kernels.lifshitz_terms_python), ("cython", compiled)):
                kernels.lifshitz_terms = fn
                if wall.planar:
                    run = lambda: planar.c3_planar(p, wall, a, 300.0).c3  # noqa: E731
                else:
                    run = lambda: c3_cylinder(p, wall, a, 300.0, with_semispace=False).c3  # noqa: E731
                res[name] = best_of(run, repeat)
            (tp, cp), (tc, cc) = res["python"], res["cython"]
            assert abs(cp / cc - 1) < 1e-12, (cp, cc)
            print(f"{label:<26} {1e3 * tp:>12.1f} {1e3 * tc:>12.1f} {tp / tc:>8.1f} {cc:>12.6f}")
    finally:
        kernels.lifshitz_terms = original


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    compiled = kernels.compiled_lifshitz_terms()
    if compiled is None:
        print("compiled extension not built; only the Python backend is available")
        return 1
    warnings.simplefilter("ignore")
    kernel_batches(compiled, args.repeat)
    end_to_end(compiled, args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
