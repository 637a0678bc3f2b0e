import math
import warnings

import numpy as np
import pytest

from vdw_uniaxial.planar import (
    ContinuumWarning, c3_planar, lifshitz_c3_sum, two_body_force_per_area,
    two_body_free_energy_per_area,
)
from vdw_uniaxial.quantities import C3_AU_SI, HBAR, C_LIGHT, MatsubaraGrid
from vdw_uniaxial.reflection import WallGeometry
from vdw_uniaxial.validation import oracle_ideal_metal_c3, oracle_isotropic_c3


def semi(m):
    return WallGeometry("semispace", m)


@pytest.mark.parametrize("name", ["drude-test", "dielectric-test", "ideal-metal"])
@pytest.mark.parametrize("a, d", [(3e-9, None), (30e-9, 5e-9)])
def test_matches_physical_variable_oracle(materials, hydrogen, name, a, d):
    m = materials[name]
    wall = semi(m) if d is None else WallGeometry("plate", m, d=d)
    got = c3_planar(hydrogen, wall, a, 300.0).c3
    ref = oracle_isotropic_c3(hydrogen, m, a, 300.0, d=d)
    # the residual is the tail dropped by the 1e-7 per-term stopping rule
    assert got == pytest.approx(ref, rel=5e-5)


def test_nonretarded_ideal_metal_limit(materials, models):
    for name in ("H-1osc", "H2-1osc"):
        p = models[name]
        got = c3_planar(p, semi(materials["ideal-metal"]), 0.5e-9, 300.0).c3
        assert got == pytest.approx(oracle_ideal_metal_c3(p), rel=0.03)


def test_diagnostics(materials, hydrogen):
    res = c3_planar(hydrogen, semi(materials["drude-test"]), 10e-9, 300.0)
    d = res.diagnostics
    assert d.tail_estimate < d.tolerance == 1e-7
    assert d.n_terms >= 10 and not d.cap_hit
    assert res.free_energy == pytest.approx(-res.c3 * C3_AU_SI / (10e-9) ** 3)
    assert res.c3_si == pytest.approx(res.c3 * C3_AU_SI)


def test_cap_is_reported(materials, hydrogen):
    grid = MatsubaraGrid(300.0, max_terms=50)
    with pytest.warns(RuntimeWarning, match="cap"):
        c3, diag = lifshitz_c3_sum(hydrogen, materials["ideal-metal"], 1e-9, 300.0, grid=grid)
    assert diag.cap_hit and diag.n_terms == 50


def test_vacuum_and_zero_particle(materials, hydrogen):
    from vdw_uniaxial.polarizability import OscillatorModel

    assert c3_planar(hydrogen, semi(materials["vacuum"]), 5e-9, 300.0).c3 == 0.0
    zero = OscillatorModel(((0.0, 0.5),), "zero")
    assert c3_planar(zero, semi(materials["drude-test"]), 5e-9, 300.0).c3 == 0.0


def test_continuum_warning(materials, hydrogen):
    with warnings.catch_warnings():
        warnings.simplefilter("error", ContinuumWarning)
        with pytest.raises(ContinuumWarning):
            c3_planar(hydrogen, semi(materials["drude-test"]), 1e-9, 300.0)


def test_bad_inputs(materials, hydrogen):
    with pytest.raises(ValueError):
        c3_planar(hydrogen, semi(materials["drude-test"]), -1e-9, 300.0)
    with pytest.raises(ValueError):
        c3_planar(hydrogen, semi(materials["drude-test"]), 5e-9, 0.0)
    with pytest.raises(ValueError):
        c3_planar(hydrogen, WallGeometry("solid-cylinder", materials["drude-test"], R=1e-8), 5e-9, 300.0)


def test_c3_decreases_with_separation_and_plate_below_semispace(materials, hydrogen):
    m = materials["uniaxial-test"]
    c = [c3_planar(hydrogen, semi(m), a * 1e-9, 300.0).c3 for a in (3, 10, 30, 100)]
    assert all(x > y for x, y in zip(c, c[1:]))
    plates = [c3_planar(hydrogen, WallGeometry("plate", m, d=d * 1e-9), 10e-9, 300.0).c3
              for d in (1, 3, 10, 100)]
    assert all(x < y for x, y in zip(plates, plates[1:]))
    assert plates[-1] <= c[1] * (1 + 1e-12)


def test_temperature_flatness(materials, hydrogen):
    m = materials["drude-test"]
    for a in (3e-9, 30e-9, 300e-9):
        c300 = c3_planar(hydrogen, semi(m), a, 300.0).c3
        c250 = c3_planar(hydrogen, semi(m), a, 250.0).c3
        assert abs(c300 / c250 - 1) < 0.01


def test_deterministic(materials, hydrogen):
    w = semi(materials["uniaxial-test"])
    assert c3_planar(hydrogen, w, 7e-9, 300.0).c3 == c3_planar(hydrogen, w, 7e-9, 300.0).c3


def test_two_body_ideal_casimir(materials):
    m = materials["ideal-metal"]
    a = 100e-9
    f = two_body_force_per_area(m, m, None, a, 300.0)
    ref = -math.pi**2 * HBAR * C_LIGHT / (240 * a**4)
    assert f == pytest.approx(ref, rel=1e-3)
    e = two_body_free_energy_per_area(m, m, None, a, 300.0)
    assert e == pytest.approx(-math.pi**2 * HBAR * C_LIGHT / (720 * a**3), rel=1e-3)


def test_two_body_force_is_energy_derivative(materials):
    m = materials["drude-test"]
    a, h = 100e-9, 1e-11
    dE = (two_body_free_energy_per_area(m, m, None, a + h, 300.0)
          - two_body_free_energy_per_area(m, m, None, a - h, 300.0)) / (2 * h)
    assert two_body_force_per_area(m, m, None, a, 300.0) == pytest.approx(-dE, rel=1e-4)


def test_two_body_vacuum_and_thick_plate(materials):
    m = materials["uniaxial-test"]
    assert two_body_free_energy_per_area(materials["vacuum"], m, None, 50e-9, 300.0) == 0.0
    thick = two_body_free_energy_per_area(m, m, 1e-3, 50e-9, 300.0)
    semi_ = two_body_free_energy_per_area(m, m, None, 50e-9, 300.0)
    assert thick == pytest.approx(semi_, rel=1e-12)
    thin = two_body_free_energy_per_area(m, m, 2e-9, 50e-9, 300.0)
    assert abs(thin) < abs(semi_)
    v, diag = two_body_free_energy_per_area(m, m, None, 50e-9, 300.0, diagnostics=True)
    assert diag.tail_estimate < 1e-7
