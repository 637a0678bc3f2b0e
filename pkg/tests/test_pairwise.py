import math

import numpy as np
import pytest

from vdw_uniaxial.cylinder import c3_cylinder
from vdw_uniaxial.pairwise import (
    SemispaceC3, exterior_angular_integral, inside_outside_difference, interior_angular_integral,
    interior_transect, pairwise_exterior, pairwise_interior,
)
from vdw_uniaxial.quantities import C3_AU_SI
from vdw_uniaxial.reflection import WallGeometry
from vdw_uniaxial.validation import oracle_brute_force_pairwise


def factor_ext(R, a, inner=0.0):
    X = exterior_angular_integral(R, a)
    if inner:
        X -= exterior_angular_integral(inner, a + R - inner)
    return 1.5 * a**3 * X


@pytest.mark.parametrize("R, a, inner", [(50e-9, 5e-9, 0.0), (50e-9, 20e-9, 0.0),
                                         (10e-9, 3e-9, 0.0), (50e-9, 5e-9, 30e-9)])
def test_exterior_reduction_against_brute_force(R, a, inner):
    ref = oracle_brute_force_pairwise({"kind": "exterior", "R": R, "inner_radius": inner}, a)
    assert factor_ext(R, a, inner) == pytest.approx(ref, rel=5e-3)


@pytest.mark.parametrize("pos", [10e-9, 4e-9, 16e-9, 7.5e-9])
def test_interior_reduction_against_brute_force(pos):
    ref = oracle_brute_force_pairwise({"kind": "interior", "R0": 10e-9, "d": 40e-9}, pos)
    got = 1.5 * pos**3 * interior_angular_integral(10e-9, 40e-9, pos)
    assert got == pytest.approx(ref, rel=5e-3)


def test_semispace_limits():
    a = 5e-9
    assert factor_ext(1e7 * a, a) == pytest.approx(1.0, rel=1e-6)
    assert 1.5 * a**3 * interior_angular_integral(1e7 * a, 1e7 * a, a) == pytest.approx(1.0, rel=1e-6)
    assert interior_angular_integral(10e-9, 0.0, 5e-9) == 0.0


def test_angular_domain_errors():
    with pytest.raises(ValueError):
        exterior_angular_integral(-1.0, 1.0)
    with pytest.raises(ValueError):
        interior_angular_integral(10e-9, 5e-9, 25e-9)


def test_exterior_free_energy_normalisation(materials, hydrogen):
    F = pairwise_exterior(hydrogen, materials["drude-test"], 50e-9, 5e-9, 300.0, c3s=0.02)
    assert F == pytest.approx(-0.02 * C3_AU_SI * factor_ext(50e-9, 5e-9) / (5e-9) ** 3)


def test_pairwise_vs_lifshitz_discrepancy_trend(materials, hydrogen):
    m = materials["drude-test"]
    R = 50e-9
    disc = []
    for a_nm in (3, 5, 8, 10, 20, 30, 50):
        r = c3_cylinder(hydrogen, WallGeometry("solid-cylinder", m, R=R), a_nm * 1e-9, 300.0)
        Fp = pairwise_exterior(hydrogen, m, R, a_nm * 1e-9, 300.0, c3s=r.c3_semispace)
        disc.append(abs(Fp / r.free_energy - 1))
    assert all(x < y for x, y in zip(disc, disc[1:]))
    assert disc[0] < 0.01


def test_transect_symmetric_with_axis_maximum(materials, hydrogen):
    pos = np.arange(3.0, 17.0 + 1e-9, 0.5)
    tr = interior_transect(hydrogen, materials["drude-test"], 10e-9, 40e-9, 300.0, pos * 1e-9)
    F = np.array([f for _, f in tr])
    np.testing.assert_allclose(F, F[::-1], rtol=1e-6)
    assert int(np.argmax(F)) == len(F) // 2
    assert np.all(F < 0)


@pytest.mark.parametrize("fixed", ["R0", "R"])
@pytest.mark.parametrize("name", ["drude-test", "dielectric-test", "uniaxial-test"])
def test_inside_preferable(materials, hydrogen, fixed, name):
    m = materials[name]
    c3s = SemispaceC3(hydrogen, m, 300.0)
    for d_nm in (3, 10, 25, 40):
        d = d_nm * 1e-9
        R0 = 10e-9 if fixed == "R0" else 50e-9 - d
        assert inside_outside_difference(hydrogen, m, R0, d, 3e-9, 300.0, c3s=c3s) > 0


def test_ideal_metal_thin_wall_breaks_pairwise_comparison(materials, hydrogen):
    # a perfect mirror reflects fully however thin, while the pairwise
    # interior energy scales with the wall volume
    m = materials["ideal-metal"]
    assert inside_outside_difference(hydrogen, m, 47e-9, 3e-9, 3e-9, 300.0) < 0


def test_exterior_flag(materials, hydrogen):
    m = materials["drude-test"]
    a = inside_outside_difference(hydrogen, m, 10e-9, 20e-9, 3e-9, 300.0, exterior="pairwise")
    b = inside_outside_difference(hydrogen, m, 10e-9, 20e-9, 3e-9, 300.0, exterior="lifshitz")
    assert a > 0 and b > 0 and a != b
    with pytest.raises(ValueError):
        inside_outside_difference(hydrogen, m, 10e-9, 20e-9, 3e-9, 300.0, exterior="other")


def test_interior_uses_nearest_wall_c3(materials, hydrogen):
    m = materials["drude-test"]
    seen = []

    def c3s(a):
        seen.append(a)
        return 0.01

    pairwise_interior(hydrogen, m, 10e-9, 5e-9, 16e-9, 300.0, c3s=c3s)
    assert seen == [pytest.approx(4e-9)]
    assert not math.isnan(pairwise_interior(hydrogen, m, 10e-9, 5e-9, 4e-9, 300.0))
