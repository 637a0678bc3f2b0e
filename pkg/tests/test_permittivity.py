import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vdw_uniaxial.optics import GRAPHITE_EXTRAPOLATION, OpticalDataTable
from vdw_uniaxial.permittivity import (
    MATSUBARA_CACHE, Drude, IdealMetal, LowConstant, Material, Oscillator, StaticKind,
    TabulatedKK, Vacuum, eps_ixi_closed_segments, eps_ixi_numeric, eps_static_behavior,
    synthetic_drude_table,
)
from vdw_uniaxial.quantities import EV_TO_RAD_S, matsubara_frequency


def drude_exact(xi, wp=1.226, g=0.04):
    x = xi / EV_TO_RAD_S
    return 1.0 + wp**2 / (x * (x + g))


@pytest.fixture(scope="module")
def synthetic():
    return synthetic_drude_table()[1]


def test_simple_models():
    xi = np.array([1e13, 1e15])
    np.testing.assert_array_equal(Vacuum().eps(xi), [1.0, 1.0])
    assert np.all(np.isinf(IdealMetal().eps(xi)))
    np.testing.assert_allclose(Drude(1.226, 0.04).eps(xi), drude_exact(xi))
    osc = Oscillator(((2.0, 10.0),))
    assert osc.static().value == pytest.approx(3.0)
    assert float(osc.eps(10.0 * EV_TO_RAD_S)) == pytest.approx(2.0)


def test_scalar_in_scalar_out():
    assert isinstance(Drude(1.0, 0.1).eps(1e15), float)


def test_static_kinds(synthetic):
    assert Drude(1.0, 0.1).static().kind is StaticKind.CONDUCTOR
    assert IdealMetal().static().kind is StaticKind.IDEAL
    assert eps_static_behavior(synthetic).kind is StaticKind.CONDUCTOR
    w = np.geomspace(0.02, 40, 50)
    t = OpticalDataTable("z", w, 1.0 / (1 + w**3))
    assert TabulatedKK(t, LowConstant(3.0), 1.0).static().kind is StaticKind.DIVERGENT
    finite = TabulatedKK(t, LowConstant(0.0), 1.0).static()
    assert finite.kind is StaticKind.FINITE and finite.value > 1


def test_invalid_parameters():
    with pytest.raises(ValueError):
        Drude(-1.0, 0.1)
    with pytest.raises(ValueError):
        Oscillator(((1.0, 0.0),))
    with pytest.raises(ValueError):
        Material(IdealMetal(), Vacuum())
    with pytest.raises(ValueError):
        TabulatedKK(synthetic_drude_table(n=20)[0], LowConstant(0.0), 1.0, method="magic")


def test_kk_reproduces_drude(synthetic):
    xi = np.geomspace(1e13, 1e18, 50)
    for fn in (eps_ixi_closed_segments, eps_ixi_numeric):
        np.testing.assert_allclose(fn(synthetic, xi), drude_exact(xi), rtol=1e-4)
    np.testing.assert_allclose(eps_ixi_numeric(synthetic, xi), eps_ixi_closed_segments(synthetic, xi),
                               rtol=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(13.0, 18.0))
def test_closed_and_numeric_segments_agree(logxi):
    w = np.geomspace(0.02, 40, 80)
    t = OpticalDataTable("z", w, 2.0 * w / (1 + w**2) + 0.01)
    m = TabulatedKK.from_spec(t, GRAPHITE_EXTRAPOLATION)
    xi = np.array([10.0**logxi])
    lo_c, mid_c, hi_c = m.segments(xi, "closed")
    lo_n, mid_n, hi_n = m.segments(xi, "numeric")
    assert lo_n[0] == pytest.approx(lo_c[0], rel=1e-7)
    assert hi_n[0] == pytest.approx(hi_c[0], rel=1e-7)
    np.testing.assert_array_equal(mid_c, mid_n)


def test_kk_decreasing_and_above_one(synthetic):
    xi = np.geomspace(1e12, 1e19, 60)
    e = synthetic.eps(xi)
    assert np.all(e >= 1.0)
    assert np.all(np.diff(e) < 0)


def test_matsubara_cache_consistent_and_threadsafe():
    MATSUBARA_CACHE.clear()
    m = Material.isotropic(Drude(1.226, 0.04))
    out = []

    def work(n):
        out.append(m.matsubara_eps(300.0, n)[0].copy())

    ts = [threading.Thread(target=work, args=(n,)) for n in (10, 500, 50, 2000)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    ref = drude_exact(matsubara_frequency(300.0, np.arange(1, 2001)))
    for arr in out:
        np.testing.assert_allclose(arr, ref[:arr.size], rtol=1e-14)
    ex, ez = m.matsubara_eps(300.0, 5)
    assert ex is ez or np.array_equal(ex, ez)
    assert not ex.flags.writeable


def test_material_helpers(materials):
    assert materials["vacuum"].is_vacuum
    assert materials["ideal-metal"].is_ideal
    assert not materials["uniaxial-test"].is_isotropic
    assert materials["drude-test"].is_isotropic
    ex0, ez0 = materials["uniaxial-test"].static_pair()
    assert np.isinf(ex0) and ez0 == pytest.approx(3.0)
    d = materials["drude-test"].describe()
    assert d["x"]["omega_p_eV"] == 1.226
