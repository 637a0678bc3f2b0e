import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vdw_uniaxial import quantities as q


def test_first_matsubara_frequency_at_room_temperature():
    assert q.matsubara_frequency(300.0, 1) == pytest.approx(2.467e14, rel=1e-3)


def test_matsubara_frequency_zero_and_vector():
    assert q.matsubara_frequency(300.0, 0) == 0.0
    xi = q.matsubara_frequency(300.0, np.arange(1, 4))
    np.testing.assert_allclose(xi / xi[0], [1, 2, 3])


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_nonpositive_temperature_rejected(T):
    with pytest.raises(ValueError):
        q.matsubara_frequency(T, 1)


def test_unit_chain():
    assert q.ev_to_rad_s(1.0) == pytest.approx(1.519e15)
    assert q.HARTREE_EV == pytest.approx(27.11)
    assert q.AU_POLARIZABILITY_M3 == pytest.approx(1.482e-31)
    # 1 a.u. of frequency is one hartree
    assert q.au_to_rad_s(1.0) == pytest.approx(27.11 * 1.519e15)


@given(st.floats(1e-3, 1e3))
def test_conversions_round_trip(x):
    assert q.rad_s_to_ev(q.ev_to_rad_s(x)) == pytest.approx(x, rel=1e-12)
    assert q.alpha_m3_to_au(q.alpha_au_to_m3(x)) == pytest.approx(x, rel=1e-12)
    assert q.c3_si_to_au(q.c3_au_to_si(x)) == pytest.approx(x, rel=1e-12)
    assert q.rad_s_to_au(q.au_to_rad_s(x)) == pytest.approx(x, rel=1e-12)


def test_dimensionless_zeta():
    a = 10e-9
    xi = q.matsubara_frequency(300.0, 1)
    assert q.dimensionless_zeta(a, xi) == pytest.approx(2 * a * xi / q.C_LIGHT)


def test_grid():
    g = q.MatsubaraGrid(300.0)
    assert g.rtol == 1e-7 and g.min_terms == 10 and g.max_terms == 20000
    assert g.xi(2) == pytest.approx(2 * g.spacing)
    assert g.kbt == pytest.approx(q.K_B * 300.0)
    with pytest.raises(ValueError):
        q.MatsubaraGrid(0.0)
    assert math.isclose(g.spacing, q.matsubara_frequency(300.0, 1))
