import numpy as np
import pytest
from hypothesis import given, strategies as st

from vdw_uniaxial.polarizability import (
    HYDROGEN_10_OSCILLATOR, OscillatorModel, alpha_ixi, alpha_ixi_au, builtin_models,
    load_oscillator_csv, single_oscillator,
)
from vdw_uniaxial.quantities import AU_POLARIZABILITY_M3, ev_to_rad_s


def test_ten_oscillator_static_value(models):
    assert len(HYDROGEN_10_OSCILLATOR) == 10
    assert models["H-10osc"].static_au == pytest.approx(4.50, rel=5e-3)


def test_single_oscillator_models(models):
    assert models["H-1osc"].static_au == pytest.approx(4.50, rel=1e-12)
    assert models["H2-1osc"].static_au == pytest.approx(5.439, rel=1e-12)
    # alpha(i w0) = alpha0 / 2
    w0 = ev_to_rad_s(11.65)
    assert alpha_ixi_au(models["H-1osc"], w0) == pytest.approx(2.25, rel=1e-12)


@given(st.floats(0.0, 1e18), st.floats(0.0, 1e18))
def test_alpha_monotone_decreasing(x1, x2, ):
    m = builtin_models()["H-10osc"]
    lo, hi = sorted((x1, x2))
    assert alpha_ixi_au(m, hi) <= alpha_ixi_au(m, lo)


def test_units():
    m = single_oscillator(4.5, 11.65, "H")
    assert alpha_ixi(m, 0.0) == pytest.approx(4.5 * AU_POLARIZABILITY_M3)
    with pytest.raises(ValueError):
        alpha_ixi_au(m, -1.0)


def test_zero_strength():
    m = OscillatorModel(((0.0, 0.5),), "nothing")
    assert m.is_zero and m.static_au == 0.0
    with pytest.raises(ValueError):
        OscillatorModel(((1.0, 0.0),))


def test_csv_loader(tmp_path):
    p = tmp_path / "he.csv"
    p.write_text("# helium-like\ng_au,omega_au\n1.0,1.0\n0.5,2.0\n")
    m = load_oscillator_csv(p)
    assert m.species == "he" and m.static_au == pytest.approx(1.125)
    np.testing.assert_allclose(m.alpha_au(np.array([0.0, 1.0])), [1.125, 0.5 + 0.1])
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="g_au"):
        load_oscillator_csv(p)
