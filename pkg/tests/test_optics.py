import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vdw_uniaxial.optics import (
    GRAPHITE_EXTRAPOLATION, ExtrapolationSpec, JoiningWarning, OpticalDataError,
    OpticalDataTable, interpolate_im_eps, joining_residuals, load_descriptor, load_table,
    write_table,
)


def _write(path, text):
    path.write_text(text)
    return path


def test_load_im_eps_table(tmp_path):
    p = _write(tmp_path / "x.csv", "omega_eV,im_eps\n0.02,5\n1,2\n40,0.1\n")
    t = load_table(p)
    assert t.axis == "x" and len(t) == 3
    assert t.window == (0.02, 40.0)


def test_load_refractive_index_table(tmp_path):
    p = _write(tmp_path / "z.csv", "# axis: z\nomega_eV,re_n,im_n\n1,2,0.5\n2,1.5,0.25\n")
    t = load_table(p)
    assert t.axis == "z"
    np.testing.assert_allclose(t.im_eps, [2.0, 0.75])


def test_schema_mapping(tmp_path):
    p = _write(tmp_path / "s.csv", "E,n_real,n_imag\n1,2,0.5\n2,1.5,0.25\n")
    t = load_table(p, schema={"omega": "E", "re_n": "n_real", "im_n": "n_imag"}, axis="z")
    np.testing.assert_allclose(t.im_eps, [2.0, 0.75])


@pytest.mark.parametrize("body, match", [
    ("omega_eV,im_eps\n1,2\n1,3\n", "row 2"),
    ("omega_eV,im_eps\n1,2\n0.5,3\n", "row 2"),
    ("omega_eV,im_eps\n1,2\n2,-1\n", "row 2"),
    ("omega_eV,im_eps\n1,2\n", "two rows"),
    ("omega_eV,im_eps\n1,2\n2,abc\n", "row 2"),
    ("omega_eV,re_n,im_n\n1,2,0.5\n2,1,-0.1\n", "row 2"),
    ("foo,bar\n1,2\n2,3\n", "frequency"),
    ("", "empty"),
])
def test_invalid_tables(tmp_path, body, match):
    p = _write(tmp_path / "bad.csv", body)
    with pytest.raises(OpticalDataError, match=match):
        load_table(p)


def test_missing_file_names_path(tmp_path):
    with pytest.raises(FileNotFoundError, match="nope.csv"):
        load_table(tmp_path / "nope.csv")


def test_round_trip_is_bit_identical(tmp_path):
    w = np.geomspace(0.02, 40, 200)
    t = OpticalDataTable("x", w, 1.0 / w + 0.1)
    p1 = write_table(t, tmp_path / "a.csv")
    t2 = load_table(p1)
    p2 = write_table(t2, tmp_path / "b.csv")
    assert p1.read_bytes() == p2.read_bytes()
    np.testing.assert_array_equal(t.im_eps, t2.im_eps)
    assert t2.window == (0.02, 40.0)


def test_interpolation_exact_at_nodes_and_loglog():
    w = np.array([1.0, 2.0, 4.0])
    t = OpticalDataTable("x", w, np.array([8.0, 1.0, 0.0]))
    np.testing.assert_array_equal(interpolate_im_eps(t, w), [8.0, 1.0, 0.0])
    # power law 1/w^3 between the first two nodes is reproduced exactly
    assert interpolate_im_eps(t, 1.5) == pytest.approx(8.0 / 1.5**3)
    # linear where a node value is zero
    assert interpolate_im_eps(t, 3.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        interpolate_im_eps(t, 5.0)


@settings(max_examples=50)
@given(st.floats(0.02, 40.0))
def test_interpolation_of_power_law(w):
    grid = np.geomspace(0.02, 40.0, 30)
    t = OpticalDataTable("x", grid, 3.0 * grid**-2.5)
    assert interpolate_im_eps(t, w) == pytest.approx(3.0 * w**-2.5, rel=1e-10)


def test_extrapolation_spec_validation():
    with pytest.raises(OpticalDataError):
        ExtrapolationSpec(A_x=-1.0)
    with pytest.raises(OpticalDataError):
        ExtrapolationSpec(eps_z0=-0.5)
    s = GRAPHITE_EXTRAPOLATION
    assert s.high("z", 2.0) == pytest.approx(s.A_z / 8)
    assert s.low("z", 0.01) == s.eps_z0


def test_joining_warning():
    w = np.geomspace(0.02, 40, 10)
    im = GRAPHITE_EXTRAPOLATION.low("x", w)
    im[-1] = GRAPHITE_EXTRAPOLATION.high("x", w[-1])
    good = OpticalDataTable("x", w, im)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = joining_residuals(good, GRAPHITE_EXTRAPOLATION)
    assert res["low"] == pytest.approx(0.0, abs=1e-12)
    bad = OpticalDataTable("x", w, np.ones_like(w))
    with pytest.warns(JoiningWarning):
        joining_residuals(bad, GRAPHITE_EXTRAPOLATION)


def test_descriptor(tmp_path):
    w = np.geomspace(0.02, 40, 50)
    write_table(OpticalDataTable("x", w, 1.0 / w), tmp_path / "gx.csv")
    write_table(OpticalDataTable("z", w, 1.0 / w), tmp_path / "gz.csv")
    d = tmp_path / "g.json"
    d.write_text(json.dumps({"name": "g", "x": "gx.csv", "z": {"path": "gz.csv"},
                             "extrapolation": {"A_z": 100.0}}))
    ds = load_descriptor(d, warn=False)
    assert ds.name == "g" and ds.spec.A_z == 100.0 and ds.spec.A_x == GRAPHITE_EXTRAPOLATION.A_x
    assert ds.table_z.axis == "z"
    assert load_descriptor(d, eps_z0=0.0, warn=False).spec.eps_z0 == 0.0
    assert set(ds.residuals) == {"x", "z"}


def test_descriptor_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_descriptor(tmp_path / "none.json")
    d = tmp_path / "d.json"
    d.write_text("{not json")
    with pytest.raises(OpticalDataError):
        load_descriptor(d)
    d.write_text(json.dumps({"x": "missing.csv", "z": "missing.csv"}))
    with pytest.raises(FileNotFoundError, match="missing.csv"):
        load_descriptor(d)
