import math

import pytest

from vdw_uniaxial.polarizability import OscillatorModel
from vdw_uniaxial.validation import (
    TABLE2, GoldenFixture, analytic_fixtures, oracle_brute_force_pairwise,
    oracle_ideal_metal_c3, run_fixtures, table1_fixtures, table2_fixtures,
)


def test_ideal_metal_oracle(models):
    assert oracle_ideal_metal_c3(models["H-1osc"]) == pytest.approx(4.50 * (11.65 / 27.11) / 8)
    assert oracle_ideal_metal_c3(models["H2-1osc"]) == pytest.approx(0.3533, rel=5e-4)
    assert oracle_ideal_metal_c3(OscillatorModel(((0.0, 1.0),))) == 0.0
    two = OscillatorModel(((1.0, 1.0), (2.0, 4.0)))
    assert oracle_ideal_metal_c3(two) == pytest.approx(1 / 8 + 2 / 32)


def test_brute_force_semispace_calibration():
    assert oracle_brute_force_pairwise({"kind": "semispace"}, 3e-9) == pytest.approx(1.0, rel=1e-3)


def test_brute_force_bad_geometry():
    with pytest.raises(ValueError):
        oracle_brute_force_pairwise({"kind": "sphere"}, 1e-9)
    with pytest.raises(ValueError):
        oracle_brute_force_pairwise({"kind": "interior", "R0": 1e-9, "d": 1e-9}, 3e-9)


def test_fixture_invariants():
    with pytest.raises(ValueError):
        GoldenFixture("x", {}, 1.0, "DERIVED", 0.1)
    with pytest.raises(ValueError):
        GoldenFixture("x", {}, 1.0, "GUESS", 0.1)
    f = GoldenFixture("x", {}, 10.0, "PAPER", 1.5, absolute=True)
    assert f.check(11.4) and not f.check(11.6)
    for fx in table1_fixtures() + analytic_fixtures() + table2_fixtures():
        assert fx.provenance in ("PAPER", "TRIVIAL", "DERIVED")
        assert fx.tolerance > 0
        if fx.provenance == "DERIVED":
            assert fx.oracle


def test_table2_fixture_set():
    fx = table2_fixtures()
    assert len(TABLE2) == 7
    assert len(fx) == 7 * 6
    assert sum("delta" in f.id for f in fx) == 14


def test_builtin_fixture_suites_pass():
    out = run_fixtures(table1_fixtures() + analytic_fixtures())
    assert all(o.passed for o in out), [o.line() for o in out if not o.passed]
    assert all(o.line().startswith("PASS") for o in out)


def test_run_fixtures_captures_errors():
    def boom(ctx):
        raise ArithmeticError("diverged")

    out = run_fixtures([GoldenFixture("b", {}, 1.0, "TRIVIAL", 0.1, compute=boom)])
    assert not out[0].passed and math.isnan(out[0].value)
    assert "diverged" in out[0].line()
