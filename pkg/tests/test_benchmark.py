import runpy
import sys
from pathlib import Path

import pytest

from vdw_uniaxial import kernels

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(not kernels.compiled_available(), reason="compiled extension not built")
def test_benchmark_runs(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [str(BENCH), "--repeat", "1"])
    with pytest.raises(SystemExit) as exc:
        runpy.run_path(str(BENCH), run_name="__main__")
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "speedup" in out and "uniaxial cylinder" in out
