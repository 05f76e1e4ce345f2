import json
import subprocess
import sys

import pytest

from mori_class.cli import main
from mori_class.mfsfile import dump
from mori_class.models import DelPezzoFibration, SingularConicBundle, SurfaceData
from mori_class.lattice import BilinearLattice

PLANE = SurfaceData(BilinearLattice(((1,),)), (3,))


@pytest.fixture
def files(tmp_path):
    def write(name, m):
        p = tmp_path / name
        p.write_text(dump(m))
        return str(p)

    return write


def test_console_script_runs(files):
    path = files("a.mfs", DelPezzoFibration(K=8, twist=-2))
    out = subprocess.run([sys.executable, "-m", "mori_class.cli", "invariants", path],
                         capture_output=True, text=True, check=True).stdout
    lines = dict(line.split("=", 1) for line in out.splitlines())
    assert lines["b3"] == "2" and lines["relK3"] == "16" and lines["K"] == "8"


def test_invariants_hodge_lines(files, capsys):
    path = files("x.mfs", SingularConicBundle(PLANE, (-8,), -8))
    assert main(["invariants", path]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "b3=40" in out and "eX=-34" in out and "K3=-6" in out
    assert "hodge_feasible=true" in out and "hodge_equality=true" in out


def test_compare_exit_codes(files, capsys):
    a = files("a.mfs", DelPezzoFibration(K=9, twist=0))
    b = files("b.mfs", DelPezzoFibration(K=9, twist=-1))
    c = files("c.mfs", DelPezzoFibration(K=9, twist=3))
    assert main(["compare", a, b]) == 1
    assert capsys.readouterr().out.splitlines()[-1] == "verdict=NotDiffeomorphic branch=K-case"
    assert main(["compare", a, c]) == 0
    assert main(["compare", "--json-lines", a, c]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.startswith("{")]
    assert rows[-1] == {"verdict": "Diffeomorphic", "branch": "K-case"}
    assert rows[0]["rule"] == "K"


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.mfs"
    p.write_text("[mfs]\nbase_dim = 0\ndegree = 5\neX = 3\n")
    assert main(["invariants", str(p)]) == 3
    assert f"{p}:4:6:" in capsys.readouterr().err
    assert main(["invariants", str(tmp_path / "missing.mfs")]) == 3


def test_census_cli(capsys):
    assert main(["census", "--family", "dp1", "--min-K", "9", "--max-K", "9", "--min-twist=-2", "--max-twist", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "family=dp1 classes=2 records=5"
    assert main(["census", "--family", "dp1", "--min-K", "9"]) == 3
    assert main(["census", "--family", "dp1", "--min-K", "x", "--max-K", "9"]) == 3
    assert main(["census", "--family", "dp1", "--bogus"]) == 3


def test_unknown_args_rejected():
    with pytest.raises(SystemExit):
        main(["invariants", "a", "--min-K", "1"])


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "cubic"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].endswith("failed=0")
