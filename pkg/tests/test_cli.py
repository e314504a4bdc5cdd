import json
import subprocess
import sys

import numpy as np
import pytest

from helisphere.cli import main


def test_curve_csv(tmp_path):
    out = tmp_path / "curve.csv"
    rc = main(["curve", "--momentum", "catenary:0.433", "--span", "0:6.2832",
               "--samples", "2000", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "s,z,lambda,x,y,zc"
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (2000, 6)
    np.testing.assert_allclose(np.linalg.norm(data[:, 3:], axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(data[:, 1], data[:, 5])


def test_catenary_json(tmp_path):
    out = tmp_path / "report.json"
    assert main(["catenary", "--q", "2/3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["pass"] is True
    assert rep["T_residual"] < 1e-10
    assert rep["closure_residual"] < 1e-7
    assert {"beta", "T", "c"} <= set(rep)


def test_catenary_out_of_range(capsys):
    assert main(["catenary", "--q", "0.45"]) == 1
    assert "outside" in capsys.readouterr().err


def test_surface_obj(tmp_path):
    out = tmp_path / "s.obj"
    assert main(["surface", "--q", "2/3", "--grid", "12x9", "--t-range", "0:4.712",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 108
    assert sum(l.startswith("f ") for l in lines) == 11 * 8


def test_surface_ambient_lawson(tmp_path):
    out = tmp_path / "l.obj"
    assert main(["surface", "--lawson", "--pitch", "1", "--grid", "5x6", "--ambient",
                 "--out", str(out)]) == 0
    v = np.array([l.split()[1:] for l in out.read_text().splitlines() if l.startswith("v ")], float)
    assert v.shape == (30, 4)
    np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-14)


def test_surface_needs_one_source(capsys):
    assert main(["surface", "--lawson", "--q", "2/3"]) == 1


def test_associate(tmp_path, capsys):
    assert main(["associate", "--beta", "0.8", "--theta", "1.5707963267948966"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["checks"]) == 3
    assert all(c["pass"] for c in rep["checks"])
    assert rep["c"] == pytest.approx(0.0, abs=1e-12)
    assert main(["associate", "--h", "0", "--c", "0.3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["theta"] == 0.0
    assert main(["associate", "--beta", "0.8"]) == 1


def test_verify_suite(tmp_path):
    out = tmp_path / "checks.json"
    assert main(["verify", "--suite", "closure", "--out", str(out)]) == 0
    reps = json.loads(out.read_text())
    assert isinstance(reps, list) and len(reps) == 3
    assert {"name", "max_residual", "tolerance", "pass", "grid"} <= set(reps[0])


def test_bad_usage_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["curve", "--span", "nope"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "missing"])
    assert exc.value.code == 1
    assert main(["curve", "--momentum", "bogus:1"]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "helisphere", "catenary", "--beta", "0.5"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert "T" in json.loads(r.stdout)
