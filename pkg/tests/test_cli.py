import json
import subprocess
import sys

import numpy as np
import pytest

from jnr.cli import main
from jnr.io import parse_operator_file, write_operator_file
from jnr.linalg import PAULI_Z

from conftest import FLAT_H0, FLAT_H1, MP_BOUND, MP_X, MP_Y, CUSP_H0, CUSP_H1


@pytest.fixture
def ops(tmp_path):
    paths = {}
    for name, H in {"f0": FLAT_H0, "f1": FLAT_H1, "x": MP_X, "y": MP_Y, "c0": CUSP_H0, "c1": CUSP_H1}.items():
        paths[name] = tmp_path / f"{name}.json"
        write_operator_file(paths[name], H)
    return paths


def test_boundary_deterministic(ops, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"b{i}.csv"
        assert main(["boundary", "--ops", f"{ops['f0']},{ops['f1']}", "--directions", "360", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0] == "dir_1,dir_2,p_1,p_2,support,multiplicity,depth"
    assert len(lines) - 1 >= 360


def test_uncertainty_json(ops, tmp_path):
    out = tmp_path / "u.json"
    assert main(["uncertainty", "--x", str(ops["x"]), "--y", str(ops["y"]), "--directions", "1082", "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["lower"] <= MP_BOUND <= res["upper"]
    assert set(res) == {"lower", "upper", "directions", "argmin_point", "argmin_variances"}


def test_hamiltonian_files(tmp_path):
    prefix = str(tmp_path / "ising_")
    assert main(["hamiltonian", "--model", "ising", "--sites", "2", "--out-prefix", prefix]) == 0
    files = sorted(tmp_path.glob("ising_*.json"))
    assert len(files) == 3
    np.testing.assert_array_equal(parse_operator_file(files[0]), np.kron(PAULI_Z, PAULI_Z).real)


def test_classify_report(ops, tmp_path):
    out = tmp_path / "c.json"
    assert main(["classify", "--ops", f"{ops['f0']},{ops['f1']}", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["class"] == "one_flat_class1" and rep["s"] == 1
    assert rep["flat_parts"][0]["kind"] == "segment"


def test_thermal_and_spectrum(ops, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["thermal", "--ops", f"{ops['c0']},{ops['c1']}", "--betas", "0,1,inf", "--directions", "8", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "beta,dir_1,dir_2,p_1,p_2" and len(lines) == 25
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--ops", f"{ops['c0']},{ops['c1']}", "--num-thetas", "16", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "theta,E_0,E_1,E_2,gap"


def test_energy_bounds_cmd(ops, capsys):
    assert main(["energy-bounds", "--ops", f"{ops['c0']},{ops['c1']}", "--known=-1,1", "--query", "0.2"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["lower"] <= res["upper"]


def test_separable_cmd(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_operator_file(a, np.kron(PAULI_Z, np.eye(2)).real)
    write_operator_file(b, np.kron(np.eye(2), PAULI_Z).real)
    out = tmp_path / "sep.csv"
    args = ["separable", "--ops", f"{a},{b}", "--dims", "2,2", "--directions", "6", "--restarts", "3", "--seed", "4", "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first


def test_error_paths(ops, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"d":2,"re":[[0,1],[2,0]]}')
    assert main(["boundary", "--ops", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "NonHermitianInput"
    assert main(["boundary", "--ops", str(tmp_path / "missing.json")]) == 2
    assert main(["boundary", "--ops", str(ops["x"]), "--gap-tol", "-1"]) == 2
    assert main(["classify", "--ops", str(ops["x"])]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_console_entry(ops, tmp_path):
    out = tmp_path / "b.csv"
    proc = subprocess.run([sys.executable, "-m", "jnr.cli", "boundary", "--ops", f"{ops['x']},{ops['y']}",
                           "--directions", "12", "--out", str(out)], capture_output=True)
    assert proc.returncode == 0
    assert len(out.read_text().splitlines()) == 13
