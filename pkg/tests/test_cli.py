import csv
import json
import math
import subprocess
import sys

import pytest

from geur import states
from geur.cli import main
from geur.entropics import binary_entropy
from geur.sweeps import FIG3_COLUMNS, FIG4_COLUMNS


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_fig3_sweep_csv(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["fig3-sweep", "--points", "9", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(FIG3_COLUMNS)
    assert len(rows) == 9
    for row in rows:
        assert abs(float(row["lhs_total"]) - 2) < 1e-9
        assert float(row["rb_bound"]) == 1.5
        theta = float(row["theta"])
        assert abs(float(row["delta3_clamped"]) - binary_entropy(math.cos(theta) ** 2) / 2) < 1e-8
        # each printed row re-verifies to the last digit
        assert abs(float(row["lhs_total"]) - float(row["new_bound"]) - float(row["slack_new"])) <= 1.5e-9
    assert abs(float(rows[4]["delta3_clamped"]) - 0.5) < 1e-9
    assert all(len(v.split(".")[1]) == 9 for v in rows[3].values())


def test_fig4_sweep_csv(tmp_path):
    out = tmp_path / "fig4.csv"
    assert main(["fig4-sweep", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(FIG4_COLUMNS) and len(rows) == 11
    assert abs(float(rows[0]["improvement"]) - 1) < 1e-9
    assert abs(float(rows[-1]["k_old_bilateral"]) - float(rows[-1]["k_new_bilateral"])) < 1e-9
    assert all(float(r["improvement"]) >= 0 for r in rows)


def test_sweep_json_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["fig4-sweep", "--format", "json", "--points", "5", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["schema"] == "geur.fig4_sweep/1" and len(doc["rows"]) == 5


def test_sweep_config_errors(tmp_path, capsys):
    assert main(["fig3-sweep", "--points", "1"]) == 2
    assert main(["fig3-sweep", "--start", "0", "--end", "2"]) == 2
    assert main(["fig4-sweep", "--start", "0.5", "--end", "0.2"]) == 2
    assert main(["fig3-sweep", "--pairing", "X:B,Y:B,Z:D"]) == 2
    assert main(["fig3-sweep", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert not list(tmp_path.iterdir())


def write_state(tmp_path, rho, name="state.json"):
    path = tmp_path / name
    states.save_state(rho, path)
    return str(path)


def test_bound_theorem1(tmp_path, capsys):
    path = write_state(tmp_path, states.ghz(3))
    assert main(["bound", path, "--scenario", "theorem1", "--pairing", "X:B,Z:C"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "geur.eur_report/1"
    assert abs(doc["new_bound"] - 1.0) < 1e-12 and doc["tight"] is True


def test_bound_other_scenarios(tmp_path, capsys):
    path = write_state(tmp_path, states.ghz4_theta(math.pi / 4))
    assert main(["bound", path, "--scenario", "theorem2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["b_mu"] == 1.5 and abs(doc["delta_n"] - 0.5) < 1e-9

    path = write_state(tmp_path, states.bell_phi_plus(), "bell.json")
    assert main(["bound", path, "--scenario", "berta", "--observables", "X,Z"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["lhs_total"]) < 1e-9

    path = write_state(tmp_path, states.werner3(0), "w.json")
    assert main(["bound", path, "--scenario", "key-rate"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["improvement"] - 1) < 1e-9


def test_bound_custom_basis_file(tmp_path, capsys):
    s = 1 / math.sqrt(2)
    basis = tmp_path / "h.json"
    basis.write_text(json.dumps({"re": [[s, s], [s, -s]], "im": [[0, 0], [0, 0]]}))
    path = write_state(tmp_path, states.ghz(3))
    assert main(["bound", path, "--pairing", f"{basis}:B,Z:C"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["new_bound"] - 1) < 1e-12


def test_bound_validation_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"labels": ["A"], "dims": [2], "matrix_re": [[1, 0], [0, 1]], "matrix_im": [[0, 0], [0, 0]]}')
    assert main(["bound", str(bad)]) == 2
    assert "trace" in capsys.readouterr().err

    garbage = tmp_path / "garbage.json"
    garbage.write_text("{oops")
    assert main(["bound", str(garbage)]) == 2
    assert "json" in capsys.readouterr().err

    path = write_state(tmp_path, states.bell_phi_plus())
    assert main(["bound", path, "--scenario", "theorem1"]) == 2
    assert "tripartite layout required" in capsys.readouterr().err

    assert main(["bound", str(tmp_path / "nope.json")]) == 2


def test_certify_exit_codes_and_determinism(capsys, monkeypatch):
    assert main(["certify", "--scenario", "Theorem1", "--trials", "100", "--seed", "42"]) == 0
    first = capsys.readouterr().out
    assert main(["certify", "--scenario", "Theorem1", "--trials", "100", "--seed", "42"]) == 0
    assert capsys.readouterr().out == first
    assert "violations=0" in first and "trials=100" in first and "min_slack=" in first
    assert main(["certify", "--scenario", "Theorem2_N3", "--trials", "50"]) == 0

    from geur import bounds

    monkeypatch.setattr(bounds, "certify_trial", lambda *a, **k: (-1.0, 0.0))
    assert main(["certify", "--trials", "3"]) == 1


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["fig3-sweep", "--points", "many"])
    assert exc.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "geur.cli", "fig3-sweep", "--points", "3"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.splitlines()[0] == ",".join(FIG3_COLUMNS)
