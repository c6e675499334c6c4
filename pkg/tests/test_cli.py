"""CLI: subcommands, exit codes, determinism of reports."""

import json
import subprocess
import sys

from isolab import catalog, family_to_json_obj
from isolab.cli import main


def run_cli(*args):
    return main(list(args))


def test_verify_pass(capsys):
    assert run_cli("verify", "--family", "cartan-cubic") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pass"] is True
    assert payload["worst_scaled_residual"] < 1e-9


def test_tight_clifford(tmp_path):
    out = tmp_path / "tight.json"
    code = run_cli("tight", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.3", "--poles", "4",
                   "--seed", "1", "--out", str(out))
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert all(p["count_newton"] == 4 for p in payload["poles"])
    assert payload["config"]["seed"] == 1


def test_spectrum_and_focal(tmp_path):
    assert run_cli("spectrum", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.2", "--samples", "15",
                   "--out", str(tmp_path / "s.json")) == 0
    assert run_cli("focal", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.2", "--samples", "20",
                   "--out", str(tmp_path / "f.json")) == 0
    focal = json.loads((tmp_path / "f.json").read_text())
    assert focal["focal_dimensions"] == {"+1": 1, "-1": 1}


def test_taut_focal_and_totally_focal(tmp_path):
    assert run_cli("taut-focal", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--side", "1", "--poles", "3",
                   "--out", str(tmp_path / "t.json")) == 0
    assert run_cli("totally-focal", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.3", "--poles", "6",
                   "--out", str(tmp_path / "p.json")) == 0


def test_usage_errors():
    assert run_cli("tight", "--family", "nosuch") == 2
    assert run_cli("tight", "--family", "clifford", "--params", "not json") == 2
    assert run_cli("tight", "--family", "clifford", "--params",
                   '{"k": 9, "n": 2}') == 2
    assert run_cli() == 2


def test_rejected_polynomial_is_verification_failure(tmp_path):
    fam = catalog("clifford", k=1, n=2)
    obj = family_to_json_obj(fam)
    obj["terms"][0][0] += 1e-3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code = run_cli("tight", "--family", "user-polynomial", "--params",
                   json.dumps({"file": str(path)}))
    assert code == 1


def test_user_polynomial_file_accepted(tmp_path):
    fam = catalog("clifford", k=1, n=2)
    path = tmp_path / "good.json"
    path.write_text(json.dumps(family_to_json_obj(fam)))
    assert run_cli("verify", "--family", "user-polynomial", "--params",
                   json.dumps({"file": str(path)}),
                   "--out", str(tmp_path / "v.json")) == 0
    payload = json.loads((tmp_path / "v.json").read_text())
    assert payload["pass"] is True


def test_export_mesh_and_curves(tmp_path):
    mesh_path = tmp_path / "m.obj"
    assert run_cli("export-mesh", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.0", "--resolution", "12",
                   "--out", str(mesh_path)) == 0
    assert mesh_path.read_text().startswith("v ")
    curve_path = tmp_path / "c.csv"
    assert run_cli("export-curves", "--family", "cartan-cubic", "--level",
                   "0.2", "--out", str(curve_path)) == 0
    assert curve_path.read_text().startswith("t,V,side")


def test_export_mesh_high_dim_writes_point_cloud(tmp_path):
    out = tmp_path / "cloud.csv"
    assert run_cli("export-mesh", "--family", "cartan-cubic", "--level",
                   "0.2", "--samples", "30", "--out", str(out)) == 0
    assert out.read_text().startswith("y1,")


def test_export_mesh_explicit_pole(tmp_path):
    out = tmp_path / "m.obj"
    assert run_cli("export-mesh", "--family", "clifford", "--params",
                   '{"k": 1, "n": 2}', "--level", "0.0", "--resolution", "8",
                   "--pole", "[0.1, 0.2, 0.3, 0.9]", "--out", str(out)) == 0
    assert sum(1 for l in out.read_text().splitlines()
               if l.startswith("v ")) == 64


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ("tight", "--family", "clifford", "--params", '{"k": 1, "n": 2}',
            "--level", "0.3", "--poles", "3", "--seed", "5")
    assert run_cli(*args, "--out", str(a)) == 0
    assert run_cli(*args, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "isolab.cli", "verify", "--family",
         "great-sphere", "--params", '{"n": 2}'],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
