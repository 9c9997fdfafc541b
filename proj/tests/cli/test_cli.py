import csv
import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("FERMIGAS_CLI", "fermigas")
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], cwd=cwd, capture_output=True, text=True, timeout=300)


def load(path):
    return json.loads(Path(path).read_text())


def test_help_exits_zero():
    assert run("--help").returncode == 0
    assert run("dyson", "--help").returncode == 0


def test_no_subcommand_is_an_error():
    assert run().returncode == 1


def test_scatter_hard_sphere(tmp_path):
    r = run("--out-dir", tmp_path, "scatter", "--potential", FIXTURES / "hard_sphere.json", "--dim", 3)
    assert r.returncode == 0, r.stderr
    report = load(tmp_path / "scatter.json")
    assert report["tool"] == "fermigas"
    assert report["schema_version"] == 1
    assert report["subcommand"] == "scatter"
    assert report["outputs"]["a"]["value"] == pytest.approx(1.0, abs=1e-9)
    assert report["outputs"]["a"]["source"].startswith("scattering.")
    with open(tmp_path / report["outputs"]["profile_csv_path"]["value"]) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["r", "phi", "dphi"]
    assert len(rows) > 10


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        r = run("--out-dir", d, "--seed", 7, "bounds", "--dim", 3, "--gas-sweep", "1e-30:1e-22:5")
        assert r.returncode == 0, r.stderr
        outs.append(((d / "bounds.csv").read_bytes(), (d / "bounds.json").read_bytes()))
        assert (d / "bounds.json.meta").exists()
    assert outs[0] == outs[1]
    assert "generated_at" not in outs[0][1].decode()


def test_infeasible_schedule_exits_two(tmp_path):
    r = run("--out-dir", tmp_path, "bounds", "--dim", 3, "--rho-sweep", "1e-6:1e-3:3")
    assert r.returncode == 2
    assert (tmp_path / "bounds.csv").exists()


@pytest.mark.parametrize(
    "args",
    [
        ("bounds", "--dim", 3, "--rho-sweep", "1e-3:1e-2:0"),
        ("bounds", "--dim", 3),
        ("scatter", "--potential", "/nonexistent.json"),
        ("scatter", "--dim", 3, "--bogus", 1),
        ("oracle", "--potential", FIXTURES / "hard_sphere.json", "--cutoff", 3),
    ],
)
def test_errors_exit_one(tmp_path, args):
    r = run("--out-dir", tmp_path, *args)
    assert r.returncode == 1
    assert r.stderr


def test_config_resolves_paths_and_flags_win(tmp_path):
    cfg = tmp_path / "run.json"
    (tmp_path / "pots").mkdir()
    (tmp_path / "pots" / "hs.json").write_text((FIXTURES / "hard_sphere.json").read_text())
    cfg.write_text(json.dumps({
        "version": 1,
        "subcommand": "scatter",
        "out_dir": "out",
        "options": {"potential": "pots/hs.json", "dim": 2, "out": "from_config.json"},
    }))
    r = run("--config", cfg, "scatter", "--dim", 3)
    assert r.returncode == 0, r.stderr
    report = load(tmp_path / "out" / "from_config.json")
    assert report["input"]["options"]["dim"] == 3
    assert report["outputs"]["a"]["value"] == pytest.approx(1.0, abs=1e-9)


def test_config_rejects_unknown_fields(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"version": 1, "subcommand": "scatter", "options": {"bogus": 1}}))
    r = run("--config", cfg)
    assert r.returncode == 1
    assert "options.bogus" in r.stderr
    cfg.write_text(json.dumps({"version": 1, "subcommand": "scatter", "colour": "red"}))
    r = run("--config", cfg)
    assert r.returncode == 1
    assert "colour" in r.stderr


def test_config_subcommand_mismatch(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"version": 1, "subcommand": "dyson"}))
    r = run("--config", cfg, "bounds")
    assert r.returncode == 1
    assert "subcommand" in r.stderr


def test_fermisea_sweep_writes_csv_and_fit(tmp_path):
    r = run("--out-dir", tmp_path, "fermisea", "--n", 20000, "--dim", 3, "--sweep", "--points", 21)
    assert r.returncode == 0, r.stderr
    with open(tmp_path / "fermisea.csv") as f:
        rows = list(csv.DictReader(f))
    assert [k for k in rows[0]] == ["n", "E_D", "leading", "ratio"]
    assert all(float(row["ratio"]) > 1.0 for row in rows)
    fit = load(tmp_path / "fermisea.json")["outputs"]["correction_fit"]
    assert fit["slope"] == pytest.approx(-1.0 / 3.0, abs=0.05)


def test_determinantal_check_passes(tmp_path):
    r = run("--out-dir", tmp_path, "determinantal-check")
    assert r.returncode == 0, r.stderr
    suite = load(tmp_path / "determinantal_check.json")["outputs"]["suite"]["value"]
    assert suite["failures"] == 0
    assert suite["max_error"] < 1e-5
