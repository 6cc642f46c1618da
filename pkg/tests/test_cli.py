"""Command-line runs, artifacts and exit codes."""

import json
from pathlib import Path

import numpy as np
import pytest

from isophote.cli import main
from isophote.export import read_curve_csv

SCENES = Path(__file__).resolve().parents[1] / "scenes"


def _run_dir(root: Path) -> Path:
    (run,) = [p for p in root.iterdir() if p.name.startswith("run-")]
    return run


def test_trace_example(tmp_path, capsys):
    code = main(["--out", str(tmp_path), "trace", "sphere", "d=0,0,1", "theta=60deg",
                 "grid=256x256"])
    assert code == 0
    run = _run_dir(tmp_path)
    for name in ("report.json", "report.txt", "manifest.json"):
        assert (run / name).is_file()
    report = json.loads((run / "report.json").read_text())
    (job,) = report["jobs"]
    checks = {c["name"]: c for c in job["checks"]}
    assert all(c["passed"] for c in checks.values())
    # every verdict cites its tolerance by name and value
    assert all(c["tolerance_name"] and c["tolerance"] > 0 for c in checks.values())
    manifest = json.loads((run / "manifest.json").read_text())
    files = [a["path"] for a in manifest["artifacts"]]
    csvs = [f for f in files if f.endswith(".csv")]
    assert len(csvs) == 1 and any(f.endswith(".svg") for f in files)
    data = read_curve_csv(run / csvs[0])
    assert np.max(np.abs(data["v"] - np.pi / 6)) <= 1e-4
    assert "overall: PASS" in capsys.readouterr().out


def test_example1_passes(tmp_path):
    assert main(["--quiet", "--out", str(tmp_path), "example1"]) == 0


def test_helix_tube_verify_reports_failed_control(tmp_path):
    # the certified curves pass; the pi/4 control cannot vary on a circular helix tube
    code = main(["--quiet", "--out", str(tmp_path), "verify-prop2", "spine=circular_helix",
                 "r=0.3"])
    report = json.loads((_run_dir(tmp_path) / "report.json").read_text())
    checks = report["jobs"][0]["checks"]
    failed = [c["name"] for c in checks if not c["passed"]]
    assert code == 1
    assert failed and all("control" in n for n in failed)


@pytest.mark.parametrize("argv", [["trace", "sphere", "d=0,0,1"],
                                  ["frobnicate"],
                                  ["trace", "klein", "d=0,0,1", "theta=1"]],
                         ids=["missing-theta", "unknown-verb", "unknown-surface"])
def test_bad_invocations_exit_2(tmp_path, argv):
    assert main(["--quiet", "--out", str(tmp_path), *argv]) == 2


def test_scene_run_and_validate(tmp_path, capsys):
    scene = SCENES / "sphere.yaml"
    assert main(["validate", str(scene)]) == 0
    assert "surfaces:" in capsys.readouterr().out
    assert main(["--quiet", "--out", str(tmp_path), "run", str(scene)]) == 0
    run = _run_dir(tmp_path)
    assert sorted(p.name for p in run.iterdir() if p.is_dir()) == ["00-trace", "01-mu"]


def test_output_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("ISOPHOTE_OUT", str(tmp_path / "env"))
    assert main(["--quiet", "trace", "sphere", "d=0,0,1", "theta=60deg", "grid=32x32"]) == 0
    assert _run_dir(tmp_path / "env").is_dir()


def test_seed_reproducible(tmp_path):
    values = []
    for k in range(2):
        out = tmp_path / str(k)
        assert main(["--quiet", "--out", str(out), "--seed", "11", "tube", "circular_helix",
                     "r=0.3", "resolution=16x8", "samples=50"]) == 0
        job = json.loads((_run_dir(out) / "report.json").read_text())["jobs"][0]
        values.append([c["value"] for c in job["checks"]])
    assert values[0] == values[1]
