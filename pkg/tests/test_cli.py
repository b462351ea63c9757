import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from radbc.cli import main
from radbc.wave_sim import ModeSimConfig

GOLDEN = Path(__file__).parent / "golden"
SMALL = {**ModeSimConfig().to_dict(), "dx": 0.04, "k": 0.5, "n_bc": 2}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("argv, golden", [
    (["poles", "--n", "3"], "poles_n3.csv"),
    (["poles", "--n", "1", "--format", "json"], "poles_n1.json"),
    (["quad", "--g", "const1", "--n", "4", "--t", "0", "--k", "1"], "quad_const1_n4.csv"),
    (["bound", "--mode", "integrated", "--n", "1", "--t", "1", "--k", "1", "--M", "1"],
     "bound_integrated_n1.csv"),
])
def test_golden_output(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_poles_n1_row(capsys):
    _, out, _ = run(capsys, "poles", "--n", "1")
    (row,) = rows(out)
    assert float(row["theta_j"]) == math.pi / 2
    assert float(row["pole_im"]) == 0.0
    assert float(row["residue"]) == 0.5


def test_poles_full_precision(capsys):
    _, out, _ = run(capsys, "poles", "--n", "7")
    for row in rows(out):
        j = int(row["j"])
        assert float(row["theta_j"]) == j * math.pi / 8


def test_quad_gcu_matches_polesum(capsys):
    args = ["--g", "const1", "--n", "4", "--t", "0", "--k", "1"]
    _, a, _ = run(capsys, "quad", *args, "--rule", "polesum")
    _, b, _ = run(capsys, "quad", *args, "--rule", "gcu")
    ra, rb = rows(a)[0], rows(b)[0]
    del ra["rule"], rb["rule"]
    assert ra == rb
    assert float(ra["abs_error"]) <= 1e-12


def test_quad_gl_row(capsys):
    code, out, _ = run(capsys, "quad", "--g", "runge2", "--n", "8", "--t", "5", "--rule", "gl")
    assert code == 0
    assert rows(out)[0]["rule"] == "gl" and rows(out)[0]["n"] == "8"


def test_bound_permode_with_g(capsys):
    code, out, _ = run(capsys, "bound", "--mode", "permode", "--n", "4", "--t", "5", "--k", "1",
                       "--g", "runge2", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["holds"] is True
    assert row["M"] == 0.5
    assert row["measured_error"] <= row["bound"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "p.csv"
    code, out, _ = run(capsys, "poles", "--n", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert len(rows(target.read_text())) == 2


@pytest.mark.parametrize("argv", [
    ["poles", "--n", "0"],
    ["poles", "--n", "1001"],
    ["quad", "--g", "nope", "--n", "2", "--t", "1"],
    ["quad", "--g", "z", "--n", "2", "--t", "200"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err)


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["poles"])
    assert info.value.code == 2


def test_simulate_writes_outputs(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(SMALL))
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--output-dir", str(tmp_path / "o"))
    assert code == 0
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert json.loads(out)["peak_error"] == summary["peak_error"]
    assert ModeSimConfig.from_dict(summary["config"]).to_dict() == SMALL
    series = rows((tmp_path / "o" / "timeseries.csv").read_text())
    assert len(series) == summary["scheme"]["n_steps"] + 1
    assert max(float(r["error"]) for r in series) == summary["peak_error"]


def test_simulate_validation_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "cfl": 1.5}))
    code, _, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 3
    assert any("CFL" in v for v in json.loads(err)["violations"])


def test_simulate_order_cap(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "n_bc": 9}))
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 3


def test_simulate_numerical_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "dx": 0.1, "pulse_width": 0.15}))
    code, _, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 4
    assert json.loads(err)["error"] == "ResolutionError"


def test_sweep_grid(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"base": SMALL, "grid": {"n_bc": [1, 2, 4, 6]}}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    table = rows(out)
    assert [r["n_bc"] for r in table] == ["1", "2", "4", "6"]
    peaks = [float(r["peak_error"]) for r in table]
    assert all(a >= b for a, b in zip(peaks, peaks[1:]))


def test_sweep_list_and_validation(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps([SMALL, {**SMALL, "cfl": 2.0}]))
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 3
    assert json.loads(err)["violations"][0].startswith("config[1]")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "radbc", "poles", "--n", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "j,theta_j,pole_im,residue"


def test_simulate_before_arrival(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({**SMALL, "t_final": 2.0}))
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--output-dir", str(tmp_path))
    assert code == 0
    assert json.loads(out)["peak_error"] < 1e-8
