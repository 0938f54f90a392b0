import csv
import io
import json

import pytest

from adaptive_pursuit.cli import main
from adaptive_pursuit.formats import RunConfig


@pytest.fixture
def tracks(tmp_path):
    out = {}
    for shape in ("circle", "hairpin_circuit"):
        p = tmp_path / f"{shape}.csv"
        assert main(["gen-track", shape, "--out", str(p)]) == 0
        out[shape] = p
    return out


def test_simulate_happy_path(tracks, capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    code = main(["simulate", "--track", str(tracks["circle"]), "--lookahead", "1.0", "--trace", str(trace)])
    assert code == 0
    metrics = json.loads(capsys.readouterr().out)
    assert list(metrics) == ["status", "lap_time_s", "avg_speed_mps", "total_deviation_ms", "max_deviation_m"]
    assert metrics["status"] == "Completed"
    assert trace.read_text().startswith("t,x,y,heading,v,steering,lookahead\n")


def test_simulate_xor(tracks, capsys, tmp_path):
    code = main(["simulate", "--track", str(tracks["circle"]), "--lookahead", "1.0", "--labels", "l.csv"])
    assert code == 1
    assert "not allowed" in capsys.readouterr().err
    assert main(["simulate", "--track", str(tracks["circle"])]) == 1


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["simulate", "--lookahead", "1.0"]) == 1
    assert main(["simulate", "--track", "/nonexistent.csv", "--lookahead", "1.0"]) == 1


def test_fail_on_dnf(tracks):
    args = ["simulate", "--track", str(tracks["hairpin_circuit"]), "--lookahead", "2.0"]
    assert main(args) == 0
    assert main(args + ["--fail-on-dnf"]) == 2


def test_assign_plot_and_simulate_labels(tracks, tmp_path, capsys):
    labels = tmp_path / "labels.csv"
    svg = tmp_path / "labels.svg"
    hp = str(tracks["hairpin_circuit"])
    assert main(["assign", "--track", hp, "--beta", "0.5", "--labels-out", str(labels)]) == 0
    rows = list(csv.reader(io.StringIO(labels.read_text())))
    assert rows[0] == ["waypoint_index", "lookahead_m", "label_index"]
    assert {r[1] for r in rows[1:]} == {"1.0", "1.5", "2.0"}
    assert main(["plot", "--track", hp, "--labels", str(labels), "--svg-out", str(svg)]) == 0
    assert svg.read_text().startswith("<?xml")
    capsys.readouterr()
    assert main(["simulate", "--track", hp, "--labels", str(labels), "--fail-on-dnf"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "Completed"
    assert main(["compare", "--track", hp, "--labels", str(labels)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["improvement_pct"]["lap_time"] > 0


def test_sweep_five_rows(tracks, tmp_path, capsys):
    report = tmp_path / "sweep.csv"
    hp = str(tracks["hairpin_circuit"])
    assert main(["sweep", "--track", hp, "--betas", "0,0.25,0.5,0.75,1.0", "--report", str(report)]) == 0
    rows = list(csv.DictReader(io.StringIO(report.read_text())))
    assert len(rows) == 5
    assert list(rows[0]) == ["beta", "status", "lap_time_s", "avg_speed_mps", "total_deviation_ms", "max_deviation_m"]
    assert capsys.readouterr().out == report.read_text()
    jreport = tmp_path / "sweep.json"
    assert main(["sweep", "--track", hp, "--betas", "0.5", "--report", str(jreport)]) == 0
    assert len(json.loads(jreport.read_text())) == 1


def test_compare_without_labels(tracks, capsys, tmp_path):
    rep_path = tmp_path / "cmp.json"
    assert main(["compare", "--track", str(tracks["hairpin_circuit"]), "--report", str(rep_path)]) == 0
    rep = json.loads(rep_path.read_text())
    assert rep["beta"] == 0.5
    assert set(rep["fixed"]) == {"1.0", "1.5", "2.0"}
    assert rep["fixed"]["2.0"]["status"] == "DNF_Deviation"


def test_dump_config(capsys, tmp_path):
    assert main(["sweep", "--dump-config"]) == 0
    assert capsys.readouterr().out == RunConfig().to_text()
    cfg = tmp_path / "c.cfg"
    cfg.write_text("v_max = 3.0\n")
    assert main(["simulate", "--config", str(cfg), "--set", "dt=0.01", "--dump-config"]) == 0
    out = capsys.readouterr().out
    assert "v_max = 3.0\n" in out and "dt = 0.01\n" in out


def test_gen_track_stdout(capsys):
    assert main(["gen-track", "circle", "--radius", "1.0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y,heading" and len(lines) == 1 + 63
    assert main(["gen-track", "circle", "--spacing", "0"]) == 1
