"""End-to-end command line checks in temporary directories: instance files,
solver outputs, manifests, reproducibility and exit codes."""
from __future__ import annotations

import json

import pytest

from cvargreedy import __version__, load_instance
from cvargreedy.cli import main


def read_json(path):
    return json.loads(path.read_text())


def data_section(path):
    """File content with the whole manifest block stripped."""
    if path.suffix == ".json":
        doc = read_json(path)
        doc.pop("manifest")
        return doc
    return [line for line in path.read_text().splitlines()
            if not line.startswith("# ")]


def minus_timestamp(path):
    """Full file content with only the manifest timestamp removed."""
    if path.suffix == ".json":
        doc = read_json(path)
        doc["manifest"].pop("timestamp")
        return doc
    return [line for line in path.read_text().splitlines()
            if not line.startswith("# timestamp")]


def gen_vehicle(tmp_path, name="veh.json", vehicles=2, demands=2, seed=5):
    path = tmp_path / name
    code = main(["gen", "vehicle", "--vehicles", str(vehicles),
                 "--demands", str(demands), "--seed", str(seed),
                 "--out", str(path)])
    assert code == 0
    return path


def gen_sensor(tmp_path, name="sen.json", seed=3):
    path = tmp_path / name
    code = main(["gen", "sensor", "--candidates", "5", "--select", "2",
                 "--rows", "6", "--cols", "6", "--seed", str(seed),
                 "--out", str(path)])
    assert code == 0
    return path


# ------------------------------------------------------------------- gen

def test_gen_vehicle(tmp_path, capsys):
    path = gen_vehicle(tmp_path)
    out = capsys.readouterr().out
    assert "vehicle instance" in out and "partition" in out
    doc = read_json(path)
    assert doc["problem"] == "vehicle"
    assert doc["manifest"]["command"].startswith("cvargreedy gen vehicle")
    assert len(doc["manifest"]["config_hash"]) == 16
    assert doc["manifest"]["version"] == __version__
    assert doc["manifest"]["instance_seed"] == 5
    instance = load_instance(doc)
    assert instance.ground.size == 4


def test_gen_sensor_random_grid(tmp_path):
    doc = read_json(gen_sensor(tmp_path))
    assert doc["problem"] == "sensor"
    assert len(doc["grid"]) == 6
    assert len(doc["sensor_cells"]) == 5
    assert load_instance(doc).matroid.k == 2


def test_gen_sensor_from_grid_file(tmp_path):
    grid_file = tmp_path / "grid.txt"
    grid_file.write_text("0010\n0000\n1001\n")
    path = tmp_path / "sen.json"
    code = main(["gen", "sensor", "--candidates", "3", "--select", "2",
                 "--grid", str(grid_file), "--seed", "1", "--out", str(path)])
    assert code == 0
    doc = read_json(path)
    assert doc["grid"] == ["0010", "0000", "1001"]
    assert doc["free_cell_count"] == 9


def test_gen_is_reproducible(tmp_path):
    # identical flags, same target: whole file identical minus the timestamp
    path = gen_vehicle(tmp_path, "a.json")
    first = minus_timestamp(path)
    gen_vehicle(tmp_path, "a.json")
    assert minus_timestamp(path) == first
    # different target path: the instance payload still matches exactly
    other = gen_vehicle(tmp_path, "b.json")
    assert data_section(other) == data_section(path)


# ------------------------------------------------------------------- run

def run_flags(instance, out, extra=()):
    return ["run", str(instance), "--alpha", "0.5", "--gamma", "20",
            "--delta", "2", "--samples", "50", "--seed", "7",
            "--out", str(out), *extra]


def test_run_outputs(tmp_path, capsys):
    instance = gen_vehicle(tmp_path)
    code = main(run_flags(instance, tmp_path / "res"))
    assert code == 0
    out = capsys.readouterr().out
    assert "risk-averse run" in out
    doc = read_json(tmp_path / "res.json")
    assert doc["config"]["alpha"] == 0.5
    assert doc["risk_label"] == "risk-averse"
    assert doc["instance"]["problem"] == "vehicle"
    assert len(doc["result"]["sweep"]) == 11
    assert doc["result"]["chosen_set"] == sorted(doc["result"]["chosen_set"])
    assert doc["bound"]["multiplicative"] <= 1.0
    curve = (tmp_path / "res_tau_curve.csv").read_text().splitlines()
    assert curve[5] == "tau,h_value,selected_set"
    assert len(curve) == 5 + 1 + 11
    assert curve[0].startswith("# command: cvargreedy run")


def test_run_reproducible_across_workers(tmp_path, monkeypatch):
    instance = gen_vehicle(tmp_path)
    assert main(run_flags(instance, tmp_path / "a")) == 0
    monkeypatch.setenv("CVARGREEDY_WORKERS", "3")
    assert main(run_flags(instance, tmp_path / "b")) == 0
    assert data_section(tmp_path / "a.json") == data_section(tmp_path / "b.json")
    assert (data_section(tmp_path / "a_tau_curve.csv")
            == data_section(tmp_path / "b_tau_curve.csv"))


def test_run_risk_neutral_label(tmp_path, capsys):
    instance = gen_sensor(tmp_path)
    code = main(["run", str(instance), "--alpha", "1", "--delta", "4",
                 "--samples", "30", "--out", str(tmp_path / "rn")])
    assert code == 0
    assert "risk-neutral run" in capsys.readouterr().out
    assert read_json(tmp_path / "rn.json")["risk_label"] == "risk-neutral"


def test_run_with_verification(tmp_path, capsys):
    instance = gen_sensor(tmp_path)
    code = main(["run", str(instance), "--alpha", "0.5", "--delta", "4",
                 "--samples", "40", "--verify", "--out", str(tmp_path / "v")])
    assert code == 0
    assert "guarantee: PASS" in capsys.readouterr().out
    block = read_json(tmp_path / "v.json")["verification"]
    assert block["passed"] is True
    assert block["slack"] >= -1e-9
    assert block["curvature_method"] == "exact_matroid_enumeration"
    assert block["grid_gap"] >= -1e-9


def test_run_verify_refuses_large_ground(tmp_path, capsys):
    instance = gen_vehicle(tmp_path, vehicles=5, demands=4)
    code = main(run_flags(instance, tmp_path / "big", extra=["--verify"]))
    assert code == 2
    err = capsys.readouterr().err
    assert "20 elements" in err and "cap" in err


def test_run_verify_rejects_fresh_policy(tmp_path, capsys):
    instance = gen_vehicle(tmp_path)
    code = main(run_flags(instance, tmp_path / "x",
                          extra=["--verify", "--scenario-policy", "fresh_per_tau"]))
    assert code == 2
    assert "common_random_numbers" in capsys.readouterr().err


# ------------------------------------------------------------------ sweep

def test_sweep_outputs(tmp_path, capsys):
    instance = gen_sensor(tmp_path)
    code = main(["sweep", str(instance), "--alphas", "0.2,1",
                 "--gamma", "20", "--delta", "4", "--samples", "40",
                 "--eval-samples", "60", "--bins", "5",
                 "--out", str(tmp_path / "sw")])
    assert code == 0
    out = capsys.readouterr().out
    assert "alpha 0.2 (risk-averse)" in out
    assert "alpha 1 (risk-neutral)" in out
    table = (tmp_path / "sw_alpha_table.csv").read_text().splitlines()
    assert table[5].startswith("alpha,h_value,tau,")
    assert len(table) == 5 + 1 + 2
    curves = data_section(tmp_path / "sw_tau_curves.csv")
    assert len(curves) == 1 + 2 * 6
    hist = data_section(tmp_path / "sw_histograms.csv")
    assert len(hist) == 1 + 2 * 5


def test_sweep_reproducible(tmp_path, monkeypatch):
    instance = gen_sensor(tmp_path)
    flags = ["sweep", str(instance), "--alphas", "0.3,1", "--gamma", "12",
             "--delta", "3", "--samples", "30", "--bins", "4"]
    assert main([*flags, "--out", str(tmp_path / "a")]) == 0
    monkeypatch.setenv("CVARGREEDY_WORKERS", "4")
    assert main([*flags, "--out", str(tmp_path / "b")]) == 0
    for suffix in ("alpha_table", "tau_curves", "histograms"):
        assert (data_section(tmp_path / f"a_{suffix}.csv")
                == data_section(tmp_path / f"b_{suffix}.csv"))


# ----------------------------------------------------------------- verify

def test_verify_command(tmp_path, capsys):
    instance = gen_sensor(tmp_path)
    report = tmp_path / "report.json"
    code = main(["verify", str(instance), "--alpha", "0.4", "--delta", "4",
                 "--samples", "40", "--out", str(report)])
    assert code == 0
    out = capsys.readouterr().out
    assert "guarantee: PASS" in out
    assert "certified lower bound" in out
    doc = read_json(report)
    assert doc["verification"]["passed"] is True
    assert doc["config"]["alpha"] == 0.4


# ------------------------------------------------------------- exit codes

def test_missing_instance_file(tmp_path, capsys):
    code = main(["run", str(tmp_path / "nope.json"), "--alpha", "0.5",
                 "--out", str(tmp_path / "x")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_bad_alpha(tmp_path, capsys):
    instance = gen_vehicle(tmp_path)
    code = main(["run", str(instance), "--alpha", "0", "--out",
                 str(tmp_path / "x")])
    assert code == 2
    assert "risk level" in capsys.readouterr().err


def test_unknown_problem_kind(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"problem": "warehouse"}))
    code = main(["run", str(bad), "--alpha", "0.5", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "unknown problem" in capsys.readouterr().err


def test_bad_worker_env(tmp_path, capsys, monkeypatch):
    instance = gen_vehicle(tmp_path)
    monkeypatch.setenv("CVARGREEDY_WORKERS", "many")
    code = main(run_flags(instance, tmp_path / "x"))
    assert code == 2
    assert "CVARGREEDY_WORKERS" in capsys.readouterr().err


def test_argparse_rejects_missing_alpha(tmp_path):
    with pytest.raises(SystemExit):
        main(["run", "whatever.json", "--out", str(tmp_path / "x")])
