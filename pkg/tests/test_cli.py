"""CLI subcommands, exit codes and error reporting."""

import json

import pytest

from trustopt import dump_config, load_preset
from trustopt.cli import main

TINY = {
    "name": "tiny",
    "seed": 77,
    "repetitions": 2,
    "algorithms": ["small_society", "island_model"],
    "problems": [{"objective": "sphere", "dimension": 2, "max_steps": 6}],
    "overrides": {"population_size": 3, "offspring_size": 4, "epoch_length": 3},
}


@pytest.fixture()
def manifest_path(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(TINY))
    return path


def test_validate_manifest_ok(manifest_path, capsys):
    assert main(["validate", "--manifest", str(manifest_path)]) == 0
    assert "manifest ok" in capsys.readouterr().out


def test_validate_config_ok(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    dump_config(load_preset("exploration"), path)
    assert main(["validate", "--config", str(path)]) == 0
    assert "config ok" in capsys.readouterr().out


def test_validate_names_unknown_objective(tmp_path, capsys):
    bad = dict(TINY)
    bad["problems"] = [{"objective": "warp_core", "dimension": 2, "max_steps": 5}]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["validate", "--manifest", str(path)]) == 2
    err = capsys.readouterr().err
    assert "warp_core" in err
    assert err.startswith("error:")


def test_presets_overview_lists_all(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for slug in ("strong_leadership", "exploration", "small_society",
                 "large_society", "high_diversity", "island_model"):
        assert slug in out
    assert "Strong leadership" in out


def test_presets_single_prints_json(capsys):
    assert main(["presets", "small_society"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["agent_count"] == 5
    assert data["credibility"]["kind"] == "trust"


def test_presets_unknown_name_exits_2(capsys):
    assert main(["presets", "utopia"]) == 2
    assert "utopia" in capsys.readouterr().err


def test_run_writes_outputs(manifest_path, tmp_path, capsys):
    out = tmp_path / "res"
    assert main(["run", "--manifest", str(manifest_path), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "summary_sphere_d2.csv" in printed
    assert len(list(out.glob("trace_*.csv"))) == 4
    assert (out / "summary_sphere_d2.csv").exists()


def test_run_downsample_flag(manifest_path, tmp_path):
    out = tmp_path / "res"
    assert main(["run", "--manifest", str(manifest_path), "--out", str(out),
                 "--downsample", "4"]) == 0
    lines = (out / "trace_sphere_d2_small_society_rep0.csv").read_text().splitlines()
    steps = {int(l.split(",")[0]) for l in lines[1:]}
    assert steps == {1, 5, 6}
    assert main(["run", "--manifest", str(manifest_path), "--out", str(out),
                 "--downsample", "0"]) == 2


def test_stats_and_plot_pipeline(manifest_path, tmp_path, capsys):
    out = tmp_path / "res"
    main(["run", "--manifest", str(manifest_path), "--out", str(out)])
    capsys.readouterr()

    assert main(["stats", str(out), "--alpha", "0.05"]) == 0
    assert "stats_report.txt" in capsys.readouterr().out
    assert (out / "stats_omnibus.csv").exists()
    assert (out / "stats_vs_baseline.csv").exists()

    assert main(["plot", str(out), "--log-scale", "auto"]) == 0
    assert (out / "convergence_sphere_d2.svg").exists()
    svg = (out / "convergence_sphere_d2.svg").read_text()
    assert svg.count("<polyline") == 2


def test_stats_rejects_bad_alpha_and_empty_dir(tmp_path, capsys):
    (tmp_path / "summary_sphere_d2.csv").write_text(
        "problem,dim,algorithm,repetition,final_best,steps,seed\n"
        "sphere,2,a,0,1.0,5,7\nsphere,2,b,0,2.0,5,7\n")
    assert main(["stats", str(tmp_path), "--alpha", "2.0"]) == 2
    capsys.readouterr()
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["stats", str(empty)]) == 2
    assert "no summary CSVs" in capsys.readouterr().err


def test_plot_empty_dir_exits_2(tmp_path, capsys):
    assert main(["plot", str(tmp_path)]) == 2
    assert "no trace CSVs" in capsys.readouterr().err


def test_malformed_input_exits_1(tmp_path, capsys):
    (tmp_path / "summary_sphere_d2.csv").write_text("not,a,header\n1,2,3\n")
    assert main(["stats", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_run_rejects_bad_jobs(manifest_path, tmp_path, capsys):
    assert main(["run", "--manifest", str(manifest_path),
                 "--out", str(tmp_path / "x"), "--jobs", "0"]) == 2
    assert "--jobs" in capsys.readouterr().err
