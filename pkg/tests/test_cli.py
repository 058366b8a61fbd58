import json
import os
import subprocess
import sys

import pytest

from chirpwave.cli import build_parser, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compare_prints_errors(tmp_path, capsys):
    code, out, _ = run(["compare", "--state", "bessel:0", "--alpha", "0.5", "--t", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines()[1:])
    assert set(lines) == {"err_psi0", "err_psi1", "err_exact_vs_oracle"}
    assert float(lines["err_psi1"]) < float(lines["err_psi0"])
    assert float(lines["err_exact_vs_oracle"]) <= 1e-5


def test_figure_fig3_layout(tmp_path, capsys):
    code, _, _ = run(["figure", "--id", "fig3", "--out", str(tmp_path), "--jobs", "2"], capsys)
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "fig3").iterdir()) == [
        "a.csv", "b.csv", "c.csv", "d.csv", "report.json"]


def test_propagate_writes_field_and_report(tmp_path, capsys):
    code, out, _ = run(["propagate", "--state", "sinc:1", "--alpha", "3", "--t", "5", "--method", "exact",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    report = json.loads((tmp_path / "propagate" / "report.json").read_text())
    assert report["method"] == "exact_closed_form"
    assert report["s"] == 31.0
    assert report["errors"]["vs_exact"] == 0.0
    assert report["errors"]["vs_oracle"] <= 1e-5
    assert (tmp_path / "propagate" / "exact.csv").exists()


def test_sweep_table(tmp_path, capsys):
    code, out, _ = run(["sweep", "--state", "gaussian:1", "--alpha", "0.5,2", "--t", "1",
                        "--n", "2048", "--xmin", "-40", "--xmax", "40", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 3
    report = json.loads((tmp_path / "sweep" / "report.json").read_text())
    assert report["grid"] == {"n": 2048, "x_min": -40.0, "x_max": 40.0}


def test_env_var_sets_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CHIRP_OUT_DIR", str(tmp_path / "env"))
    assert run(["figure", "--id", "fig2"], capsys)[0] == 0
    assert (tmp_path / "env" / "fig2" / "report.json").exists()
    assert run(["figure", "--id", "fig2", "--out", str(tmp_path / "flag")], capsys)[0] == 0
    assert (tmp_path / "flag" / "fig2" / "report.json").exists()


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nstate = sinc:1\nalpha = 3\nt = 5\nquad-panels = 256\n")
    code, out, _ = run(["compare", "--config", str(cfg), "--alpha", "10"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "state sinc:1 alpha 10 t 5"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["compare", "--state", "sinc:1", "--alpha", "1"],
    ["compare", "--state", "wobble:1", "--alpha", "1", "--t", "1"],
    ["compare", "--state", "sinc:1", "--alpha", "-1", "--t", "1"],
    ["compare", "--state", "sinc:1", "--alpha", "1,2", "--t", "1"],
    ["compare", "--state", "sinc:1", "--alpha", "1", "--t", "1", "--n", "1000"],
    ["compare", "--state", "sinc:1", "--alpha", "1", "--t", "1", "--xmin", "5", "--xmax", "1"],
    ["figure", "--id", "fig9"],
    ["figure"],
    ["propagate", "--state", "airy:1", "--alpha", "1", "--t", "1", "--method", "exact"],
])
def test_argument_errors_exit_2(argv, tmp_path, capsys):
    code, _, err = run(argv + ["--out", str(tmp_path)] if argv != ["bogus"] else argv, capsys)
    assert code == 2
    assert "error" in err


def test_unknown_config_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(["compare", "--config", str(cfg)], capsys)
    assert code == 2 and "colour" in err


def test_numerical_guard_exit_1(tmp_path, capsys):
    code, _, err = run(["compare", "--state", "sinc:500", "--alpha", "100", "--t", "100", "--out", str(tmp_path)], capsys)
    assert code == 1
    assert "alpha=100, t=100" in err


def test_help_lists_every_flag():
    text = build_parser()._subparsers._group_actions[0].choices["figure"].format_help()
    for flag in ("--state", "--alpha", "--t", "--n", "--xmin", "--xmax", "--out", "--jobs",
                 "--quad-panels", "--id", "--config"):
        assert flag in text


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "chirpwave", "figure", "--id", "fig2", "--out", str(tmp_path)],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0, proc.stderr
    assert "fig2" in proc.stdout
