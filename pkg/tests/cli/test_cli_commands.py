"""Tests for the meshwalk CLI commands."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from meshwalk.cli import cli
from meshwalk.cli import commands

KK_CONFIG = """
name: kk-short
coin: {beta: 1.4922565104551517}
drift: 0.8
potential:
  kind: kk
  poles:
    - {amplitude: "-1j", position: "90+1j"}
steps: 40
record: {maps: [P], stride: 5}
analysis: {require_separation: false}
"""


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def kk_config(tmp_path: Path) -> Path:
    path = tmp_path / "kk.yaml"
    path.write_text(KK_CONFIG)
    return path


def test_run_writes_artifacts(runner, kk_config, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(cli, ["run", str(kk_config), "--out", str(out)])

    assert result.exit_code == 0, result.output
    assert "kk-short: final_residual=" in result.output
    assert {p.name for p in out.iterdir()} == {"P.csv", "residual.csv", "channels.csv", "summary.json"}


def test_run_overrides_steps_and_seed(runner, kk_config, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(cli, ["run", str(kk_config), "--steps", "12", "--seed", "3", "--out", str(out), "--quiet"])

    assert result.exit_code == 0, result.output
    assert result.output == ""
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["steps"] == 12
    assert summary["config"]["seed"] == 3
    assert summary["residual_series"]["points"] == 13


def test_run_missing_config(runner, tmp_path):
    result = runner.invoke(cli, ["run", str(tmp_path / "missing.yaml")])
    assert result.exit_code == 1
    assert "config not found" in result.output


def test_run_invalid_config(runner, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("coin: {beta: 5}\nsteps: 3\n")
    result = runner.invoke(cli, ["run", str(path)])

    assert result.exit_code == 1
    assert "invalid config" in result.output


def test_run_refuses_unfinished_scattering(runner, tmp_path):
    path = tmp_path / "short.yaml"
    path.write_text(KK_CONFIG.replace("analysis: {require_separation: false}", ""))
    result = runner.invoke(cli, ["run", str(path), "--out", str(tmp_path / "out")])

    assert result.exit_code == 1
    assert "has not passed the excitation front" in result.output


def test_run_json_format(runner, kk_config, tmp_path):
    result = runner.invoke(cli, ["run", str(kk_config), "--out", str(tmp_path), "--format", "json"])
    report = json.loads(result.output)

    assert report["title"] == "kk-short scattering channels"
    assert len(report["channels"]) == 22
    assert report["final_residual"] >= 0


def test_out_flag_beats_file_and_file_beats_environment(runner, tmp_path, monkeypatch):
    path = tmp_path / "with-dir.yaml"
    path.write_text(KK_CONFIG + f"output: {{dir: {tmp_path / 'from-file'}}}\n")
    monkeypatch.setenv("MESHWALK_OUT_DIR", str(tmp_path / "from-env"))

    runner.invoke(cli, ["run", str(path), "--quiet"])
    assert (tmp_path / "from-file" / "summary.json").exists()
    assert not (tmp_path / "from-env").exists()

    runner.invoke(cli, ["run", str(path), "--quiet", "--out", str(tmp_path / "from-flag")])
    assert (tmp_path / "from-flag" / "summary.json").exists()


def test_bands_command(runner, tmp_path):
    result = runner.invoke(cli, ["bands", "--beta", "1.0471975511965976", "--v", "0.8", "--points", "32", "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    assert "bands: 32 rows" in result.output
    lines = (tmp_path / "bands.csv").read_text().splitlines()
    assert len(lines) == 33


def test_channels_command_with_born_weights(runner, kk_config, tmp_path):
    result = runner.invoke(
        cli,
        [
            "channels",
            "--beta", "1.4922565104551517",
            "--v", "0.8",
            "--alpha-min", "-2",
            "--alpha-max", "2",
            "--config", str(kk_config),
            "--out", str(tmp_path),
            "--format", "table",
        ],
    )

    assert result.exit_code == 0, result.output
    assert "channels: 10 roots" in result.output
    header = (tmp_path / "channels.csv").read_text().splitlines()[0]
    assert header.startswith("alpha,band,q,incident,born_re")


def test_channels_command_rejects_slow_drift(runner, tmp_path):
    result = runner.invoke(cli, ["channels", "--beta", "1.0471975511965976", "--v", "0.3", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "must exceed" in result.output


def test_channels_config_without_potential(runner, tmp_path):
    path = tmp_path / "clean.yaml"
    path.write_text("coin: {beta: 1.0}\nsteps: 3\n")
    result = runner.invoke(cli, ["channels", "--beta", "1.0", "--v", "0.8", "--config", str(path)])

    assert result.exit_code == 1
    assert "config has no potential" in result.output


@pytest.mark.parametrize("method", ["auto", "fft"])
def test_spectrum_command(runner, kk_config, tmp_path, method):
    result = runner.invoke(
        cli,
        ["spectrum", str(kk_config), "--points", "21", "--method", method, "--out", str(tmp_path)],
    )

    assert result.exit_code == 0, result.output
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "q,re,im,abs"
    assert len(lines) == 22


def test_preset_fig2(runner, tmp_path):
    result = runner.invoke(cli, ["preset", "fig2", "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    assert result.output.startswith("fig2: channels: 14 roots")
    assert (tmp_path / "bands.csv").exists()
    assert (tmp_path / "channels.csv").exists()


def test_preset_scattering_dispatches_to_runner(runner, tmp_path, monkeypatch):
    seen = {}

    def fake_run(document, out_dir):
        seen["name"] = document.name
        seen["steps"] = document.steps
        seen["seed"] = document.seed
        seen["out"] = out_dir
        return {"headline": "done"}

    monkeypatch.setattr(commands, "_run_document", fake_run)
    result = runner.invoke(cli, ["preset", "fig4", "--seed", "2", "--steps", "50", "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    assert seen == {"name": "fig4", "steps": 50, "seed": 2, "out": tmp_path}
    assert result.output.strip() == "done"


def test_preset_rejects_unknown_name(runner):
    result = runner.invoke(cli, ["preset", "fig9"])
    assert result.exit_code == 2
