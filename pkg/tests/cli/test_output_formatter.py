"""Tests for CLI output formatters."""

from __future__ import annotations

import json

from meshwalk.cli import output


def sample_report():
    return {
        "headline": "fig3b: final_residual=1.2e-01 channels=3 files=5 -> out",
        "title": "fig3b scattering channels",
        "channels": [
            {
                "alpha": 0,
                "band": "+",
                "q": 1.5707963,
                "incident": True,
                "born_abs": 0.0,
                "born_relative": 0.0,
                "measured": 1.0,
                "resolved": True,
            },
            {
                "alpha": -1,
                "band": "-",
                "q": -2.3561945,
                "incident": False,
                "born_abs": 0.485,
                "born_relative": 1.0,
                "measured": 0.21,
                "resolved": True,
            },
            {
                "alpha": 1,
                "band": "+",
                "q": 33.0,
                "incident": False,
                "born_abs": None,
                "born_relative": None,
                "measured": None,
                "resolved": False,
            },
        ],
        "artifacts": ["out/P.csv"],
    }


def test_summary_formatter_is_headline():
    assert output.OutputFormatter.format_report(sample_report()) == sample_report()["headline"]


def test_table_formatter_with_rich():
    text = output.OutputFormatter.format_report(sample_report(), "table")
    assert "fig3b scattering channels" in text
    assert "unresolved" in text
    assert "4.850e-01" in text


def test_table_formatter_without_rich(monkeypatch):
    monkeypatch.setattr(output, "RICH_AVAILABLE", False, raising=False)
    table = output.TableFormatter.format(sample_report())

    lines = table.splitlines()
    assert "measured" in lines[1]
    assert "+*" in table
    assert "unresolved" in table
    assert lines[-1] == sample_report()["headline"]


def test_table_without_channels_falls_back_to_headline():
    assert output.TableFormatter.format({"headline": "bands: 4 rows"}) == "bands: 4 rows"


def test_json_formatter_roundtrip():
    payload = json.loads(output.OutputFormatter.format_report(sample_report(), "json"))
    assert payload["channels"][1]["born_abs"] == 0.485
    assert payload["title"] == "fig3b scattering channels"
