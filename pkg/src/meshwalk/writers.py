"""CSV and JSON artifacts for plotting and archiving experiment results."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .bands import BandTable, ChannelSet
from .born import BornPrediction
from .constants import SUMMARY_FORMAT_VERSION
from .harness import ChannelMeasurement, ExperimentResult, SpaceTimeMap, residual_series

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

REAL_MAP_HEADER = "m,n,value"
COMPLEX_MAP_HEADER = "m,n,re,im"
RESIDUAL_HEADER = "m,r"
CHANNEL_COLUMNS = (
    "alpha",
    "band",
    "q",
    "incident",
    "born_re",
    "born_im",
    "born_abs",
    "born_relative",
    "measured",
    "resolved",
)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _write_text(path: PathLike, text: str) -> Path:
    target = Path(path)
    tmp_path = target.with_name(target.name + ".tmp")
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with tmp_path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        tmp_path.replace(target)
    except OSError as exc:
        raise OSError(f"Failed to write {target}: {exc}") from exc
    logger.debug("Wrote artifact", extra={"path": str(target), "bytes": len(text)})
    return target


def write_field_map(field_map: SpaceTimeMap, path: PathLike) -> Path:
    """Rows ``m,n,value`` (real maps) or ``m,n,re,im`` (complex fields) in (m, n) order."""
    lines: List[str]
    if field_map.is_complex:
        lines = [COMPLEX_MAP_HEADER]
        lines.extend(
            f"{m},{n},{_fmt(value.real)},{_fmt(value.imag)}" for m, n, value in field_map.items()
        )
    else:
        lines = [REAL_MAP_HEADER]
        lines.extend(f"{m},{n},{_fmt(value)}" for m, n, value in field_map.items())
    return _write_text(path, "\n".join(lines) + "\n")


def read_field_map(path: PathLike, name: Optional[str] = None) -> SpaceTimeMap:
    source = Path(path)
    try:
        with source.open("r", encoding="utf-8") as handle:
            header = handle.readline().strip()
    except OSError as exc:
        raise OSError(f"Failed to read {source}: {exc}") from exc
    if header not in (REAL_MAP_HEADER, COMPLEX_MAP_HEADER):
        raise ValueError(f"{source}: unrecognised map header {header!r}")

    table = np.loadtxt(source, delimiter=",", skiprows=1, ndmin=2, dtype=np.float64)
    m_col = table[:, 0].astype(np.int64)
    n_col = table[:, 1].astype(np.int64)
    steps = np.unique(m_col)
    sites = np.unique(n_col)
    if header == COMPLEX_MAP_HEADER:
        values = np.zeros((steps.size, sites.size), dtype=np.complex128)
        data = table[:, 2] + 1j * table[:, 3]
    else:
        values = np.zeros((steps.size, sites.size), dtype=np.float64)
        data = table[:, 2]
    values[np.searchsorted(steps, m_col), np.searchsorted(sites, n_col)] = data
    return SpaceTimeMap(name or source.stem, steps, sites, values)


def write_residual_series(result: ExperimentResult, path: PathLike) -> Path:
    lines = [RESIDUAL_HEADER]
    lines.extend(f"{m},{_fmt(r)}" for m, r in residual_series(result))
    return _write_text(path, "\n".join(lines) + "\n")


def write_band_table(table: BandTable, path: PathLike) -> Path:
    lines = [",".join(BandTable.columns)]
    lines.extend(",".join(_fmt(value) for value in row) for row in table.rows())
    return _write_text(path, "\n".join(lines) + "\n")


def write_spectrum(q: Sequence[float], values: Sequence[complex], path: PathLike) -> Path:
    lines = ["q,re,im,abs"]
    lines.extend(
        f"{_fmt(k)},{_fmt(z.real)},{_fmt(z.imag)},{_fmt(abs(z))}"
        for k, z in zip(np.asarray(q, dtype=np.float64), np.asarray(values, dtype=np.complex128))
    )
    return _write_text(path, "\n".join(lines) + "\n")


def channel_table(
    channels: ChannelSet,
    prediction: Optional[BornPrediction] = None,
    measurement: Optional[ChannelMeasurement] = None,
) -> List[Dict[str, Any]]:
    """One row per channel merging enumeration, Born weights and measurement."""
    rows = []
    for channel in channels:
        weight = channel.born_weight
        relative = None
        if prediction is not None:
            entry = prediction.find(channel.alpha, channel.band)
            weight, relative = entry.weight, abs(entry.relative)
        measured = resolved = None
        if measurement is not None:
            found = measurement.find(channel.alpha, channel.band)
            measured, resolved = found.amplitude, found.resolved
        rows.append(
            {
                "alpha": channel.alpha,
                "band": channel.band.value,
                "q": channel.q,
                "incident": channel.incident,
                "born_weight": None if weight is None else [weight.real, weight.imag],
                "born_abs": None if weight is None else abs(weight),
                "born_relative": relative,
                "measured": measured,
                "resolved": resolved,
            }
        )
    return rows


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return _fmt(value)


def write_channel_table(
    channels: ChannelSet,
    path: PathLike,
    prediction: Optional[BornPrediction] = None,
    measurement: Optional[ChannelMeasurement] = None,
) -> Path:
    lines = [",".join(CHANNEL_COLUMNS)]
    for row in channel_table(channels, prediction, measurement):
        weight = row["born_weight"] or [None, None]
        cells = (
            row["alpha"],
            row["band"],
            row["q"],
            row["incident"],
            weight[0],
            weight[1],
            row["born_abs"],
            row["born_relative"],
            row["measured"],
            row["resolved"],
        )
        lines.append(",".join(_cell(cell) for cell in cells))
    return _write_text(path, "\n".join(lines) + "\n")


def summary_document(
    result: ExperimentResult,
    prediction: Optional[BornPrediction] = None,
    *,
    config_echo: Optional[Dict[str, Any]] = None,
    artifacts: Sequence[str] = (),
    residual_file: Optional[str] = None,
) -> Dict[str, Any]:
    prediction = prediction if prediction is not None else result.born
    config = result.config
    if config_echo is None and config is not None:
        config_echo = {
            "name": config.name,
            "beta": config.coin.beta,
            "drift": config.drift_speed,
            "steps": config.steps,
            "excitation": config.excitation.to_dict(),
            "window": list(config.resolved_window()),
        }
    measurement = result.measurement
    return {
        "format_version": SUMMARY_FORMAT_VERSION,
        "config": config_echo,
        "final_residual": result.final_residual,
        "residual_series": {"path": residual_file, "points": int(result.residual_steps.size)},
        "separation": None if result.separation is None else result.separation.to_dict(),
        "channels": [] if result.channels is None else channel_table(result.channels, prediction, measurement),
        "incident": None
        if result.channels is None
        else {"q0": result.channels.q0, "eps0": result.channels.eps0, "band": result.channels.incident_band.value},
        "measurement": None
        if measurement is None
        else {"noise_floor": measurement.noise_floor, "normalization": measurement.normalization},
        "born_caveat": None if prediction is None else prediction.caveat,
        "runtime_seconds": result.runtime_seconds,
        "artifacts": sorted(artifacts),
    }


def write_summary(
    result: ExperimentResult,
    prediction: Optional[BornPrediction],
    path: PathLike,
    *,
    config_echo: Optional[Dict[str, Any]] = None,
    artifacts: Sequence[str] = (),
    residual_file: Optional[str] = None,
) -> Path:
    document = summary_document(
        result,
        prediction,
        config_echo=config_echo,
        artifacts=artifacts,
        residual_file=residual_file,
    )
    return _write_text(path, json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def write_run_outputs(
    result: ExperimentResult,
    out_dir: PathLike,
    config_echo: Optional[Dict[str, Any]] = None,
) -> List[Path]:
    """Write every recorded map, the residual series, channels and the summary."""
    directory = Path(out_dir)
    written: List[Path] = []
    for name, field_map in sorted(result.maps.items()):
        filename = f"field_{name}.csv" if name in ("u", "v") else f"{name}.csv"
        written.append(write_field_map(field_map, directory / filename))
    residual_path = write_residual_series(result, directory / "residual.csv")
    written.append(residual_path)
    if result.channels is not None:
        written.append(
            write_channel_table(result.channels, directory / "channels.csv", result.born, result.measurement)
        )
    summary_path = directory / "summary.json"
    artifact_names = [path.name for path in written] + [summary_path.name]
    written.append(
        write_summary(
            result,
            result.born,
            summary_path,
            config_echo=config_echo,
            artifacts=artifact_names,
            residual_file=residual_path.name,
        )
    )
    logger.info("Wrote run artifacts", extra={"out_dir": str(directory), "files": artifact_names})
    return written


__all__ = [
    "write_field_map",
    "read_field_map",
    "write_residual_series",
    "write_band_table",
    "write_spectrum",
    "channel_table",
    "write_channel_table",
    "summary_document",
    "write_summary",
    "write_run_outputs",
]
