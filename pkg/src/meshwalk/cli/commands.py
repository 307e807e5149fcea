"""Click commands for the meshwalk CLI."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np
from click.core import ParameterSource

from ..bands import ChannelSearchError, MovingFrameParams, band_table, default_q_grid, enumerate_channels
from ..born import born_weights
from ..config import ConfigError, ExperimentFile, apply_overrides, load_config
from ..constants import DEFAULT_ALPHA_RANGE, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV_VAR
from ..harness import IncompleteScatteringError, run_pair
from ..lattice import LatticeOverflowError
from ..potentials import spectrum, spectrum_fft, default_fft_grid
from ..presets import FIG2, PRESET_NAMES, scattering_preset
from ..writers import (
    channel_table,
    write_band_table,
    write_channel_table,
    write_run_outputs,
    write_spectrum,
)
from .output import OutputFormatter

RUN_ERRORS = (
    ConfigError,
    ValueError,
    LatticeOverflowError,
    IncompleteScatteringError,
    ChannelSearchError,
    OSError,
)


def _output_options(func: Callable) -> Callable:
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(["summary", "table", "json"], case_sensitive=False),
        default="summary",
        help="Stdout format (default: summary)",
    )(func)
    func = click.option("--quiet", is_flag=True, help="Do not print the result summary")(func)
    func = click.option(
        "--out",
        "out_dir",
        type=click.Path(file_okay=False, path_type=Path),
        envvar=OUTPUT_DIR_ENV_VAR,
        help=f"Output directory (default: ${OUTPUT_DIR_ENV_VAR} or ./{DEFAULT_OUTPUT_DIR})",
    )(func)
    return func


def _resolve_out_dir(out_dir: Optional[Path], document: Optional[ExperimentFile] = None) -> Path:
    """--out beats the file's output.dir, which beats the environment default."""
    ctx = click.get_current_context()
    from_environment = ctx.get_parameter_source("out_dir") == ParameterSource.ENVIRONMENT
    if out_dir is not None and not from_environment:
        return out_dir
    if document is not None and document.output.dir:
        return Path(document.output.dir)
    return out_dir if out_dir is not None else Path(DEFAULT_OUTPUT_DIR)


def _emit(report: Dict[str, Any], output_format: str, quiet: bool) -> None:
    if quiet:
        return
    click.echo(OutputFormatter.format_report(report, output_format.lower()))


def _run_document(document: ExperimentFile, out_dir: Path) -> Dict[str, Any]:
    try:
        result = run_pair(document.to_experiment())
        written = write_run_outputs(result, out_dir, config_echo=document.echo())
    except RUN_ERRORS as exc:
        raise click.ClickException(str(exc)) from exc

    rows = [] if result.channels is None else channel_table(result.channels, result.born, result.measurement)
    return {
        "headline": (
            f"{document.name}: final_residual={result.final_residual:.6e} "
            f"channels={len(rows)} files={len(written)} -> {out_dir}"
        ),
        "title": f"{document.name} scattering channels",
        "final_residual": result.final_residual,
        "channels": rows,
        "artifacts": [str(path) for path in written],
        "runtime_seconds": result.runtime_seconds,
    }


@click.command()
@click.argument("config_file", type=click.Path(path_type=Path))
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Override the config seed")
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Override the number of steps")
@_output_options
def run(
    config_file: Path,
    seed: Optional[int],
    steps: Optional[int],
    out_dir: Optional[Path],
    quiet: bool,
    output_format: str,
) -> None:
    """Run the paired experiment described by CONFIG_FILE (YAML)."""
    try:
        document = load_config(config_file)
        document = apply_overrides(document, seed=seed, steps=steps)
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc)) from exc
    except ConfigError as exc:
        raise click.ClickException(f"invalid config: {exc}") from exc

    report = _run_document(document, _resolve_out_dir(out_dir, document))
    _emit(report, output_format, quiet)


@click.command()
@click.option("--beta", type=float, required=True, help="Coupling angle in radians")
@click.option("--v", "drift", type=float, required=True, help="Drift speed (sites per step)")
@click.option("--points", type=click.IntRange(min=2), default=512, help="q samples on (-pi, pi] (default: 512)")
@_output_options
def bands(
    beta: float,
    drift: float,
    points: int,
    out_dir: Optional[Path],
    quiet: bool,
    output_format: str,
) -> None:
    """Write the lab- and moving-frame band table."""
    try:
        table = band_table(MovingFrameParams(beta, drift), default_q_grid(points))
        path = write_band_table(table, _resolve_out_dir(out_dir) / "bands.csv")
    except RUN_ERRORS as exc:
        raise click.ClickException(str(exc)) from exc
    min_slope = float(np.min(np.diff(table.eps_plus) / np.diff(table.q)))
    _emit(
        {
            "headline": f"bands: {table.q.size} rows, min d(eps+)/dq={min_slope:.6f} -> {path}",
            "artifacts": [str(path)],
        },
        output_format,
        quiet,
    )


def _channel_report(beta: float, drift: float, q0: float, alpha_range, band: str, shape, out_dir: Path) -> Dict[str, Any]:
    try:
        channels = enumerate_channels(MovingFrameParams(beta, drift), q0, alpha_range, band)
        prediction = born_weights(channels, shape) if shape is not None else None
        path = write_channel_table(channels, out_dir / "channels.csv", prediction)
    except RUN_ERRORS as exc:
        raise click.ClickException(str(exc)) from exc
    worst = max(channels.residual(channel) for channel in channels)
    return {
        "headline": f"channels: {len(channels)} roots, max residual {worst:.2e} -> {path}",
        "title": f"Channels for beta={beta:.6g}, v={drift:g}, q0={q0:.6g}",
        "channels": channel_table(channels, prediction),
        "artifacts": [str(path)],
    }


@click.command()
@click.option("--beta", type=float, required=True, help="Coupling angle in radians")
@click.option("--v", "drift", type=float, required=True, help="Drift speed (must exceed cos beta)")
@click.option("--q0", type=float, default=math.pi / 2, show_default=True, help="Incident Bloch wavenumber")
@click.option("--alpha-min", type=int, default=DEFAULT_ALPHA_RANGE[0], show_default=True)
@click.option("--alpha-max", type=int, default=DEFAULT_ALPHA_RANGE[1], show_default=True)
@click.option("--band", type=click.Choice(["+", "-"]), default="+", show_default=True, help="Incident band")
@click.option(
    "--config",
    "config_file",
    type=click.Path(path_type=Path),
    default=None,
    help="Experiment file whose potential provides Born weights",
)
@_output_options
def channels(
    beta: float,
    drift: float,
    q0: float,
    alpha_min: int,
    alpha_max: int,
    band: str,
    config_file: Optional[Path],
    out_dir: Optional[Path],
    quiet: bool,
    output_format: str,
) -> None:
    """Enumerate scattering channels eps(q) = eps0 + 2 pi alpha."""
    shape = None
    if config_file is not None:
        shape = _load_shape(config_file)
    report = _channel_report(beta, drift, q0, (alpha_min, alpha_max), band, shape, _resolve_out_dir(out_dir))
    _emit(report, output_format, quiet)


def _load_shape(config_file: Path):
    try:
        shape = load_config(config_file).build_shape()
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc)) from exc
    except ConfigError as exc:
        raise click.ClickException(f"invalid config: {exc}") from exc
    if shape is None:
        raise click.ClickException(f"{config_file}: config has no potential")
    return shape


@click.command(name="spectrum")
@click.argument("config_file", type=click.Path(path_type=Path))
@click.option("--q-min", type=float, default=-math.pi, show_default=True)
@click.option("--q-max", type=float, default=math.pi, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=401, show_default=True)
@click.option(
    "--method",
    type=click.Choice(["auto", "fft"]),
    default="auto",
    show_default=True,
    help="auto uses the analytic spectrum when the shape has one",
)
@_output_options
def spectrum_command(
    config_file: Path,
    q_min: float,
    q_max: float,
    points: int,
    method: str,
    out_dir: Optional[Path],
    quiet: bool,
    output_format: str,
) -> None:
    """Fourier spectrum phi_hat(q) of the potential in CONFIG_FILE."""
    shape = _load_shape(config_file)
    q = np.linspace(q_min, q_max, points)
    try:
        if method == "fft":
            values = spectrum_fft(shape, default_fft_grid(shape), q)
        else:
            values = spectrum(shape, q)
        path = write_spectrum(q, values, _resolve_out_dir(out_dir) / "spectrum.csv")
    except RUN_ERRORS as exc:
        raise click.ClickException(str(exc)) from exc
    peak = float(np.max(np.abs(values)))
    _emit(
        {"headline": f"spectrum: {points} points, max |phi_hat|={peak:.6e} -> {path}", "artifacts": [str(path)]},
        output_format,
        quiet,
    )


@click.command()
@click.argument("name", type=click.Choice(list(PRESET_NAMES)))
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed for random potentials")
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Override the number of steps")
@_output_options
def preset(
    name: str,
    seed: Optional[int],
    steps: Optional[int],
    out_dir: Optional[Path],
    quiet: bool,
    output_format: str,
) -> None:
    """Run a bundled scenario (fig2, fig3a, fig3b, fig3c, fig4)."""
    target = _resolve_out_dir(out_dir)
    if name == "fig2":
        params = MovingFrameParams(FIG2.beta, FIG2.v)
        try:
            band_path = write_band_table(band_table(params), target / "bands.csv")
        except RUN_ERRORS as exc:
            raise click.ClickException(str(exc)) from exc
        report = _channel_report(FIG2.beta, FIG2.v, FIG2.q0, FIG2.alpha_range, "+", None, target)
        report["artifacts"].insert(0, str(band_path))
        report["headline"] = f"fig2: {report['headline']}"
    else:
        document = scattering_preset(name, seed=seed or 0, steps=steps)
        report = _run_document(document, target)
    _emit(report, output_format, quiet)


__all__: List[str] = ["run", "bands", "channels", "spectrum_command", "preset"]
