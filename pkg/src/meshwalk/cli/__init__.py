"""Command-line interface for meshwalk.

Runs paired mesh-lattice experiments from YAML files or bundled presets and
writes the resulting maps, residual series, channel tables and summaries as
CSV/JSON for external plotting.
"""

import logging
import sys

import click

from .commands import bands, channels, preset, run, spectrum_command

try:
    from rich.logging import RichHandler

    RICH_LOGGING = True
except ImportError:
    RICH_LOGGING = False


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG

    root = logging.getLogger("meshwalk")
    root.setLevel(level)
    if any(not isinstance(h, logging.NullHandler) for h in root.handlers):
        return
    if RICH_LOGGING:
        handler: logging.Handler = RichHandler(show_path=False, rich_tracebacks=False)
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)


@click.group()
@click.version_option(package_name="meshwalk")
@click.option("-v", "--verbose", count=True, help="Log progress (-v) or debug detail (-vv) to stderr")
def cli(verbose: int) -> None:
    """meshwalk - drifting potentials on a photonic mesh lattice.

    Simulate discrete-time quantum walks with and without a drifting complex
    potential, and measure how invisible the potential is.
    """
    _configure_logging(verbose)


cli.add_command(run)
cli.add_command(bands)
cli.add_command(channels)
cli.add_command(spectrum_command)
cli.add_command(preset)


def main():
    """Entry point for the meshwalk command."""
    try:
        cli()
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)


__all__ = ["cli", "main"]
