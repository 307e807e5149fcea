"""Output formatters for the meshwalk CLI."""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional

try:
    from rich.console import Console
    from rich.table import Table
    from rich.text import Text

    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False


class OutputFormatter:
    """Dispatches a command report to the requested format."""

    @staticmethod
    def format_report(report: Dict[str, Any], format_type: str = "summary") -> str:
        """Format a command report.

        Args:
            report: Mapping with ``headline`` (one-line result), optional
                ``channels`` rows, ``artifacts`` and ``details``.
            format_type: "json", "table" or "summary"

        Returns:
            Formatted output string
        """
        if format_type == "json":
            return JSONFormatter.format(report)
        if format_type == "table":
            return TableFormatter.format(report)
        return SummaryFormatter.format(report)


class JSONFormatter:
    @staticmethod
    def format(report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2, sort_keys=True, default=str)


class SummaryFormatter:
    """The one-line summary."""

    @staticmethod
    def format(report: Dict[str, Any]) -> str:
        return str(report.get("headline", ""))


def _fmt_number(value: Optional[float], spec: str = ".3e") -> str:
    return "-" if value is None else format(value, spec)


def _measured_text(row: Dict[str, Any]) -> str:
    if row.get("resolved") is False:
        return "unresolved"
    return _fmt_number(row.get("measured"))


class TableFormatter:
    """Channel table rendered with Rich."""

    @staticmethod
    def format(report: Dict[str, Any]) -> str:
        rows: List[Dict[str, Any]] = report.get("channels") or []
        headline = str(report.get("headline", ""))
        if not rows:
            return headline
        if not RICH_AVAILABLE:
            return TableFormatter._format_simple(rows, headline)

        console = Console()
        table = Table(title=report.get("title", "Scattering channels"), show_header=True)
        table.add_column("alpha", justify="right")
        table.add_column("band", justify="center")
        table.add_column("q", justify="right", style="cyan")
        table.add_column("|born|", justify="right")
        table.add_column("relative", justify="right")
        table.add_column("measured", justify="right")

        for row in rows:
            band = Text(row["band"], style="bold green" if row.get("incident") else "")
            table.add_row(
                str(row["alpha"]),
                band,
                f"{row['q']:.6f}",
                _fmt_number(row.get("born_abs")),
                _fmt_number(row.get("born_relative"), ".3f"),
                _measured_text(row),
            )

        with console.capture() as capture:
            console.print(table)
            console.print(f"[bold]{headline}[/bold]")
        return capture.get()

    @staticmethod
    def _format_simple(rows: List[Dict[str, Any]], headline: str) -> str:
        lines = ["-" * 72, f"{'alpha':>5} {'band':^4} {'q':>14} {'|born|':>12} {'relative':>9} {'measured':>12}", "-" * 72]
        for row in rows:
            marker = "*" if row.get("incident") else " "
            lines.append(
                f"{row['alpha']:>5} {row['band'] + marker:^4} {row['q']:>14.6f} "
                f"{_fmt_number(row.get('born_abs')):>12} "
                f"{_fmt_number(row.get('born_relative'), '.3f'):>9} {_measured_text(row):>12}"
            )
        lines.append("-" * 72)
        lines.append(headline)
        return "\n".join(lines)


__all__ = ["OutputFormatter", "JSONFormatter", "SummaryFormatter", "TableFormatter", "RICH_AVAILABLE"]
