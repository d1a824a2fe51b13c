"""
Rich console components for run summaries.

Functions:
    ui_modern_table: Styled table with theme integration
    ui_key_value_table: Two-column table of named values
    ui_observable_table: First/last observable rows side by side
    ui_rows_table: One row per report entry
    ui_block_header: Panel header for a run
    ui_section_header: Section separator with horizontal rule
    ui_error_message: Error panel for an exception
    ui_success_message: Success panel

Example:
    >>> from ui.components import ui_key_value_table
    >>> console.print(ui_key_value_table("Drift", {"mass": 1e-15}))
"""

import math
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

from rich import box
from rich.console import Group
from rich.panel import Panel
from rich.rule import Rule
from rich.table import Table
from rich.text import Text

from ui.theme import THEME

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def format_value(value: Any) -> str:
    """Compact display form of a report value (files keep full precision)."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return f"{value:.10g}"
    return str(value)


def ui_modern_table(title: str, show_line: bool = False, expand: bool = True,
                    box_style: Optional[box.Box] = None) -> Table:
    """
    Create a table with the theme's title, header and border styles.

    Raises:
        ValueError: If the title is empty.
    """
    if not isinstance(title, str) or not title.strip():
        raise ValueError("title must be a non-empty string")
    return Table(
        title=title,
        title_style=THEME.table_title,
        title_justify="left",
        box=box_style or box.SIMPLE,
        pad_edge=False,
        expand=expand,
        style=THEME.table_style,
        header_style=THEME.table_header,
        border_style=THEME.table_border,
        show_lines=show_line,
    )


def ui_key_value_table(title: str, values: Mapping[str, Any],
                       verdicts: Optional[Mapping[str, Optional[bool]]] = None) -> Table:
    """
    Two-column table; keys found in `verdicts` are colored pass/fail.

    Example:
        >>> ui_key_value_table("Strichartz", {"gap": 2e-6}, {"gap": True})
    """
    table = ui_modern_table(title)
    table.add_column("Quantity", style="bold")
    table.add_column("Value", justify="right")
    for key, value in values.items():
        style = THEME.verdict(verdicts[key]) if verdicts and key in verdicts else None
        table.add_row(key, Text(format_value(value), style=style or ""))
    return table


def ui_observable_table(first: Mapping[str, float], last: Mapping[str, float],
                        columns: Sequence[str]) -> Table:
    """Observables at the first and last recorded times with their difference."""
    table = ui_modern_table(f"Observables t={format_value(first['t'])} -> t={format_value(last['t'])}")
    table.add_column("Observable", style="bold")
    table.add_column("Initial", justify="right")
    table.add_column("Final", justify="right")
    table.add_column("Change", justify="right")
    for name in columns:
        if name == 't':
            continue
        table.add_row(name, format_value(first[name]), format_value(last[name]),
                      format_value(last[name] - first[name]))
    return table


def ui_rows_table(title: str, rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> Table:
    table = ui_modern_table(title)
    for column in columns:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(format_value(row.get(column)) for column in columns))
    return table


def ui_block_header(title: str, content: str, padding: Tuple[int, int] = (1, 1)) -> Group:
    panel = Panel(
        Text(content, justify="center"),
        title=title,
        padding=padding,
        border_style=THEME.panel_border,
        box=box.ROUNDED,
    )
    return Group(Text(""), panel, Text(""))


def ui_section_header(label: str, style: Optional[str] = None) -> Group:
    final_style = style or THEME.dim
    rule = Rule(Text(label.upper(), style=final_style), style=final_style, characters="─", align="center")
    return Group(Text(""), rule, Text(""))


def ui_error_message(message: Union[str, Exception], title: str = "Error") -> Group:
    """Error panel; exceptions show their class name and message."""
    if isinstance(message, Exception):
        text = f"{type(message).__name__}: {message}"
    else:
        text = str(message)
    panel = Panel(text, title=f"❌ {title}", title_align="left",
                  border_style=THEME.error, style=THEME.error, padding=(1, 2))
    return Group(Text(""), panel)


def ui_success_message(message: str, title: str = "Success") -> Group:
    panel = Panel(message, title=f"✅ {title}", title_align="left",
                  border_style=THEME.success, style=THEME.success, padding=(1, 2))
    return Group(Text(""), panel)
