"""
Console theme for the magnetic NLS runner.

Styles are Rich style strings grouped by role: status messages, tables and
panels, and the verdict colors used when a check passes or fails.

Example:
    >>> from ui.theme import THEME
    >>> console.print("All checks passed", style=THEME.success)
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Theme:
    # Core colors
    primary: str = "bold bright_cyan"
    secondary: str = "bright_yellow"
    accent: str = "bold bright_blue"

    # Status colors
    success: str = "bold green"
    error: str = "bold red"
    warning: str = "bold yellow"
    info: str = "dim"

    dim: str = "dim"
    highlight: str = "bold bright_magenta"

    # Tables and panels
    table_border: str = "grey37"
    table_style: str = "white"
    table_title: str = "bold bright_blue"
    table_header: str = "grey37 bold"
    panel_border: str = "grey37"

    # Check verdicts
    verdict_pass: str = "green"
    verdict_fail: str = "red"
    verdict_neutral: str = "grey62"

    def verdict(self, passed) -> str:
        """Style for a boolean check result (None is neutral)."""
        if passed is None:
            return self.verdict_neutral
        return self.verdict_pass if passed else self.verdict_fail


THEME = Theme()
