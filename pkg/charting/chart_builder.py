"""
Plotly charts of recorded observables and scan results.

Charts are optional artifacts (--charts); every number they show is also in
the CSV/JSON output. HTML is written with a fixed div id and the CDN copy of
plotly.js so the files stay small and reproducible.

Example:
    >>> from charting.chart_builder import ChartBuilder
    >>> chart = ChartBuilder.create_observables_chart(result.series.frame, "evolve")
    >>> ChartBuilder.save_chart_to_html_file(chart, out_dir / "observables")
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from errors import ArtifactWriteError, MagneticNLSError

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


class ChartDataError(MagneticNLSError):
    """Exception raised when the data handed to a chart is unusable."""

    def __init__(self, message: str, data_type: Optional[str] = None, cause: Optional[Exception] = None) -> None:
        super().__init__(message, cause)
        self.data_type = data_type


class ChartBuilder:
    """
    Builds interactive figures for run artifacts.

    Attributes:
        DEFAULT_COLORS: Trace colors.
        CHART_HEIGHT: Default figure height in pixels.
    """

    DEFAULT_COLORS: Dict[str, str] = {
        'primary': '#1f77b4',
        'secondary': '#ff7f0e',
        'positive': '#2ca02c',
        'negative': '#d62728',
        'neutral': '#7f7f7f',
    }

    CHART_HEIGHT: int = 900
    LINE_WIDTH: int = 2

    # (title, columns) per subplot row
    OBSERVABLE_PANELS: List[tuple] = [
        ("Mass", ["mass"]),
        ("Energies", ["T_S", "E_S", "F_S"]),
        ("Angular momentum", ["L3"]),
        ("Variance", ["g", "gdot"]),
    ]

    PAULI_PANELS: List[tuple] = [
        ("Pauli energies", ["T_P", "E_P", "F_P"]),
        ("Spin", ["spin_z"]),
    ]

    @staticmethod
    def create_observables_chart(frame: pd.DataFrame, title: str,
                                 closed_form: Optional[Callable[[float], float]] = None) -> go.Figure:
        """
        Stacked time series of the recorded observables.

        Args:
            frame: ObservableSeries.frame.
            title: Figure title.
            closed_form: Optional predicted g(t) overlaid on the variance panel.

        Returns:
            Plotly figure.

        Raises:
            ChartDataError: If the frame is empty or has no time column.
        """
        if frame.empty or 't' not in frame.columns:
            raise ChartDataError("Observable frame must be non-empty with a 't' column", data_type="observables")

        panels = list(ChartBuilder.OBSERVABLE_PANELS)
        if 'T_P' in frame.columns:
            panels += ChartBuilder.PAULI_PANELS

        chart = make_subplots(
            rows=len(panels), cols=1,
            shared_xaxes=True,
            vertical_spacing=0.04,
            subplot_titles=[panel[0] for panel in panels],
        )
        palette = list(ChartBuilder.DEFAULT_COLORS.values())
        for row, (_, columns) in enumerate(panels, start=1):
            for index, column in enumerate(columns):
                chart.add_trace(
                    go.Scatter(x=frame['t'], y=frame[column], name=column, mode='lines',
                               line=dict(width=ChartBuilder.LINE_WIDTH, color=palette[index % len(palette)])),
                    row=row, col=1,
                )

        if closed_form is not None:
            times = np.linspace(float(frame['t'].iloc[0]), float(frame['t'].iloc[-1]), 400)
            chart.add_trace(
                go.Scatter(x=times, y=[closed_form(t) for t in times], name='g closed form',
                           mode='lines', line=dict(dash='dash', color=ChartBuilder.DEFAULT_COLORS['neutral'])),
                row=4, col=1,
            )

        chart.update_layout(title=title, height=ChartBuilder.CHART_HEIGHT, template='plotly_white')
        chart.update_xaxes(title_text='t', row=len(panels), col=1)
        return chart

    @staticmethod
    def create_blowup_scan_chart(rows: List[Dict[str, float]]) -> go.Figure:
        """Detected and predicted blow-up times against B."""
        if not rows:
            raise ChartDataError("Blow-up scan has no rows", data_type="blowup_scan")
        frame = pd.DataFrame(rows)
        chart = go.Figure()
        chart.add_trace(go.Scatter(x=frame['B'], y=frame['t_detect'], name='detected', mode='lines+markers',
                                   line=dict(color=ChartBuilder.DEFAULT_COLORS['negative'])))
        if frame['predicted_first_zero'].notna().any():
            chart.add_trace(go.Scatter(x=frame['B'], y=frame['predicted_first_zero'], name='predicted first zero',
                                       mode='lines+markers',
                                       line=dict(dash='dash', color=ChartBuilder.DEFAULT_COLORS['primary'])))
        chart.update_layout(title='Blow-up time against field strength', xaxis_title='B',
                            yaxis_title='t', template='plotly_white')
        return chart

    @staticmethod
    def create_strichartz_chart(reports: List[Dict[str, float]]) -> go.Figure:
        """Magnetic and free sides of the Strichartz identity per B."""
        if not reports:
            raise ChartDataError("No Strichartz reports", data_type="strichartz")
        frame = pd.DataFrame(reports)
        chart = go.Figure()
        chart.add_trace(go.Bar(x=frame['B'].astype(str), y=frame['lhs'], name='magnetic side',
                               marker_color=ChartBuilder.DEFAULT_COLORS['primary']))
        chart.add_trace(go.Bar(x=frame['B'].astype(str), y=frame['rhs'], name='free side',
                               marker_color=ChartBuilder.DEFAULT_COLORS['secondary']))
        chart.update_layout(barmode='group', title='Strichartz identity', xaxis_title='B', template='plotly_white')
        return chart

    @staticmethod
    def save_chart_to_html_file(chart: go.Figure, filename: Union[str, Path]) -> Path:
        """
        Save a figure as HTML next to the other artifacts.

        Args:
            chart: Figure to save.
            filename: Target path without extension.

        Returns:
            Path of the written file.

        Raises:
            ArtifactWriteError: If the file cannot be written.
        """
        target = Path(f"{filename}.html")
        try:
            chart.write_html(str(target), include_plotlyjs='cdn', div_id=target.stem, full_html=True)
        except OSError as e:
            raise ArtifactWriteError(f"Cannot write chart {target}: {e}", file_path=str(target), cause=e) from e
        logger.info(f"Chart saved: {target}")
        return target
