"""Standalone figure rendering for compression-readout benchmark CSVs."""

from .heatmap import HeatmapFigureSpec, plot_heatmap
from .lines import LineFigureSpec, plot_lines
from .schema import COLUMNS, SchemaError, read_metadata, read_rows

__version__ = "0.1.0"
