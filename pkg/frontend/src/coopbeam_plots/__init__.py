"""Static figure rendering for coopbeam sweep CSV files."""

from .figures import FIGURE_KINDS, EmptyDataError, SchemaError, aggregate, \
    build_figure, read_rows, render

__all__ = [
    "FIGURE_KINDS", "EmptyDataError", "SchemaError", "aggregate",
    "build_figure", "read_rows", "render",
]

__version__ = "0.1.0"
