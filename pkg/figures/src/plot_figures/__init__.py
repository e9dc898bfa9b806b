"""Plotting companion for simulation result CSVs."""

from .render import (
    KINDS,
    NOMINAL_LEVEL,
    REQUIRED_COLUMNS,
    EmptySelection,
    FigureSpec,
    SchemaError,
    load_results,
    render,
)

__version__ = "0.1.0"
