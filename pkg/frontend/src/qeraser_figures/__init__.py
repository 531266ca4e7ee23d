"""Figure rendering for qeraser sweep CSVs."""

from .render import FigureInputError, FigureSpec, RenderResult, render

__version__ = "0.1.0"
