"""Figure rendering for melstruct analysis reports."""

__version__ = "0.1.0"

from .figures import (
    FIGURE_IDS,
    FigureSpec,
    MissingSectionError,
    UnknownFigureError,
    build_figure,
    figure_metadata,
    render,
)

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "MissingSectionError",
    "UnknownFigureError",
    "build_figure",
    "figure_metadata",
    "render",
    "__version__",
]
