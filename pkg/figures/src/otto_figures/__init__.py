"""Render figures from sudden-otto CSV datasets.

This package never computes physics: every plotted number comes out of a
dataset column written by the sudden-otto command line tool.
"""

from .recipe import KINDS, Dataset, FigureRecipe, MissingColumnError, read_dataset
from .render import render

__all__ = [
    "KINDS",
    "Dataset",
    "FigureRecipe",
    "MissingColumnError",
    "read_dataset",
    "render",
]
