"""Batch figure rendering for chaoticlight simulation outputs."""

from .io import FigureInputError, read_csv, read_density
from .plots import RENDERERS, render

__all__ = ["FigureInputError", "read_csv", "read_density", "RENDERERS", "render"]
