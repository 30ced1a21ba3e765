"""Renderers for converting result documents to output formats"""

from .csv_renderer import CSVRenderer
from .formatting import RenderError, polynomial_to_latex
from .json_renderer import JSONRenderer
from .latex_renderer import LaTeXRenderer

__all__ = ["JSONRenderer", "CSVRenderer", "LaTeXRenderer", "RenderError", "polynomial_to_latex"]
