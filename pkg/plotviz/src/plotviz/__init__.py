"""pacviz: static figures from pacsim CSV outputs."""

from .render import KINDS, SCHEMAS, FigureSpec, SchemaError, load_table, render

__all__ = ["KINDS", "SCHEMAS", "FigureSpec", "SchemaError", "load_table", "render"]

__version__ = "0.1.0"
