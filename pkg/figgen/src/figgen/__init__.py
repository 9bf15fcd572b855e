"""Renders polariton-bjj CSV outputs to figures.  Consumes files only;
no physics is recomputed here."""

from .render import FIGURE_KINDS, FigureSpec, SchemaMismatch, render

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaMismatch", "render"]
