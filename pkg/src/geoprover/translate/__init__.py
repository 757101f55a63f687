"""Geometry to algebra: hypotheses, theses and numeric realizations."""

from .algebra import Degenerate, conic_eliminant
from .catalog import (
    HANDLERS, Hypothesis, Recipe, TranslationContext, TranslationError, translate,
    translate_statement, translate_step,
)
from .numeric import RealizationError, numeric_realize, realize_values, residual

__all__ = [
    "Degenerate", "HANDLERS", "Hypothesis", "Recipe", "RealizationError", "TranslationContext",
    "TranslationError", "conic_eliminant", "numeric_realize", "realize_values", "residual",
    "translate", "translate_statement", "translate_step",
]
