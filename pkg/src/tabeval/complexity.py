"""Structural complexity classes and the deterministic fallback classifier."""

from __future__ import annotations

import re

SIMPLE = "simple"
MODERATE = "moderate"
COMPLEX = "complex"

COMPLEXITY_LABELS = (SIMPLE, MODERATE, COMPLEX)

_MULTIROW = re.compile(r"\\multirow\b")
_MULTICOL = re.compile(r"\\multicolumn\b")


def heuristic_complexity(table_latex: str) -> str:
    """Rule-based complexity: span usage and nesting, no model involved.

    A regular grid (no merging) is simple; one kind of merging is
    moderate; both kinds together or a nested tabular is complex.
    """
    nested = table_latex.count("\\begin{tabular") > 1
    has_multirow = bool(_MULTIROW.search(table_latex))
    has_multicol = bool(_MULTICOL.search(table_latex))
    if nested or (has_multirow and has_multicol):
        return COMPLEX
    if has_multirow or has_multicol:
        return MODERATE
    return SIMPLE
