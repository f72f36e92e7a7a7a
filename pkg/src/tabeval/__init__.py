"""tabeval: table-extraction evaluation engine and benchmark harness."""

from .errors import (
    CleanFailure,
    CompileError,
    DegenerateInput,
    EndpointError,
    JoinEmpty,
    MalformedTable,
    ProtocolError,
    ToolMissing,
)
from .grid import Cell, CellTuple, Grid, TableTree, TreeNode, to_cell_tuples, to_table_tree
from .grits import GritsResult, SpanRect, cell_sim_top, grits, grits_avg, span_grid
from .parsing import parse_auto, parse_html, parse_latex, parse_markdown, parse_text, sniff_format
from .score import ScorePair, score_metric
from .teds import TedsResult, teds, tree_edit_distance
from .textsim import lcs_sim, levenshtein, norm_lev, normalize_text

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "Grid",
    "CellTuple",
    "TableTree",
    "TreeNode",
    "to_table_tree",
    "to_cell_tuples",
    "parse_html",
    "parse_markdown",
    "parse_latex",
    "parse_text",
    "parse_auto",
    "sniff_format",
    "teds",
    "tree_edit_distance",
    "TedsResult",
    "grits",
    "grits_avg",
    "span_grid",
    "cell_sim_top",
    "GritsResult",
    "SpanRect",
    "score_metric",
    "ScorePair",
    "levenshtein",
    "norm_lev",
    "lcs_sim",
    "normalize_text",
    "MalformedTable",
    "DegenerateInput",
    "JoinEmpty",
    "EndpointError",
    "ProtocolError",
    "CleanFailure",
    "CompileError",
    "ToolMissing",
]
