"""Synthetic benchmark construction: harvest tables, assemble pages, emit ground truth."""

from .assemble import LayoutConfig, LayoutRanges, PageBlock, PageGroundTruth, assemble_page, sample_layout
from .compilecheck import (
    CompileOutcome,
    PdflatexRunner,
    TableAsset,
    TableRejection,
    validate_standalone,
)
from .emit import emit_ground_truth, load_ground_truth
from .harvest import clean_table, extract_tabulars

__all__ = [
    "extract_tabulars",
    "clean_table",
    "CompileOutcome",
    "PdflatexRunner",
    "TableAsset",
    "TableRejection",
    "validate_standalone",
    "LayoutConfig",
    "LayoutRanges",
    "PageBlock",
    "PageGroundTruth",
    "sample_layout",
    "assemble_page",
    "emit_ground_truth",
    "load_ground_truth",
]
