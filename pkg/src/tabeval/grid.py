"""Canonical 2D grid model for tables, plus tree and tuple views of it.

A ``Grid`` is a rectangle of slots. Each slot is owned by at most one
logical ``Cell``; a cell anchored at (row, col) with spans (rowspan,
colspan) owns exactly that rectangle of slots. The format parsers fill
any unowned slots with empty 1x1 cells, so grids coming out of parsing
always have total occupancy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterator, Optional

from .textsim import normalize_text

TABLE_TAG = "table"
ROW_TAG = "row"
CELL_TAG = "cell"


@dataclass(frozen=True)
class Cell:
    """One logical table cell.

    ``content`` is raw text: interior whitespace untouched, exterior
    trimmed by the parsers. ``row``/``col`` give the anchor slot.
    """

    content: str
    row: int
    col: int
    rowspan: int = 1
    colspan: int = 1
    is_header: bool = False

    def __post_init__(self) -> None:
        if self.rowspan < 1 or self.colspan < 1:
            raise ValueError(f"spans must be >= 1, got {self.rowspan}x{self.colspan}")
        if self.row < 0 or self.col < 0:
            raise ValueError(f"anchor must be non-negative, got ({self.row}, {self.col})")


@dataclass(frozen=True)
class Grid:
    """Canonical table: dimensions plus the list of owning cells."""

    n_rows: int
    n_cols: int
    cells: tuple[Cell, ...]

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.n_rows}x{self.n_cols}")
        object.__setattr__(self, "cells", tuple(self.cells))
        seen: set[tuple[int, int]] = set()
        for cell in self.cells:
            if cell.row + cell.rowspan > self.n_rows or cell.col + cell.colspan > self.n_cols:
                raise ValueError(
                    f"cell at ({cell.row}, {cell.col}) spans outside the {self.n_rows}x{self.n_cols} grid"
                )
            for r in range(cell.row, cell.row + cell.rowspan):
                for c in range(cell.col, cell.col + cell.colspan):
                    if (r, c) in seen:
                        raise ValueError(f"slot ({r}, {c}) owned by two cells")
                    seen.add((r, c))

    @cached_property
    def occupancy(self) -> tuple[tuple[Optional[int], ...], ...]:
        """Slot -> index into ``cells`` of the owning cell, or None for a hole."""
        grid: list[list[Optional[int]]] = [[None] * self.n_cols for _ in range(self.n_rows)]
        for idx, cell in enumerate(self.cells):
            for r in range(cell.row, cell.row + cell.rowspan):
                for c in range(cell.col, cell.col + cell.colspan):
                    grid[r][c] = idx
        return tuple(tuple(row) for row in grid)

    def owner(self, r: int, c: int) -> Optional[Cell]:
        idx = self.occupancy[r][c]
        return None if idx is None else self.cells[idx]

    def slots(self) -> Iterator[tuple[int, int]]:
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                yield r, c

    def to_json_dict(self) -> dict[str, Any]:
        """Canonical JSON form, the interchange format consumed by the other modules."""
        return {
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "cells": [
                {
                    "r": c.row,
                    "c": c.col,
                    "rs": c.rowspan,
                    "cs": c.colspan,
                    "text": c.content,
                    "header": c.is_header,
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "Grid":
        cells = tuple(
            Cell(
                content=item["text"],
                row=item["r"],
                col=item["c"],
                rowspan=item.get("rs", 1),
                colspan=item.get("cs", 1),
                is_header=item.get("header", False),
            )
            for item in data["cells"]
        )
        return cls(n_rows=data["n_rows"], n_cols=data["n_cols"], cells=cells)


@dataclass
class TreeNode:
    """Node of the HTML-style table tree used by the tree edit distance."""

    tag: str
    content: str = ""
    colspan: int = 1
    rowspan: int = 1
    children: list["TreeNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.tag == CELL_TAG


@dataclass
class TableTree:
    """Rooted ordered tree view of a grid: table -> rows -> anchored cells."""

    root: TreeNode

    @property
    def size(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(node.children)
        return count


@dataclass(frozen=True)
class CellTuple:
    """Format-agnostic cell record: anchor position plus normalized content."""

    row: int
    col: int
    content: str


def to_table_tree(g: Grid) -> TableTree:
    """Build the table tree: one row node per grid row, leaves in anchor order.

    Header cells get the same tag as body cells; the tree deliberately
    carries no header distinction (see module docs on markup sensitivity).
    Tree size is always 1 + n_rows + number of cells.
    """
    by_row: list[list[Cell]] = [[] for _ in range(g.n_rows)]
    for cell in g.cells:
        by_row[cell.row].append(cell)
    root = TreeNode(TABLE_TAG)
    for row_cells in by_row:
        row_node = TreeNode(ROW_TAG)
        for cell in sorted(row_cells, key=lambda c: c.col):
            row_node.children.append(
                TreeNode(CELL_TAG, content=cell.content, colspan=cell.colspan, rowspan=cell.rowspan)
            )
        root.children.append(row_node)
    return TableTree(root)


def to_cell_tuples(g: Grid) -> list[CellTuple]:
    """One tuple per cell at its anchor, content normalized and lowercased.

    The tuple view exists for the case-insensitive cell-tuple metric;
    empty-content cells are retained because position comparisons
    downstream need them.
    """
    return [
        CellTuple(row=c.row, col=c.col, content=normalize_text(c.content).lower())
        for c in sorted(g.cells, key=lambda c: (c.row, c.col))
    ]
