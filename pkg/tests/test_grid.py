"""Tests for the canonical grid model and its tree/tuple views."""

import random

import pytest

from tabeval.grid import (
    CELL_TAG,
    ROW_TAG,
    TABLE_TAG,
    Cell,
    Grid,
    to_cell_tuples,
    to_table_tree,
)

from oracles import random_grid


class TestGridInvariants:
    def test_rejects_zero_spans(self):
        with pytest.raises(ValueError):
            Cell("x", 0, 0, rowspan=0)
        with pytest.raises(ValueError):
            Cell("x", 0, 0, colspan=0)

    def test_rejects_out_of_bounds_cell(self):
        with pytest.raises(ValueError):
            Grid(1, 1, (Cell("x", 0, 0, colspan=2),))

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            Grid(2, 2, (Cell("a", 0, 0, rowspan=2), Cell("b", 1, 0),))

    def test_occupancy_rectangles(self):
        g = Grid(2, 2, (Cell("h", 0, 0, colspan=2), Cell("x", 1, 0), Cell("y", 1, 1)))
        assert g.occupancy[0][0] == g.occupancy[0][1] == 0
        assert g.owner(1, 0).content == "x"

    def test_holes_allowed_at_type_level(self):
        g = Grid(1, 2, (Cell("a", 0, 0),))
        assert g.occupancy[0][1] is None

    def test_span_mass_bound(self):
        rng = random.Random(17)
        for _ in range(50):
            g = random_grid(rng, max_rows=4, max_cols=4)
            mass = sum(c.rowspan * c.colspan for c in g.cells)
            assert mass <= g.n_rows * g.n_cols
            # the generator produces totally occupied grids
            assert mass == g.n_rows * g.n_cols


class TestJsonRoundTrip:
    def test_round_trip(self):
        rng = random.Random(19)
        for _ in range(30):
            g = random_grid(rng, max_rows=4, max_cols=4)
            assert Grid.from_json_dict(g.to_json_dict()) == g

    def test_json_shape(self):
        g = Grid(1, 1, (Cell("v", 0, 0, is_header=True),))
        data = g.to_json_dict()
        assert data == {
            "n_rows": 1,
            "n_cols": 1,
            "cells": [{"r": 0, "c": 0, "rs": 1, "cs": 1, "text": "v", "header": True}],
        }


class TestTableTree:
    def test_single_cell_tree(self):
        g = Grid(1, 1, (Cell("x", 0, 0),))
        t = to_table_tree(g)
        assert t.size == 3
        assert t.root.tag == TABLE_TAG
        assert t.root.children[0].tag == ROW_TAG
        assert t.root.children[0].children[0].tag == CELL_TAG

    def test_full_2x2(self):
        g = Grid(2, 2, (Cell("a", 0, 0), Cell("b", 0, 1), Cell("c", 1, 0), Cell("d", 1, 1)))
        assert to_table_tree(g).size == 7

    def test_rowspan_row_has_one_leaf(self):
        g = Grid(2, 2, (Cell("a", 0, 0, rowspan=2), Cell("b", 0, 1), Cell("c", 1, 1)))
        t = to_table_tree(g)
        assert t.size == 6
        assert len(t.root.children[1].children) == 1

    def test_header_flag_not_in_tree(self):
        plain = Grid(1, 1, (Cell("x", 0, 0, is_header=False),))
        header = Grid(1, 1, (Cell("x", 0, 0, is_header=True),))
        t1, t2 = to_table_tree(plain), to_table_tree(header)
        assert t1.root.children[0].children[0].tag == t2.root.children[0].children[0].tag

    def test_size_formula_property(self):
        rng = random.Random(23)
        for _ in range(60):
            g = random_grid(rng, max_rows=5, max_cols=4)
            assert to_table_tree(g).size == 1 + g.n_rows + len(g.cells)

    def test_leaves_in_anchor_order(self):
        g = Grid(1, 3, (Cell("c", 0, 2), Cell("a", 0, 0), Cell("b", 0, 1)))
        t = to_table_tree(g)
        assert [n.content for n in t.root.children[0].children] == ["a", "b", "c"]


class TestCellTuples:
    def test_simple(self):
        g = Grid(1, 2, (Cell("a", 0, 0), Cell("b", 0, 1)))
        assert [(t.row, t.col, t.content) for t in to_cell_tuples(g)] == [(0, 0, "a"), (0, 1, "b")]

    def test_one_tuple_per_anchor(self):
        g = Grid(1, 2, (Cell("h", 0, 0, colspan=2),))
        assert [(t.row, t.col, t.content) for t in to_cell_tuples(g)] == [(0, 0, "h")]

    def test_content_normalized(self):
        g = Grid(1, 1, (Cell(" A  B ", 0, 0),))
        assert to_cell_tuples(g)[0].content == "a b"

    def test_empty_cells_retained(self):
        g = Grid(1, 2, (Cell("", 0, 0), Cell("x", 0, 1)))
        assert len(to_cell_tuples(g)) == 2
