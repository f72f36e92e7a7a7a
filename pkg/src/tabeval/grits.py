"""Grid Table Similarity: topology (span-rect IoU) and content (LCS) variants.

Both variants look for order-preserving subsets of rows and columns of
the two grids that maximize the summed per-slot similarity. The exact 2D
problem is intractable, so the alignment is factored:

1. an inner DP aligns columns for every candidate row pair,
2. an outer DP aligns rows using the inner scores,
3. one refinement pass re-aligns columns globally under the fixed row
   alignment.

The refined solution is a feasible row-subset x column-subset alignment,
so its mass never exceeds the exhaustive optimum. The pass is evaluated
in both factorization orders and with the two grids in both role orders,
keeping the larger mass, which makes the role-swap symmetry of the
metric exact even when a DP has ties. Grids small enough to enumerate
(both at most 3x3) are solved exactly instead: alternating refinement
has rare local optima there, and exact search costs microseconds.
Spanning cells contribute similarity once per owned slot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .grid import Grid
from .textsim import lcs_sim

GRITS_TOP = "top"
GRITS_CON = "con"


@dataclass(frozen=True)
class SpanRect:
    """Owning cell's extent relative to one slot, inclusive slot offsets."""

    left: int
    top: int
    right: int
    bottom: int

    def __post_init__(self) -> None:
        if not (self.left <= 0 <= self.right and self.top <= 0 <= self.bottom):
            raise ValueError(f"slot must sit inside its own rect: {self}")


@dataclass(frozen=True)
class GritsResult:
    variant: str
    precision: float
    recall: float
    f_score: float
    raw_similarity: float


def span_grid(g: Grid) -> list[list[SpanRect]]:
    """Per-slot relative bounding box of the owning cell, in slot units.

    Grids out of the parsers have total occupancy; a hole, should one
    appear, counts as its own 1x1 cell.
    """
    rects: list[list[SpanRect]] = []
    for r in range(g.n_rows):
        row: list[SpanRect] = []
        for c in range(g.n_cols):
            cell = g.owner(r, c)
            if cell is None:
                row.append(SpanRect(0, 0, 0, 0))
            else:
                row.append(
                    SpanRect(
                        left=cell.col - c,
                        top=cell.row - r,
                        right=cell.col + cell.colspan - 1 - c,
                        bottom=cell.row + cell.rowspan - 1 - r,
                    )
                )
        rects.append(row)
    return rects


def cell_sim_top(a: SpanRect, b: SpanRect) -> float:
    """Intersection-over-union of two relative span rects anchored at the same slot."""
    inter_w = min(a.right, b.right) - max(a.left, b.left) + 1
    inter_h = min(a.bottom, b.bottom) - max(a.top, b.top) + 1
    inter = max(0, inter_w) * max(0, inter_h)
    area_a = (a.right - a.left + 1) * (a.bottom - a.top + 1)
    area_b = (b.right - b.left + 1) * (b.bottom - b.top + 1)
    union = area_a + area_b - inter
    return inter / union


@lru_cache(maxsize=65536)
def _lcs_sim_cached(a: str, b: str) -> float:
    return lcs_sim(a, b)


def _content_grid(g: Grid) -> list[list[str]]:
    return [["" if g.owner(r, c) is None else g.owner(r, c).content for c in range(g.n_cols)] for r in range(g.n_rows)]


_SimFn = Callable[[int, int, int, int], float]


def _align_value(n: int, m: int, reward: Callable[[int, int], float]) -> float:
    """Value of the best order-preserving alignment of two index sequences."""
    f = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            f[i][j] = max(f[i - 1][j], f[i][j - 1], f[i - 1][j - 1] + reward(i - 1, j - 1))
    return f[n][m]


def _align_pairs(n: int, m: int, reward: Callable[[int, int], float]) -> list[tuple[int, int]]:
    """Best order-preserving alignment, returned as matched index pairs.

    Ties prefer matching (diagonal moves), which can only help the
    refinement pass that sums non-negative rewards over the pairs.
    """
    f = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            f[i][j] = max(f[i - 1][j], f[i][j - 1], f[i - 1][j - 1] + reward(i - 1, j - 1))
    pairs: list[tuple[int, int]] = []
    i, j = n, m
    while i > 0 and j > 0:
        if f[i][j] == f[i - 1][j - 1] + reward(i - 1, j - 1):
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif f[i][j] == f[i - 1][j]:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs


def _factored_mass_directed(
    rows_a: int, cols_a: int, rows_b: int, cols_b: int, sim: _SimFn, row_outer: bool
) -> float:
    """One factored pass: outer alignment on one axis scored by per-pair inner DPs,
    then alternating refinement passes on the other axis until the mass stabilizes.

    Every refinement step re-optimizes one axis with the other fixed, so
    the mass never decreases and the result is always a feasible
    row-subset x column-subset alignment.
    """
    if row_outer:
        inner = {
            (i, j): _align_value(cols_a, cols_b, lambda p, q, i=i, j=j: sim(i, p, j, q))
            for i in range(rows_a)
            for j in range(rows_b)
        }
        row_pairs = _align_pairs(rows_a, rows_b, lambda i, j: inner[(i, j)])
        col_pairs: list[tuple[int, int]] = []
        refine_cols = True
    else:
        inner = {
            (p, q): _align_value(rows_a, rows_b, lambda i, j, p=p, q=q: sim(i, p, j, q))
            for p in range(cols_a)
            for q in range(cols_b)
        }
        col_pairs = _align_pairs(cols_a, cols_b, lambda p, q: inner[(p, q)])
        row_pairs = []
        refine_cols = False

    # Alternate until the alignment state repeats. Stopping merely on a
    # non-improving mass is not enough: a refinement can move to a
    # different alignment of equal mass from which the next pass improves.
    best = -1.0
    seen: set[tuple] = set()
    while True:
        state = (refine_cols, tuple(row_pairs), tuple(col_pairs))
        if state in seen:
            return best
        seen.add(state)
        if refine_cols:
            col_pairs = _align_pairs(
                cols_a, cols_b, lambda p, q: sum(sim(i, p, j, q) for i, j in row_pairs)
            )
        else:
            row_pairs = _align_pairs(
                rows_a, rows_b, lambda i, j: sum(sim(i, p, j, q) for p, q in col_pairs)
            )
        mass = sum(sim(i, p, j, q) for i, j in row_pairs for p, q in col_pairs)
        best = max(best, mass)
        refine_cols = not refine_cols


def _factored_mass(gt: Grid, pred: Grid, sim: _SimFn) -> float:
    """Best factored alignment mass over both factorization orders and both roles.

    Evaluating the pass with the grids in both role orders makes the
    role-swap symmetry of the metric exact even when a DP has ties.
    """
    swapped_sim: _SimFn = lambda i, p, j, q: sim(j, q, i, p)  # noqa: E731
    return max(
        _factored_mass_directed(gt.n_rows, gt.n_cols, pred.n_rows, pred.n_cols, sim, True),
        _factored_mass_directed(gt.n_rows, gt.n_cols, pred.n_rows, pred.n_cols, sim, False),
        _factored_mass_directed(pred.n_rows, pred.n_cols, gt.n_rows, gt.n_cols, swapped_sim, True),
        _factored_mass_directed(pred.n_rows, pred.n_cols, gt.n_rows, gt.n_cols, swapped_sim, False),
    )


_EXACT_MAX_DIM = 3


def _exact_mass(rows_a: int, cols_a: int, rows_b: int, cols_b: int, sim: _SimFn) -> float:
    """Exact optimum by enumerating all order-preserving subset alignments.

    Only viable for tiny grids; the number of alignments grows like a
    product of central binomial coefficients.
    """
    def alignments(n: int, m: int) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = []
        for k in range(min(n, m) + 1):
            for sub_a in itertools.combinations(range(n), k):
                for sub_b in itertools.combinations(range(m), k):
                    out.append(list(zip(sub_a, sub_b)))
        return out

    best = 0.0
    col_candidates = alignments(cols_a, cols_b)
    for rows in alignments(rows_a, rows_b):
        for cols in col_candidates:
            mass = sum(sim(i, p, j, q) for i, j in rows for p, q in cols)
            if mass > best:
                best = mass
    return best


def _slot_sim(gt: Grid, pred: Grid, variant: str) -> _SimFn:
    if variant == GRITS_TOP:
        rects_gt = span_grid(gt)
        rects_pred = span_grid(pred)

        def sim_top(i: int, p: int, j: int, q: int) -> float:
            return cell_sim_top(rects_gt[i][p], rects_pred[j][q])

        return sim_top
    if variant == GRITS_CON:
        text_gt = _content_grid(gt)
        text_pred = _content_grid(pred)

        def sim_con(i: int, p: int, j: int, q: int) -> float:
            return _lcs_sim_cached(text_gt[i][p], text_pred[j][q])

        return sim_con
    raise ValueError(f"unknown GriTS variant {variant!r}")


def grits(gt: Grid, pred: Grid, variant: str) -> GritsResult:
    """Grid alignment score for one variant, as precision/recall/F.

    Tiny instances are solved exactly; everything else goes through the
    factored heuristic.
    """
    sim = _slot_sim(gt, pred, variant)
    tiny = max(gt.n_rows, gt.n_cols, pred.n_rows, pred.n_cols) <= _EXACT_MAX_DIM
    if tiny:
        raw = _exact_mass(gt.n_rows, gt.n_cols, pred.n_rows, pred.n_cols, sim)
    else:
        raw = _factored_mass(gt, pred, sim)
    gt_slots = gt.n_rows * gt.n_cols
    pred_slots = pred.n_rows * pred.n_cols
    precision = raw / pred_slots
    recall = raw / gt_slots
    f_score = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return GritsResult(
        variant=variant,
        precision=precision,
        recall=recall,
        f_score=f_score,
        raw_similarity=raw,
    )


def grits_avg(gt: Grid, pred: Grid) -> float:
    """Arithmetic mean of the topology and content F-scores."""
    return (grits(gt, pred, GRITS_TOP).f_score + grits(gt, pred, GRITS_CON).f_score) / 2.0
