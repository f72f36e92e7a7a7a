"""SCORE-style cell-tuple metric: index accuracy and content accuracy.

Cells are compared as (row, col, text) tuples with lowercased normalized
text. Index accuracy rewards cells sitting at their exact ground-truth
anchor and half-rewards cells found within a Chebyshev offset tolerance;
content accuracy pairs cells within the same tolerance window by best
text similarity. Both matchings are greedy and fully deterministic:
candidates are ranked nearest-first (index) or most-similar-first
(content) with row-major tie-breaks, so raising the tolerance only ever
appends candidates and index accuracy is monotone in the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import Grid, to_cell_tuples
from .textsim import norm_lev


@dataclass(frozen=True)
class ScorePair:
    index_accuracy: float
    content_accuracy: float
    average: float


def score_metric(gt: Grid, pred: Grid, tolerance: int = 1) -> ScorePair:
    """Compare two grids as cell tuples with the given offset tolerance."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    gt_tuples = [(t.row, t.col, t.content) for t in to_cell_tuples(gt)]
    pred_tuples = [(t.row, t.col, t.content) for t in to_cell_tuples(pred)]
    n_gt = len(gt_tuples)

    # index accuracy: identical text within tolerance, exact position = 1, offset = 0.5
    index_candidates: list[tuple[int, int, int, int, int, int, int]] = []
    for gi, (gr, gc, gtext) in enumerate(gt_tuples):
        for pi, (pr, pc, ptext) in enumerate(pred_tuples):
            dist = max(abs(gr - pr), abs(gc - pc))
            if dist <= tolerance and gtext == ptext:
                index_candidates.append((dist, gr, gc, pr, pc, gi, pi))
    index_candidates.sort()
    gt_used: set[int] = set()
    pred_used: set[int] = set()
    index_mass = 0.0
    for dist, _, _, _, _, gi, pi in index_candidates:
        if gi in gt_used or pi in pred_used:
            continue
        gt_used.add(gi)
        pred_used.add(pi)
        index_mass += 1.0 if dist == 0 else 0.5

    # content accuracy: best text similarity within tolerance, unmatched count as 0
    content_candidates: list[tuple[float, int, int, int, int, int, int, int]] = []
    for gi, (gr, gc, gtext) in enumerate(gt_tuples):
        for pi, (pr, pc, ptext) in enumerate(pred_tuples):
            dist = max(abs(gr - pr), abs(gc - pc))
            if dist <= tolerance:
                sim = 1.0 - norm_lev(gtext, ptext)
                content_candidates.append((-sim, dist, gr, gc, pr, pc, gi, pi))
    content_candidates.sort()
    gt_used.clear()
    pred_used.clear()
    content_mass = 0.0
    for neg_sim, _, _, _, _, _, gi, pi in content_candidates:
        if gi in gt_used or pi in pred_used:
            continue
        gt_used.add(gi)
        pred_used.add(pi)
        content_mass += -neg_sim

    index_accuracy = index_mass / n_gt
    content_accuracy = content_mass / n_gt
    return ScorePair(
        index_accuracy=index_accuracy,
        content_accuracy=content_accuracy,
        average=(index_accuracy + content_accuracy) / 2.0,
    )
