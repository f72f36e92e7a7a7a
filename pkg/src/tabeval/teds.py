"""Tree Edit Distance-based Similarity over table trees.

The distance is the exact ordered tree edit distance (Zhang-Shasha
keyroot decomposition) under these costs:

* insert or delete any node: 1
* relabel between interior nodes with the same tag: 0
* relabel across different tags (including interior vs. leaf): 1
* relabel leaf vs. leaf: 1 if colspan or rowspan differ, otherwise the
  normalized Levenshtein distance of the cell contents

Span mismatch on a leaf is deliberately a flat structural cost of 1; the
span attributes are part of the node label, not of the content.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import Grid, TableTree, TreeNode, to_table_tree
from .textsim import norm_lev


@dataclass(frozen=True)
class TedsResult:
    distance: float
    size_pred: int
    size_gt: int
    score: float


def _relabel_cost(a: TreeNode, b: TreeNode) -> float:
    if a.tag != b.tag:
        return 1.0
    if a.is_leaf:
        if a.colspan != b.colspan or a.rowspan != b.rowspan:
            return 1.0
        return norm_lev(a.content, b.content)
    return 0.0


class _Annotated:
    """Postorder node list, leftmost-leaf-descendant indices and keyroots."""

    def __init__(self, root: TreeNode) -> None:
        self.nodes: list[TreeNode] = []
        self.lmld: list[int] = []
        self._walk(root)
        keyroots: dict[int, int] = {}
        for i, lm in enumerate(self.lmld):
            keyroots[lm] = i
        self.keyroots = sorted(keyroots.values())

    def _walk(self, node: TreeNode) -> int:
        """Postorder-number the subtree; returns this node's index."""
        first_leaf = -1
        for child in node.children:
            child_idx = self._walk(child)
            if first_leaf == -1:
                first_leaf = self.lmld[child_idx]
        idx = len(self.nodes)
        self.nodes.append(node)
        self.lmld.append(idx if first_leaf == -1 else first_leaf)
        return idx


def _tree_distance(a: _Annotated, b: _Annotated) -> float:
    n, m = len(a.nodes), len(b.nodes)
    treedist = [[0.0] * m for _ in range(n)]
    al, bl = a.lmld, b.lmld
    an, bn = a.nodes, b.nodes

    for i in a.keyroots:
        for j in b.keyroots:
            # forest distance over the subtrees rooted at keyroots i, j
            ioff = al[i] - 1
            joff = bl[j] - 1
            rows = i - al[i] + 2
            cols = j - bl[j] + 2
            fd = [[0.0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = fd[x - 1][0] + 1.0
            for y in range(1, cols):
                fd[0][y] = fd[0][y - 1] + 1.0
            for x in range(1, rows):
                for y in range(1, cols):
                    if al[i] == al[x + ioff] and bl[j] == bl[y + joff]:
                        fd[x][y] = min(
                            fd[x - 1][y] + 1.0,
                            fd[x][y - 1] + 1.0,
                            fd[x - 1][y - 1] + _relabel_cost(an[x + ioff], bn[y + joff]),
                        )
                        treedist[x + ioff][y + joff] = fd[x][y]
                    else:
                        p = al[x + ioff] - 1 - ioff
                        q = bl[y + joff] - 1 - joff
                        fd[x][y] = min(
                            fd[x - 1][y] + 1.0,
                            fd[x][y - 1] + 1.0,
                            fd[p][q] + treedist[x + ioff][y + joff],
                        )
    return treedist[n - 1][m - 1]


def tree_edit_distance(t1: TableTree, t2: TableTree) -> float:
    """Exact ordered tree edit distance between two table trees."""
    return _tree_distance(_Annotated(t1.root), _Annotated(t2.root))


def teds(gt: Grid, pred: Grid) -> TedsResult:
    """Score two grids: 1 - distance / max(tree sizes), clamped into [0, 1].

    Distance can never exceed the larger tree size under unit indel costs,
    so the clamp is only a guard.
    """
    tree_gt = to_table_tree(gt)
    tree_pred = to_table_tree(pred)
    distance = tree_edit_distance(tree_pred, tree_gt)
    size_gt = tree_gt.size
    size_pred = tree_pred.size
    score = 1.0 - distance / max(size_pred, size_gt)
    return TedsResult(
        distance=distance,
        size_pred=size_pred,
        size_gt=size_gt,
        score=min(1.0, max(0.0, score)),
    )
