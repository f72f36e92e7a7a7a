"""Pair store and ratings log backing the annotation service.

Ratings are append-only JSONL: every submission is kept (the audit
trail), while the effective rating for a (pair, annotator) is the most
recent line. The same file feeds the agreement statistics directly.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..errors import MalformedTable
from ..parsing import parse_auto_with_format, parse_latex

HINT_ORDER = (
    "content error",
    "structural reorganization",
    "value equivalence",
    "symbol encoding",
    "markup artifact",
)


@dataclass
class AnnotationPair:
    pair_id: str
    gt_latex: str
    extracted_text: Optional[str]
    extracted_format: Optional[str] = None
    hints: list[dict[str, str]] = field(default_factory=list)
    gt_grid: Optional[dict[str, Any]] = None
    extracted_grid: Optional[dict[str, Any]] = None


def _sorted_hints(hints: list[dict[str, str]]) -> list[dict[str, str]]:
    def rank(h: dict[str, str]) -> int:
        try:
            return HINT_ORDER.index(h.get("category", ""))
        except ValueError:
            return len(HINT_ORDER)

    return sorted(hints, key=rank)


class PairStore:
    """Immutable collection of annotation pairs with precomputed grids."""

    def __init__(self, pairs: list[AnnotationPair]):
        self._pairs = {p.pair_id: p for p in pairs}
        for pair in pairs:
            pair.hints = _sorted_hints(pair.hints)
            if pair.gt_grid is None:
                try:
                    pair.gt_grid = parse_latex(pair.gt_latex).to_json_dict()
                except MalformedTable:
                    pair.gt_grid = None
            if pair.extracted_grid is None and pair.extracted_text:
                try:
                    grid, fmt = parse_auto_with_format(pair.extracted_text, pair.extracted_format)
                    pair.extracted_grid = grid.to_json_dict()
                    pair.extracted_format = fmt
                except MalformedTable:
                    pair.extracted_grid = None

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "PairStore":
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                data = json.loads(line)
                pairs.append(
                    AnnotationPair(
                        pair_id=data["pair_id"],
                        gt_latex=data["gt_latex"],
                        extracted_text=data.get("extracted_text"),
                        extracted_format=data.get("extracted_format"),
                        hints=data.get("hints", []),
                    )
                )
        return cls(pairs)

    @property
    def pair_ids(self) -> list[str]:
        return sorted(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, pair_id: str) -> bool:
        return pair_id in self._pairs

    def get(self, pair_id: str) -> Optional[AnnotationPair]:
        return self._pairs.get(pair_id)


class RatingsLog:
    """Append-only ratings sink with overwrite semantics for re-submissions."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._effective: dict[tuple[str, str], int] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    data = json.loads(line)
                    self._effective[(data["pair_id"], data["annotator_id"])] = int(data["score"])

    def add(self, pair_id: str, annotator_id: str, score: int) -> bool:
        """Append one rating; returns True when it overwrites an earlier one."""
        with self._lock:
            key = (pair_id, annotator_id)
            overwrote = key in self._effective
            self._effective[key] = score
            record = {
                "pair_id": pair_id,
                "annotator_id": annotator_id,
                "score": score,
                "timestamp": time.time(),
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            return overwrote

    def rating_of(self, pair_id: str, annotator_id: str) -> Optional[int]:
        return self._effective.get((pair_id, annotator_id))

    def counts_by_annotator(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for (_pair, annotator) in self._effective:
            counts[annotator] = counts.get(annotator, 0) + 1
        return counts

    def ratings_by_annotator(self, annotator_id: str) -> dict[str, int]:
        return {
            pair: score
            for (pair, annotator), score in self._effective.items()
            if annotator == annotator_id
        }

    def total_effective(self) -> int:
        return len(self._effective)


def next_pair_for(store: PairStore, log: RatingsLog, annotator_id: str) -> Optional[str]:
    """Round-robin assignment: the pair this annotator has rated least.

    With overwrite semantics the per-annotator count per pair is 0 or 1,
    so unrated pairs come first; ties break on the lexically smallest
    pair id. Returns None for an empty store.
    """
    rated = log.ratings_by_annotator(annotator_id)
    candidates = sorted(store.pair_ids, key=lambda pid: (1 if pid in rated else 0, pid))
    return candidates[0] if candidates else None
