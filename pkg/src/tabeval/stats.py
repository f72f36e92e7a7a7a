"""Statistics for validating metrics against human judgment.

Correlation coefficients (Pearson, Spearman with mid-ranks, Kendall
tau-b), Krippendorff's alpha with the interval distance, the
leave-one-out annotator ceiling, and the metric-vs-human join.

Everything raises ``DegenerateInput`` where a coefficient would be
undefined; nothing is ever silently reported as 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .errors import DegenerateInput, JoinEmpty


@dataclass(frozen=True)
class CorrelationReport:
    pearson: float
    spearman: float
    kendall: float
    n: int


@dataclass(frozen=True)
class AgreementReport:
    """Agreement statistics; a component undefined for the input is None, never 0."""

    krippendorff_alpha: Optional[float]
    mean_pairwise_pearson: Optional[float]
    mean_abs_difference: Optional[float]
    leave_one_out_pearson: Optional[float]


@dataclass
class RatingSet:
    """Per-pair, per-annotator scores on the 0-10 interval scale."""

    ratings: dict[str, dict[str, float]] = field(default_factory=dict)

    @property
    def annotators(self) -> list[str]:
        names = {a for scores in self.ratings.values() for a in scores}
        return sorted(names)

    @property
    def pair_ids(self) -> list[str]:
        return sorted(self.ratings)

    def add(self, pair_id: str, annotator_id: str, score: float) -> None:
        if not 0 <= score <= 10:
            raise ValueError(f"score {score} outside the 0-10 scale")
        self.ratings.setdefault(pair_id, {})[annotator_id] = float(score)

    def mean_per_pair(self) -> dict[str, float]:
        return {pid: sum(v.values()) / len(v) for pid, v in self.ratings.items() if v}


def load_ratings_jsonl(path: str | Path) -> RatingSet:
    """Read the annotation sink; later lines overwrite earlier ones (the audit trail)."""
    rs = RatingSet()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            rs.add(record["pair_id"], record["annotator_id"], record["score"])
    return rs


def _check_vectors(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DegenerateInput("need at least 2 observations")


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    _check_vectors(x, y)
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        raise DegenerateInput("zero variance input")
    return sxy / math.sqrt(sxx * syy)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation over mid-ranks (ties averaged)."""
    _check_vectors(x, y)
    return pearson(_midranks(x), _midranks(y))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall tau-b, tie-corrected, by direct enumeration of all pairs."""
    _check_vectors(x, y)
    n = len(x)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 or dy == 0:
                continue
            if (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    denom = math.sqrt((n0 - _tie_term(x)) * (n0 - _tie_term(y)))
    if denom == 0:
        raise DegenerateInput("zero variance input")
    return (concordant - discordant) / denom


def _tie_term(values: Sequence[float]) -> float:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return sum(c * (c - 1) / 2 for c in counts.values())


def krippendorff_alpha_interval(ratings: RatingSet) -> float:
    """Krippendorff's alpha with the interval (squared difference) distance.

    Uses the standard coincidence construction: only units rated by two
    or more annotators contribute, missing ratings are simply absent.
    """
    units = [list(v.values()) for v in ratings.ratings.values() if len(v) >= 2]
    if len(units) < 2:
        raise DegenerateInput("need at least 2 units with 2+ ratings")
    n = sum(len(u) for u in units)
    d_observed = 0.0
    for values in units:
        m = len(values)
        within = sum((a - b) ** 2 for a in values for b in values)
        d_observed += within / (m - 1)
    d_observed /= n
    pooled = [v for values in units for v in values]
    d_expected = sum((a - b) ** 2 for a in pooled for b in pooled) / (n * (n - 1))
    if d_expected == 0:
        return 1.0  # unanimous ratings everywhere
    return 1.0 - d_observed / d_expected


def mean_pairwise_pearson(ratings: RatingSet) -> float:
    """Average Pearson correlation over annotator pairs, on co-rated pairs."""
    annotators = ratings.annotators
    if len(annotators) < 2:
        raise DegenerateInput("need at least 2 annotators")
    values = []
    for i in range(len(annotators)):
        for j in range(i + 1, len(annotators)):
            a, b = annotators[i], annotators[j]
            shared = [
                (scores[a], scores[b])
                for scores in ratings.ratings.values()
                if a in scores and b in scores
            ]
            if len(shared) < 2:
                continue
            try:
                values.append(pearson([s[0] for s in shared], [s[1] for s in shared]))
            except DegenerateInput:
                continue
    if not values:
        raise DegenerateInput("no annotator pair with comparable ratings")
    return sum(values) / len(values)


def mean_abs_difference(ratings: RatingSet) -> float:
    """Mean absolute score difference over all co-rated annotator pairs."""
    diffs: list[float] = []
    for scores in ratings.ratings.values():
        values = list(scores.values())
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                diffs.append(abs(values[i] - values[j]))
    if not diffs:
        raise DegenerateInput("no co-rated pairs")
    return sum(diffs) / len(diffs)


def annotator_ceiling(ratings: RatingSet) -> float:
    """Mean leave-one-out Pearson: each annotator against the mean of the rest.

    Requires at least three annotators with full coverage. A fold where
    either side has no variance is dropped rather than reported as 0.
    """
    annotators = ratings.annotators
    if len(annotators) < 3:
        raise DegenerateInput("need at least 3 annotators")
    pair_ids = ratings.pair_ids
    for pid in pair_ids:
        missing = set(annotators) - set(ratings.ratings[pid])
        if missing:
            raise DegenerateInput(f"annotators {sorted(missing)} did not rate pair {pid}")
    folds: list[float] = []
    for a in annotators:
        own = [ratings.ratings[pid][a] for pid in pair_ids]
        rest = [
            sum(ratings.ratings[pid][b] for b in annotators if b != a) / (len(annotators) - 1)
            for pid in pair_ids
        ]
        try:
            folds.append(pearson(own, rest))
        except DegenerateInput:
            continue  # constant annotator: fold reported absent
    if not folds:
        raise DegenerateInput("every fold was degenerate")
    return sum(folds) / len(folds)


def agreement(ratings: RatingSet) -> AgreementReport:
    components = {}
    for name, fn in (
        ("krippendorff_alpha", krippendorff_alpha_interval),
        ("mean_pairwise_pearson", mean_pairwise_pearson),
        ("mean_abs_difference", mean_abs_difference),
        ("leave_one_out_pearson", annotator_ceiling),
    ):
        try:
            components[name] = fn(ratings)
        except DegenerateInput:
            components[name] = None
    if all(v is None for v in components.values()):
        raise DegenerateInput("no agreement statistic is defined for this input")
    return AgreementReport(**components)


def rescale_to_ten(value: float, lo: float, hi: float) -> float:
    """Map a metric value from its theoretical range onto the 0-10 scale."""
    if hi <= lo:
        raise ValueError("invalid range")
    return (value - lo) / (hi - lo) * 10.0


def metric_vs_human(
    metric_by_pair: Mapping[str, Optional[float]],
    ratings: RatingSet,
    *,
    scale: tuple[float, float] = (0.0, 1.0),
) -> CorrelationReport:
    """Correlate one metric against averaged human scores, joined on pair id.

    Metric values are rescaled from their theoretical range to 0-10 so
    Pearson is comparable across metrics; rank coefficients are
    unaffected by the rescaling.
    """
    human = ratings.mean_per_pair()
    shared = sorted(
        pid for pid, v in metric_by_pair.items() if v is not None and pid in human
    )
    if not shared:
        raise JoinEmpty("no pair ids shared between metric scores and ratings")
    x = [rescale_to_ten(metric_by_pair[pid], *scale) for pid in shared]
    y = [human[pid] for pid in shared]
    return CorrelationReport(
        pearson=pearson(x, y),
        spearman=spearman(x, y),
        kendall=kendall_tau(x, y),
        n=len(shared),
    )
