"""Tests for correlation coefficients, agreement statistics and the metric join."""

import itertools
import math
import random

import pytest

from tabeval.errors import DegenerateInput, JoinEmpty
from tabeval.stats import (
    RatingSet,
    agreement,
    annotator_ceiling,
    kendall_tau,
    krippendorff_alpha_interval,
    load_ratings_jsonl,
    mean_abs_difference,
    mean_pairwise_pearson,
    metric_vs_human,
    pearson,
    spearman,
)


def brute_force_tau_b(x, y):
    """Tau-b from first principles: concordant/discordant over all pairs."""
    n = len(x)
    c = d = 0
    tx = ty = 0
    for i, j in itertools.combinations(range(n), 2):
        sx = (x[i] > x[j]) - (x[i] < x[j])
        sy = (y[i] > y[j]) - (y[i] < y[j])
        if sx == 0:
            tx += 1
        if sy == 0:
            ty += 1
        if sx and sy:
            if sx == sy:
                c += 1
            else:
                d += 1
    n0 = n * (n - 1) / 2
    return (c - d) / math.sqrt((n0 - tx) * (n0 - ty))


def brute_force_ranks(values):
    """Mid-ranks via exhaustive rank assignment: average rank over tied positions."""
    ranks = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        ranks.append(less + (equal + 1) / 2)
    return ranks


class TestPearson:
    def test_perfect_positive(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, x) == pytest.approx(1.0)

    def test_perfect_negative(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_hand_computed_sums(self):
        x = [1.0, 2.0, 3.0, 5.0]
        y = [2.0, 2.0, 4.0, 5.0]
        # direct formula: means 2.75, 3.25; hand-expanded sigma terms
        mx, my = 2.75, 3.25
        sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
        sxx = sum((a - mx) ** 2 for a in x)
        syy = sum((b - my) ** 2 for b in y)
        assert pearson(x, y) == pytest.approx(sxy / math.sqrt(sxx * syy), abs=1e-12)

    def test_zero_variance_raises(self):
        with pytest.raises(DegenerateInput):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_affine_invariance(self):
        rng = random.Random(5)
        x = [rng.random() for _ in range(10)]
        y = [rng.random() for _ in range(10)]
        r = pearson(x, y)
        assert pearson([3 * v + 2 for v in x], y) == pytest.approx(r)
        assert pearson(x, [0.5 * v - 7 for v in y]) == pytest.approx(r)


class TestSpearman:
    def test_monotone_increasing(self):
        assert spearman([1, 2, 3, 4], [10, 20, 40, 80]) == pytest.approx(1.0)

    def test_monotone_decreasing(self):
        assert spearman([1, 2, 3], [9, 4, 1]) == pytest.approx(-1.0)

    def test_tied_data_matches_rank_oracle(self):
        x = [1.0, 1.0, 2.0]
        y = [3.0, 5.0, 4.0]
        expected = pearson(brute_force_ranks(x), brute_force_ranks(y))
        assert spearman(x, y) == pytest.approx(expected, abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = random.Random(6)
        x = [rng.random() for _ in range(12)]
        y = [rng.random() for _ in range(12)]
        rho = spearman(x, y)
        assert spearman([math.exp(v) for v in x], y) == pytest.approx(rho)


class TestKendall:
    def test_identical_orders(self):
        assert kendall_tau([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)

    def test_reversed_orders(self):
        assert kendall_tau([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)

    def test_ties_match_pair_enumeration(self):
        x = [1.0, 2.0, 2.0, 3.0]
        y = [1.0, 3.0, 2.0, 4.0]
        assert kendall_tau(x, y) == pytest.approx(brute_force_tau_b(x, y), abs=1e-12)

    def test_random_against_oracle(self):
        rng = random.Random(17)
        for _ in range(50):
            n = rng.randint(2, 8)
            x = [float(rng.randint(0, 4)) for _ in range(n)]
            y = [float(rng.randint(0, 4)) for _ in range(n)]
            try:
                got = kendall_tau(x, y)
            except DegenerateInput:
                assert len(set(x)) == 1 or len(set(y)) == 1
                continue
            assert got == pytest.approx(brute_force_tau_b(x, y), abs=1e-12)


class TestKrippendorff:
    def test_unanimous_is_one(self):
        rs = RatingSet()
        for pid in ("p1", "p2", "p3"):
            for ann in ("a", "b", "c"):
                rs.add(pid, ann, 7)
        assert krippendorff_alpha_interval(rs) == 1.0

    def test_two_annotators_two_items_hand_computed(self):
        # ratings [1,2] vs [2,1]: full coincidence-matrix expansion by hand.
        # unit1 values (1,2), unit2 values (2,1); n = 4
        # Do = [ (2*(1-2)^2)/1 + (2*(2-1)^2)/1 ] / 4 = 1.0
        # pooled values (1,2,2,1): sum of squared diffs over ordered pairs = 8
        # De = 8 / (4*3) = 2/3 ; alpha = 1 - 1.0/(2/3) = -0.5
        rs = RatingSet()
        rs.add("u1", "a", 1)
        rs.add("u1", "b", 2)
        rs.add("u2", "a", 2)
        rs.add("u2", "b", 1)
        assert krippendorff_alpha_interval(rs) == pytest.approx(-0.5, abs=1e-12)

    def test_single_shared_item_degenerate(self):
        rs = RatingSet()
        rs.add("u1", "a", 1)
        rs.add("u1", "b", 2)
        rs.add("u2", "a", 5)  # only one rating: not pairable
        with pytest.raises(DegenerateInput):
            krippendorff_alpha_interval(rs)

    def test_missing_data_tolerated(self):
        rs = RatingSet()
        rs.add("u1", "a", 1)
        rs.add("u1", "b", 1)
        rs.add("u2", "a", 9)
        rs.add("u2", "b", 9)
        rs.add("u3", "c", 5)  # unpaired unit is ignored
        assert krippendorff_alpha_interval(rs) == pytest.approx(1.0)

    def test_alpha_at_most_one(self):
        rng = random.Random(23)
        for _ in range(30):
            rs = RatingSet()
            for pid in range(4):
                for ann in "abc":
                    if rng.random() < 0.8:
                        rs.add(f"p{pid}", ann, rng.randint(0, 10))
            try:
                assert krippendorff_alpha_interval(rs) <= 1.0 + 1e-12
            except DegenerateInput:
                pass


class TestAnnotatorCeiling:
    def test_three_identical_annotators(self):
        rs = RatingSet()
        for i, score in enumerate((1, 4, 7, 9)):
            for ann in "abc":
                rs.add(f"p{i}", ann, score)
        assert annotator_ceiling(rs) == pytest.approx(1.0)

    def test_constant_annotator_fold_dropped(self):
        rs = RatingSet()
        scores = {"a": [1, 2, 3, 4], "b": [2, 3, 4, 5], "c": [5, 5, 5, 5]}
        for ann, values in scores.items():
            for i, s in enumerate(values):
                rs.add(f"p{i}", ann, s)
        # fold for "c" is degenerate and dropped; folds for a and b remain
        got = annotator_ceiling(rs)
        expected_a = pearson(scores["a"], [(b + c) / 2 for b, c in zip(scores["b"], scores["c"])])
        expected_b = pearson(scores["b"], [(a + c) / 2 for a, c in zip(scores["a"], scores["c"])])
        assert got == pytest.approx((expected_a + expected_b) / 2)

    def test_synthetic_three_fold_hand_computation(self):
        rs = RatingSet()
        scores = {"a": [1, 2, 3], "b": [2, 4, 5], "c": [0, 3, 4]}
        for ann, values in scores.items():
            for i, s in enumerate(values):
                rs.add(f"p{i}", ann, s)
        folds = []
        for ann in "abc":
            others = [o for o in "abc" if o != ann]
            rest = [sum(scores[o][i] for o in others) / 2 for i in range(3)]
            folds.append(pearson(scores[ann], rest))
        assert annotator_ceiling(rs) == pytest.approx(sum(folds) / 3)

    def test_requires_full_coverage(self):
        rs = RatingSet()
        rs.add("p0", "a", 1)
        rs.add("p0", "b", 2)
        rs.add("p0", "c", 3)
        rs.add("p1", "a", 1)
        with pytest.raises(DegenerateInput):
            annotator_ceiling(rs)


class TestMetricVsHuman:
    def _ratings(self):
        rs = RatingSet()
        human = {"p0": 2.0, "p1": 5.0, "p2": 7.0, "p3": 9.0}
        for pid, score in human.items():
            rs.add(pid, "a", score)
            rs.add(pid, "b", score)
        return rs

    def test_metric_equal_to_human_mean(self):
        rs = self._ratings()
        metric = {pid: mean / 10 for pid, mean in rs.mean_per_pair().items()}
        report = metric_vs_human(metric, rs)
        assert report.pearson == pytest.approx(1.0)
        assert report.spearman == pytest.approx(1.0)
        assert report.kendall == pytest.approx(1.0)
        assert report.n == 4

    def test_disjoint_ids(self):
        rs = self._ratings()
        with pytest.raises(JoinEmpty):
            metric_vs_human({"q0": 0.5}, rs)

    def test_row_order_independent(self):
        rs = self._ratings()
        metric = {"p3": 0.8, "p0": 0.1, "p2": 0.9, "p1": 0.4}
        a = metric_vs_human(metric, rs)
        b = metric_vs_human(dict(sorted(metric.items())), rs)
        assert a == b

    def test_none_valued_metrics_excluded(self):
        rs = self._ratings()
        metric = {"p0": 0.1, "p1": 0.4, "p2": None, "p3": 0.9}
        assert metric_vs_human(metric, rs).n == 3


class TestRatingsIo:
    def test_load_jsonl_with_overwrite(self, tmp_path):
        path = tmp_path / "ratings.jsonl"
        lines = [
            '{"pair_id": "p0", "annotator_id": "a", "score": 3, "timestamp": 1}',
            '{"pair_id": "p0", "annotator_id": "a", "score": 5, "timestamp": 2}',
            '{"pair_id": "p0", "annotator_id": "b", "score": 5, "timestamp": 3}',
        ]
        path.write_text("\n".join(lines) + "\n")
        rs = load_ratings_jsonl(path)
        assert rs.ratings["p0"]["a"] == 5  # later line wins
        assert rs.annotators == ["a", "b"]

    def test_agreement_bundle(self):
        rs = RatingSet()
        for i, base in enumerate((1, 4, 7, 9)):
            rs.add(f"p{i}", "a", base)
            rs.add(f"p{i}", "b", min(10, base + 1))
            rs.add(f"p{i}", "c", max(0, base - 1))
        report = agreement(rs)
        assert report.krippendorff_alpha <= 1.0
        assert report.mean_abs_difference > 0
        assert -1 <= report.mean_pairwise_pearson <= 1
        assert -1 <= report.leave_one_out_pearson <= 1
        assert mean_pairwise_pearson(rs) == report.mean_pairwise_pearson
        assert mean_abs_difference(rs) == report.mean_abs_difference
