"""Rank-sum test behavior on known distributions."""

import itertools
import math

import pytest

from exflow.stats import wilcoxon_rank_sum


def enumerate_exact_p(a, b):
    """Independent two-sided p: enumerate every assignment of the pooled
    midranks to a size-len(a) group and count tail-or-beyond rank sums."""
    pooled = sorted(list(a) + list(b))
    ranks = []
    for value in list(a) + list(b):
        matches = [i + 1 for i, v in enumerate(pooled) if v == value]
        ranks.append(sum(matches) / len(matches))
    n = len(a)
    total = len(ranks)
    mu = n * (total + 1) / 2
    observed = sum(ranks[:n])
    hits = 0
    combos = 0
    for combo in itertools.combinations(range(total), n):
        combos += 1
        w = sum(ranks[i] for i in combo)
        if abs(w - mu) >= abs(observed - mu) - 1e-9:
            hits += 1
    return hits / combos


def test_small_shift_anchor():
    result = wilcoxon_rank_sum([1, 2], [3, 4])
    assert result.method == "exact"
    assert result.p_value == pytest.approx(2 / 6)
    assert result.statistic == 0.0


def test_single_tied_pair():
    result = wilcoxon_rank_sum([1], [1])
    assert result.p_value == 1.0
    assert result.statistic == 0.5


def test_full_separation_anchor():
    result = wilcoxon_rank_sum(list(range(1, 11)), list(range(11, 21)))
    assert result.method == "exact"
    assert result.p_value == pytest.approx(2 / math.comb(20, 10))
    assert result.statistic == 0.0


def test_symmetry_in_arguments():
    a = [1.5, 2.5, 9.0, 4.0]
    b = [3.0, 8.0, 8.0]
    left = wilcoxon_rank_sum(a, b)
    right = wilcoxon_rank_sum(b, a)
    assert left.p_value == pytest.approx(right.p_value)
    # the two U statistics are complementary
    assert left.statistic + right.statistic == pytest.approx(len(a) * len(b))


def test_matches_enumeration_with_ties():
    a = [1, 2, 2, 5]
    b = [2, 3, 3]
    result = wilcoxon_rank_sum(a, b)
    assert result.method == "exact"
    assert result.p_value == pytest.approx(enumerate_exact_p(a, b))


def test_identical_samples_give_p_one():
    result = wilcoxon_rank_sum([4, 4, 4], [4, 4])
    assert result.p_value == 1.0


def test_cutoff_switches_method():
    a = list(range(13))
    b = list(range(13))
    assert wilcoxon_rank_sum(a, b).method == "normal-approximation"
    assert wilcoxon_rank_sum(a, b, exact_cutoff=13).method == "exact"
    assert wilcoxon_rank_sum(a[:5], b[:5]).method == "exact"


def test_normal_approximation_close_to_exact():
    a = [float(v) for v in range(10)]
    b = [v + 2.5 for v in range(10)]
    exact = wilcoxon_rank_sum(a, b, exact_cutoff=12)
    approx = wilcoxon_rank_sum(a, b, exact_cutoff=1)
    assert approx.method == "normal-approximation"
    assert approx.p_value == pytest.approx(exact.p_value, abs=1e-2)


def test_continuity_correction_flag():
    a = [float(v) for v in range(14)]
    b = [v + 1.0 for v in range(14)]
    with_cc = wilcoxon_rank_sum(a, b, continuity=True)
    without = wilcoxon_rank_sum(a, b, continuity=False)
    assert with_cc.p_value > without.p_value


def test_constant_pool_large_samples():
    a = [7.0] * 14
    b = [7.0] * 14
    result = wilcoxon_rank_sum(a, b)
    assert result.method == "normal-approximation"
    assert result.p_value == 1.0


def test_empty_samples_rejected():
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([], [1.0])
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([1.0], [])


def test_p_value_within_unit_interval():
    samples = [
        ([1, 1, 1, 2], [1, 2, 2]),
        ([0.5], [0.25, 0.75]),
        (list(range(8)), [3.5] * 6),
    ]
    for a, b in samples:
        p = wilcoxon_rank_sum(a, b).p_value
        assert 0.0 <= p <= 1.0
