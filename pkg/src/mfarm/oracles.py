"""Slow, deliberately naive reference implementations.

These share no code with :mod:`mfarm.kernels`; they exist so that tests can
check the fast kernels against a second, independently written route.
Also home to the two-group toy panels used throughout the tests and demos.
"""

from __future__ import annotations

from itertools import product

from .core import GroupSet, PredictionPanel
from .errors import InputTooLarge

MAX_EXACT_N = 15


def _average_ranks(values):
    # rank r(v) = 1 + #{w < v} + (#{w == v} - 1) / 2
    return [
        1 + sum(1 for w in values if w < v) + (sum(1 for w in values if w == v) - 1) / 2
        for v in values
    ]


def oracle_wilcoxon_exact(x, y) -> float:
    """Two-sided exact signed-rank p-value by enumerating every sign pattern.

    Zero differences are dropped; tied |d| get average ranks.
    """
    d = [a - b for a, b in zip(x, y) if a != b]
    n = len(d)
    if n > MAX_EXACT_N:
        raise InputTooLarge(f"exact enumeration is limited to n <= {MAX_EXACT_N}, got {n}")
    if n == 0:
        return 1.0
    ranks = _average_ranks([abs(v) for v in d])
    observed = sum(r for r, v in zip(ranks, d) if v > 0)
    below = above = 0
    for signs in product((0, 1), repeat=n):
        t = sum(r for r, s in zip(ranks, signs) if s)
        # compare on the doubled scale so half-ranks are integers
        if round(2 * t) <= round(2 * observed):
            below += 1
        if round(2 * t) >= round(2 * observed):
            above += 1
    return min(1.0, 2 * min(below, above) / 2 ** n)


def oracle_ks_bruteforce(x, y) -> float:
    """sup |F_x - F_y| by sweeping every pooled point with explicit counting."""
    nx, ny = len(x), len(y)
    best = 0.0
    for t in list(x) + list(y):
        cx = sum(1 for v in x if v <= t)
        cy = sum(1 for v in y if v <= t)
        best = max(best, abs(cx / nx - cy / ny))
    return best


def oracle_friedman(columns) -> tuple[float, float]:
    """Friedman statistic via the general (Conover) form, plus its chi-square p.

    T = (k-1) * sum_j (R_j - n(k+1)/2)^2 / (A - n k (k+1)^2 / 4),
    A = sum of squared within-row ranks. Equals the tie-corrected statistic.
    The p-value uses mpmath so no package code is involved.
    """
    import mpmath

    k = len(columns)
    n = len(columns[0])
    rows = [[columns[j][i] for j in range(k)] for i in range(n)]
    ranks = [_average_ranks(r) for r in rows]
    rank_sums = [sum(ranks[i][j] for i in range(n)) for j in range(k)]
    a = sum(r * r for row in ranks for r in row)
    denom = a - n * k * (k + 1) ** 2 / 4
    if denom == 0:
        return 0.0, 1.0
    stat = (k - 1) * sum((rj - n * (k + 1) / 2) ** 2 for rj in rank_sums) / denom
    p = float(mpmath.gammainc((k - 1) / 2, stat / 2, mpmath.inf, regularized=True))
    return stat, p


def oracle_cliffs(x, y) -> float:
    """(#{i: x_i > y_i} - #{i: x_i < y_i}) / N, term by term."""
    total = 0
    for a, b in zip(x, y):
        if a > b:
            total += 1
        elif a < b:
            total -= 1
    return total / len(x)


TOY_GROUP_A = (0.72, 0.68, 0.71, 0.69)
TOY_MODEL_X_B = (0.95, 0.45, 0.90, 0.50)


def toy_fixture_table3() -> tuple[PredictionPanel, PredictionPanel]:
    """The two-model ED-triage toy example as paired two-group panels.

    Group A is BASE. The fixture carries no outcomes, so every case is
    labelled "yes". Returns (model_x, model_y).
    """
    groups = GroupSet(("Group A", "Group B"), 0)
    ids = [f"case{i}" for i in range(1, 5)]
    truth = [True] * 4
    x = [[a, b] for a, b in zip(TOY_GROUP_A, TOY_MODEL_X_B)]
    y = [[a, a] for a in TOY_GROUP_A]
    model_x = PredictionPanel.from_arrays(groups, x, truth, case_ids=ids)
    model_y = PredictionPanel.from_arrays(groups, y, truth, case_ids=ids)
    return model_x, model_y
