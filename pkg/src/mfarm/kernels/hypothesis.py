"""Friedman, Wilcoxon signed-rank, Levene, two-sample KS and Spearman tests.

Every test returns a :class:`TestOutcome`; degenerate inputs (all ties, zero
spread) give ``p = 1`` instead of raising.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptySample, SampleTooSmall, ShapeMismatch, TooFewGroups, TooFewPoints
from .distributions import chi2_sf, f_sf, kolmogorov_sf, normal_sf, t_sf
from .outcomes import TestOutcome


def rankdata(a) -> np.ndarray:
    """1-based ranks of a 1-D array, ties receiving their average rank."""
    a = np.asarray(a, dtype=float)
    n = a.size
    order = np.argsort(a, kind="mergesort")
    sorted_a = a[order]
    # boundaries of tie blocks in sorted order
    starts = np.flatnonzero(np.r_[True, sorted_a[1:] != sorted_a[:-1]])
    ends = np.r_[starts[1:], n]
    avg = (starts + ends + 1) / 2.0
    ranks = np.empty(n)
    ranks[order] = np.repeat(avg, ends - starts)
    return ranks


def row_ranks(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Within-row average ranks of an (n, k) matrix plus per-row tie counts.

    The second array holds, for each row, sum over tie blocks of t^3 - t.
    """
    less = (m[:, None, :] < m[:, :, None]).sum(axis=2)
    equal = (m[:, None, :] == m[:, :, None]).sum(axis=2)
    ranks = less + (equal + 1) / 2.0
    ties = (equal.astype(np.int64) ** 2).sum(axis=1) - m.shape[1]
    return ranks, ties


def _as_columns(columns) -> np.ndarray:
    if isinstance(columns, np.ndarray) and columns.ndim == 2:
        return np.asarray(columns, dtype=float)
    cols = [np.asarray(c, dtype=float) for c in columns]
    if len({c.shape for c in cols}) > 1 or any(c.ndim != 1 for c in cols):
        raise ShapeMismatch("all columns must be 1-D vectors of equal length")
    return np.column_stack(cols)


def friedman_test(columns, min_groups: int = 3) -> TestOutcome:
    """Friedman rank test across aligned columns (cases are blocks).

    ``columns`` is either a sequence of K equal-length vectors or an (N, K)
    matrix. The statistic carries the usual tie correction; rows that are
    fully tied contribute nothing, and a panel of fully tied rows is
    degenerate (statistic 0, p 1).
    """
    m = _as_columns(columns)
    n, k = m.shape
    if k < min_groups or k < 2:
        raise TooFewGroups(f"Friedman test needs at least {max(min_groups, 2)} columns, got {k}")
    if n < 2:
        raise ShapeMismatch(f"Friedman test needs at least 2 cases, got {n}")
    ranks, ties = row_ranks(m)
    tie_total = int(ties.sum())
    if tie_total == n * (k ** 3 - k):
        return TestOutcome(0.0, 1.0, (k - 1,), degenerate=True, method="chi2")
    rank_sums = ranks.sum(axis=0)
    chi2 = 12.0 / (n * k * (k + 1)) * float(np.sum(rank_sums ** 2)) - 3.0 * n * (k + 1)
    correction = 1.0 - tie_total / (n * k * (k * k - 1))
    stat = max(0.0, chi2 / correction)
    return TestOutcome(stat, chi2_sf(stat, k - 1), (k - 1,), method="chi2")


def kendalls_w(outcome: TestOutcome, n: int) -> float:
    """Kendall's coefficient of concordance implied by a Friedman outcome."""
    k_minus_1 = outcome.df[0]
    return outcome.statistic / (n * k_minus_1)


def _signed_rank_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """Null distribution (counts) of twice the positive-rank sum.

    Each rank enters the sum with probability 1/2; doubling makes tied
    average ranks integral so a plain subset-sum recursion applies.
    """
    total = int(doubled_ranks.sum())
    # int64 overflows past 2**62 subsets
    dtype = np.int64 if doubled_ranks.size <= 62 else object
    counts = np.zeros(total + 1, dtype=dtype)
    counts[0] = 1
    top = 0
    for r in doubled_ranks:
        r = int(r)
        counts[r : top + r + 1] += counts[: top + 1].copy()
        top += r
    return counts


def wilcoxon_signed_rank(x, y, config=None, *, zero_policy=None, min_exact_n=None) -> TestOutcome:
    """Two-sided paired Wilcoxon signed-rank test on ``x - y``.

    Zero differences are dropped (classical) or ranked then discarded
    (Pratt) according to ``config.wilcoxon_zero_policy``. With at most
    ``config.min_exact_n`` non-zero differences the p-value is exact;
    beyond that a tie-corrected normal approximation with continuity
    correction is used. The reported statistic is min(T+, T-).
    """
    if zero_policy is None:
        zero_policy = getattr(config, "wilcoxon_zero_policy", "drop-zeros")
    if min_exact_n is None:
        min_exact_n = getattr(config, "min_exact_n", 25)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeMismatch(f"paired samples must be equal-length vectors, got {x.shape} and {y.shape}")
    if x.size < 1:
        raise ShapeMismatch("paired samples are empty")
    d = x - y
    if zero_policy == "pratt":
        ranks = rankdata(np.abs(d))
        keep = d != 0
        ranks, d = ranks[keep], d[keep]
    elif zero_policy == "drop-zeros":
        d = d[d != 0]
        ranks = rankdata(np.abs(d))
    else:
        raise ValueError(f"unknown zero policy {zero_policy!r}")
    n_eff = d.size
    if n_eff == 0:
        return TestOutcome(0.0, 1.0, (0,), degenerate=True, method="none")

    t_plus = float(ranks[d > 0].sum())
    t_minus = float(ranks[d < 0].sum())
    stat = min(t_plus, t_minus)

    if n_eff <= min_exact_n:
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        counts = _signed_rank_counts(doubled)
        t2 = int(round(2.0 * t_plus))
        total = float(2 ** n_eff)
        lower = float(counts[: t2 + 1].sum()) / total
        upper = float(counts[t2:].sum()) / total
        p = min(1.0, 2.0 * min(lower, upper))
        return TestOutcome(stat, p, (n_eff,), method="exact")

    mean = float(ranks.sum()) / 2.0
    sd = math.sqrt(float(np.sum(ranks * ranks)) / 4.0)
    z = max(0.0, abs(t_plus - mean) - 0.5) / sd
    p = min(1.0, 2.0 * normal_sf(z))
    return TestOutcome(stat, p, (n_eff,), method="normal")


def levene_test(samples, centering: str = "mean") -> TestOutcome:
    """Levene test for equal variances over two or more samples.

    Absolute deviations from each sample's mean (or median, giving the
    Brown-Forsythe variant) are compared by one-way ANOVA.
    """
    samples = [np.asarray(s, dtype=float) for s in samples]
    k = len(samples)
    if k < 2:
        raise TooFewGroups(f"Levene test needs at least 2 samples, got {k}")
    for j, s in enumerate(samples):
        if s.ndim != 1 or s.size < 2:
            raise SampleTooSmall(f"sample {j} has {s.size} values; Levene needs at least 2")
    if centering == "mean":
        z = [np.abs(s - s.mean()) for s in samples]
    elif centering == "median":
        z = [np.abs(s - np.median(s)) for s in samples]
    else:
        raise ValueError(f"unknown centering {centering!r}")
    sizes = np.array([s.size for s in z])
    n_total = int(sizes.sum())
    df = (k - 1, n_total - k)
    flat = np.concatenate(z)
    if np.all(flat == flat[0]):
        return TestOutcome(0.0, 1.0, df, degenerate=True, method="F")
    # fsum keeps the result independent of sample order
    means = np.array([s.mean() for s in z])
    within = math.fsum(math.fsum((s - m) ** 2) for s, m in zip(z, means))
    if np.all(means == means[0]):
        between = 0.0
    else:
        grand = math.fsum(sizes * means) / n_total
        between = math.fsum(sizes * (means - grand) ** 2)
    if between == 0.0:
        return TestOutcome(0.0, 1.0, df, method="F")
    if within == 0.0:
        return TestOutcome(math.inf, 0.0, df, method="F")
    f = (n_total - k) / (k - 1) * between / within
    return TestOutcome(f, f_sf(f, *df), df, method="F")


def ks_two_sample(x, y) -> TestOutcome:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

    D is evaluated exactly at every pooled sample point; the p-value uses
    the Kolmogorov tail at (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D.
    """
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    nx, ny = x.size, y.size
    if nx == 0 or ny == 0:
        raise EmptySample("both samples must be non-empty")
    pooled = np.concatenate([x, y])
    cx = np.searchsorted(x, pooled, side="right")
    cy = np.searchsorted(y, pooled, side="right")
    d = float(np.max(np.abs(cx / nx - cy / ny)))
    if d == 0.0:
        return TestOutcome(0.0, 1.0, (nx, ny), degenerate=True, method="asymptotic")
    ne = nx * ny / (nx + ny)
    root = math.sqrt(ne)
    lam = (root + 0.12 + 0.11 / root) * d
    return TestOutcome(d, kolmogorov_sf(lam), (nx, ny), method="asymptotic")


def spearman_test(x, y) -> TestOutcome:
    """Spearman rank correlation with a two-sided t-approximation p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeMismatch(f"samples must be equal-length vectors, got {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise TooFewPoints(f"Spearman test needs at least 3 points, got {n}")
    rx = rankdata(x) - (n + 1) / 2.0
    ry = rankdata(y) - (n + 1) / 2.0
    sxx = float(np.dot(rx, rx))
    syy = float(np.dot(ry, ry))
    if sxx == 0.0 or syy == 0.0:
        return TestOutcome(0.0, 1.0, (n - 2,), degenerate=True, method="t")
    rho = float(np.dot(rx, ry)) / math.sqrt(sxx * syy)
    rho = min(1.0, max(-1.0, rho))
    if abs(rho) == 1.0:
        return TestOutcome(rho, 0.0, (n - 2,), method="t")
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = min(1.0, 2.0 * t_sf(abs(t), n - 2))
    return TestOutcome(rho, p, (n - 2,), method="t")
