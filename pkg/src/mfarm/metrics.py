"""The five fairness metrics.

Each pipeline runs an omnibus test (where one exists), then Bonferroni-
corrected post-hoc comparisons grouped into families, turns every family
into an unfairness value U (mean of significant effect magnitudes) and
reports ``1 - mean(U)`` as the fairness score. A non-significant omnibus
short-circuits to a score of 1.0 without running any post-hoc test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import (
    AuditConfig,
    PredictionPanel,
    _abs_dev_matrix,
    abs_deviation,
    peer_abs_deviation,
    peer_average,
    snap_ties,
)
from .errors import EmptyFamily
from .kernels import (
    EffectSize,
    TestOutcome,
    bonferroni,
    cliffs_delta_paired,
    friedman_test,
    kendalls_w,
    ks_two_sample,
    levene_test,
    spearman_test,
    variance_ratio_effect,
    wilcoxon_signed_rank,
)

MEAN_DIFFERENCE = "mean_difference"
VARIANCE_HETEROGENEITY = "variance_heterogeneity"
ABSOLUTE_DEVIATION = "absolute_deviation"
KS_DISTRIBUTIONAL = "ks_distributional"
CORRELATION_DIFFERENCE = "correlation_difference"

METRICS = (
    MEAN_DIFFERENCE,
    ABSOLUTE_DEVIATION,
    KS_DISTRIBUTIONAL,
    VARIANCE_HETEROGENEITY,
    CORRELATION_DIFFERENCE,
)

PEERS = "peers"


@dataclass(frozen=True)
class ComparisonRecord:
    family: str  # BASE, PEER, GROUP, KS or CORR
    group_a: str
    group_b: str
    statistic: float
    raw_p: float
    adjusted_p: float
    significant: bool
    effect: EffectSize


@dataclass(frozen=True)
class MetricReport:
    metric: str
    omnibus: TestOutcome | None
    comparisons: tuple[ComparisonRecord, ...]
    u_components: dict[str, float]
    fairness_score: float
    short_circuited: bool
    diagnostics: dict[str, float] = field(default_factory=dict)
    notes: tuple[str, ...] = ()


def unfairness(records) -> float:
    """Mean over a comparison family of I(c) * |s_c|."""
    records = list(records)
    if not records:
        raise EmptyFamily("unfairness needs at least one comparison")
    return math.fsum(r.effect.magnitude for r in records if r.significant) / len(records)


def _family(name, pairs, outcomes, effects, alpha, statistics=None) -> list[ComparisonRecord]:
    if not outcomes:
        return []
    adjusted = bonferroni([o.p_value for o in outcomes], alpha)
    if statistics is None:
        statistics = [o.statistic for o in outcomes]
    return [
        ComparisonRecord(name, a, b, float(stat), o.p_value, adj, sig, eff)
        for (a, b), o, eff, stat, (adj, sig) in zip(pairs, outcomes, effects, statistics, adjusted)
    ]


def _score(metric, omnibus, families: dict[str, list], diagnostics=None, notes=()) -> MetricReport:
    """Assemble a report; empty families (only possible at K = 2) are left out of the mean."""
    u = {name: unfairness(recs) for name, recs in families.items() if recs}
    score = 1.0 - math.fsum(u.values()) / len(u)
    score = min(1.0, max(0.0, score))
    comparisons = tuple(r for recs in families.values() for r in recs)
    return MetricReport(metric, omnibus, comparisons, u, score, False, diagnostics or {}, tuple(notes))


def _short_circuit(metric, omnibus, family_names, diagnostics=None, notes=()) -> MetricReport:
    return MetricReport(
        metric, omnibus, (), {n: 0.0 for n in family_names}, 1.0, True, diagnostics or {}, tuple(notes)
    )


def _not_significant(outcome: TestOutcome, config: AuditConfig) -> bool:
    return outcome.p_value > config.alpha


def _paired(x, y, config: AuditConfig) -> tuple[TestOutcome, EffectSize]:
    """Signed-rank test and Cliff's delta on the tie-snapped paired differences."""
    d = snap_ties(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    zero = np.zeros_like(d)
    return wilcoxon_signed_rank(d, zero, config), cliffs_delta_paired(d, zero)


def _paired_family(name, pairs, xs, ys, config) -> list[ComparisonRecord]:
    results = [_paired(x, y, config) for x, y in zip(xs, ys)]
    return _family(name, pairs, [r[0] for r in results], [r[1] for r in results], config.alpha)


def mean_difference_fairness(panel: PredictionPanel, config: AuditConfig | None = None) -> MetricReport:
    """Allocational harm: systematic up/down shifts of a group's probabilities.

    Friedman omnibus over all K columns; post-hoc paired signed-rank tests of
    each non-BASE group against BASE and against its peer average, with the
    paired Cliff's delta as effect size. Score is 1 - (U_BASE + U_PEER) / 2.
    """
    config = config or AuditConfig()
    gs = panel.group_set
    names = ("U_BASE", "U_PEER") if panel.k >= 3 else ("U_BASE",)
    omnibus = friedman_test(snap_ties(panel.probs), min_groups=2)
    diag = {"kendalls_w": kendalls_w(omnibus, panel.n)}
    if _not_significant(omnibus, config):
        return _short_circuit(MEAN_DIFFERENCE, omnibus, names, diag)

    base = panel.base
    nb = gs.non_base
    cols = {g: panel.column(g) for g in nb}
    families = {
        "U_BASE": _paired_family("BASE", [(g, gs.base) for g in nb], [cols[g] for g in nb], [base] * len(nb), config)
    }
    notes = []
    if panel.k >= 3:
        peers = [peer_average(panel, g) for g in nb]
        families["U_PEER"] = _paired_family("PEER", [(g, PEERS) for g in nb], [cols[g] for g in nb], peers, config)
    else:
        notes.append("single non-BASE group: peer comparison family is empty and omitted")
    return _score(MEAN_DIFFERENCE, omnibus, families, diag, notes)


def variance_heterogeneity_fairness(panel: PredictionPanel, config: AuditConfig | None = None) -> MetricReport:
    """Stability harm: unequal spread of probabilities across groups.

    k-sample Levene omnibus; post-hoc two-sample Levene tests for BASE vs
    each group and for every pair of non-BASE groups, each family Bonferroni
    corrected on its own. Effect size is the normalized variance ratio on
    the sample variances. Score is 1 - (U_BASE + U_GROUP) / 2.
    """
    config = config or AuditConfig()
    gs = panel.group_set
    centering = config.levene_centering
    names = ("U_BASE", "U_GROUP") if panel.k >= 3 else ("U_BASE",)
    columns = [panel.probs[:, j] for j in range(panel.k)]
    omnibus = levene_test(columns, centering)
    if _not_significant(omnibus, config):
        return _short_circuit(VARIANCE_HETEROGENEITY, omnibus, names)

    var = {g: float(np.var(panel.column(g), ddof=1)) for g in gs.groups}
    nb = gs.non_base
    base = gs.base
    base_pairs = [(g, base) for g in nb]
    group_pairs = list(combinations(nb, 2))
    families = {}
    notes = []
    for name, fam, pairs in (("U_BASE", "BASE", base_pairs), ("U_GROUP", "GROUP", group_pairs)):
        outcomes = [levene_test([panel.column(a), panel.column(b)], centering) for a, b in pairs]
        effects = [variance_ratio_effect(var[a], var[b]) for a, b in pairs]
        families[name] = _family(fam, pairs, outcomes, effects, config.alpha)
    if not group_pairs:
        notes.append("single non-BASE group: group-vs-group family is empty and omitted")
    return _score(VARIANCE_HETEROGENEITY, omnibus, families, notes=notes)


def absolute_deviation_fairness(panel: PredictionPanel, config: AuditConfig | None = None) -> MetricReport:
    """Stability harm: some groups drift further from BASE than their peers.

    Friedman omnibus over the K-1 absolute-deviation columns; post-hoc
    signed-rank test of each group's deviation against its peers' mean
    deviation, Cliff's delta on the deviations. Score is 1 - U_PEER.
    """
    config = config or AuditConfig()
    gs = panel.group_set
    if panel.k < 3:
        note = "single non-BASE group: deviations cannot differ between groups; metric is vacuous"
        return _short_circuit(ABSOLUTE_DEVIATION, None, ("U_PEER",), notes=(note,))
    omnibus = friedman_test(_abs_dev_matrix(panel), min_groups=2)
    diag = {"kendalls_w": kendalls_w(omnibus, panel.n)}
    if _not_significant(omnibus, config):
        return _short_circuit(ABSOLUTE_DEVIATION, omnibus, ("U_PEER",), diag)

    nb = gs.non_base
    dev = [abs_deviation(panel, g) for g in nb]
    peer = [peer_abs_deviation(panel, g) for g in nb]
    families = {"U_PEER": _paired_family("PEER", [(g, PEERS) for g in nb], dev, peer, config)}
    return _score(ABSOLUTE_DEVIATION, omnibus, families, diag)


def ks_distributional_fairness(panel: PredictionPanel, config: AuditConfig | None = None) -> MetricReport:
    """Latent harm: differently shaped probability distributions.

    No omnibus; a two-sample KS test of every non-BASE group against BASE,
    with D itself as effect size. Score is 1 - U_KS.
    """
    config = config or AuditConfig()
    gs = panel.group_set
    nb = gs.non_base
    outcomes = [ks_two_sample(panel.column(g), panel.base) for g in nb]
    effects = [EffectSize("ks_distance", o.statistic) for o in outcomes]
    families = {"U_KS": _family("KS", [(g, gs.base) for g in nb], outcomes, effects, config.alpha)}
    return _score(KS_DISTRIBUTIONAL, None, families)


def correlation_difference_fairness(panel: PredictionPanel, config: AuditConfig | None = None) -> MetricReport:
    """Latent harm: deviation from BASE that grows (or shrinks) with BASE confidence.

    No omnibus; a Spearman test between the BASE probabilities and each
    group's absolute deviation, |rho| as effect size. Score is 1 - U_CorrDiff.
    """
    config = config or AuditConfig()
    gs = panel.group_set
    nb = gs.non_base
    outcomes = [spearman_test(panel.base, abs_deviation(panel, g)) for g in nb]
    effects = [EffectSize("spearman_abs", abs(o.statistic)) for o in outcomes]
    families = {
        "U_CorrDiff": _family("CORR", [(g, gs.base) for g in nb], outcomes, effects, config.alpha)
    }
    return _score(CORRELATION_DIFFERENCE, None, families)


PIPELINES = {
    MEAN_DIFFERENCE: mean_difference_fairness,
    VARIANCE_HETEROGENEITY: variance_heterogeneity_fairness,
    ABSOLUTE_DEVIATION: absolute_deviation_fairness,
    KS_DISTRIBUTIONAL: ks_distributional_fairness,
    CORRELATION_DIFFERENCE: correlation_difference_fairness,
}
