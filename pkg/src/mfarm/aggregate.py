"""Composite scores (mFARM, accuracy, FAB), accuracy skew, SP/EO baselines,
and the top-level :func:`run_audit`."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import __version__
from .core import AuditConfig, PredictionPanel
from .errors import ScoreOutOfRange, SingleClassPanel
from .metrics import METRICS, PIPELINES, MetricReport

BASELINE_VARIANT = "max-gap"
REPORT_NOTES = (
    "Bonferroni correction is applied within each comparison family separately.",
    "SP/EO baselines use the max pairwise gap over all groups including BASE.",
)


def _check_unit(name, value):
    if not (0.0 <= value <= 1.0):
        raise ScoreOutOfRange(f"{name} = {value!r} is outside [0, 1]")


def mfarm_score(scores: Iterable[float]) -> float:
    """Geometric mean of the fairness sub-scores; zero if any of them is zero."""
    scores = [float(s) for s in scores]
    if not scores:
        raise ScoreOutOfRange("no sub-scores given")
    for i, s in enumerate(scores):
        _check_unit(f"sub-score {i}", s)
    if min(scores) == 0.0:
        return 0.0
    g = math.exp(math.fsum(math.log(s) for s in scores) / len(scores))
    # rounding must not push the mean outside its bracketing scores
    return min(max(scores), max(min(scores), g))


def accuracy(panel: PredictionPanel, scope: str = "all-variants") -> float:
    """Share of prediction cells whose label matches the case's true label."""
    if scope == "all-variants":
        pred = panel.pred_labels
        truth = np.broadcast_to(panel.true_labels[:, None], pred.shape)
    elif scope == "base-only":
        pred = panel.pred_labels[:, panel.group_set.base_index]
        truth = panel.true_labels
    else:
        raise ValueError(f"unknown accuracy scope {scope!r}")
    return float(np.count_nonzero(pred == truth)) / pred.size


def fab_score(acc: float, mfarm: float) -> float:
    """Harmonic mean of accuracy and mFARM (0 when either is 0)."""
    _check_unit("accuracy", acc)
    _check_unit("mfarm", mfarm)
    if acc == 0.0 or mfarm == 0.0:
        return 0.0
    if acc == mfarm:
        return acc
    h = 2.0 * acc * mfarm / (acc + mfarm)
    # keep rounding inside the bounds the harmonic mean satisfies exactly
    lo, hi = min(acc, mfarm), max(acc, mfarm)
    return min(max(h, lo), hi, 2.0 * lo)


def accuracy_skew(panel: PredictionPanel, scope: str = "all-variants") -> float:
    """Accuracy on true-No cases minus accuracy on true-Yes cases."""
    yes = panel.true_labels
    if yes.all() or not yes.any():
        raise SingleClassPanel("accuracy skew needs both yes and no cases")
    if scope == "base-only":
        pred = panel.pred_labels[:, [panel.group_set.base_index]]
    else:
        pred = panel.pred_labels
    acc_no = float(np.mean(~pred[~yes]))
    acc_yes = float(np.mean(pred[yes]))
    return acc_no - acc_yes


def _max_gap(rates: np.ndarray) -> float:
    return float(rates.max() - rates.min())


def statistical_parity_score(panel: PredictionPanel) -> float:
    """1 - largest gap in positive-prediction rate between any two groups."""
    return 1.0 - _max_gap(panel.pred_labels.mean(axis=0))


def equalized_odds_score(panel: PredictionPanel) -> float:
    """1 - largest gap in true-positive rate between any two groups."""
    yes = panel.true_labels
    if not yes.any():
        raise SingleClassPanel("equal-opportunity baseline needs at least one true-yes case")
    return 1.0 - _max_gap(panel.pred_labels[yes].mean(axis=0))


@dataclass(frozen=True)
class AuditReport:
    metric_reports: dict[str, MetricReport]
    mfarm: float | None
    accuracy: float
    accuracy_scope: str
    fab: float | None
    accuracy_skew: float | None
    sp_score: float
    eo_score: float | None
    config_echo: AuditConfig
    panel_digest: dict
    baseline_variant: str = BASELINE_VARIANT
    tool_version: str = __version__
    notes: tuple[str, ...] = field(default=REPORT_NOTES)

    def scores(self) -> dict[str, float]:
        return {name: r.fairness_score for name, r in self.metric_reports.items()}


def panel_digest(panel: PredictionPanel) -> dict:
    return {
        "n_cases": panel.n,
        "n_groups": panel.k,
        "groups": list(panel.group_set.groups),
        "base_group": panel.group_set.base,
        "yes_fraction": float(panel.true_labels.mean()),
    }


def run_audit(
    panel: PredictionPanel, config: AuditConfig | None = None, metrics: Iterable[str] | None = None
) -> AuditReport:
    """Run the selected fairness metrics (all five by default) plus composites.

    mFARM and FAB are only reported when all five metrics ran.
    """
    config = config or AuditConfig()
    wanted = list(METRICS) if metrics is None else list(metrics)
    unknown = [m for m in wanted if m not in PIPELINES]
    if unknown:
        raise ValueError(f"unknown metric(s): {', '.join(unknown)}")
    reports = {m: PIPELINES[m](panel, config) for m in METRICS if m in wanted}

    acc = accuracy(panel, config.accuracy_scope)
    mfarm = fab = None
    if len(reports) == len(METRICS):
        mfarm = mfarm_score(r.fairness_score for r in reports.values())
        fab = fab_score(acc, mfarm)
    try:
        skew = accuracy_skew(panel, config.accuracy_scope)
    except SingleClassPanel:
        skew = None
    try:
        eo = equalized_odds_score(panel)
    except SingleClassPanel:
        eo = None
    return AuditReport(
        metric_reports=reports,
        mfarm=mfarm,
        accuracy=acc,
        accuracy_scope=config.accuracy_scope,
        fab=fab,
        accuracy_skew=skew,
        sp_score=statistical_parity_score(panel),
        eo_score=eo,
        config_echo=config,
        panel_digest=panel_digest(panel),
    )
