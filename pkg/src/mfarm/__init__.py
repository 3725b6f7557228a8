"""Multi-metric fairness auditing of model probabilities across demographic
variants of identical cases (mFARM sub-metrics, composite and FAB score)."""

__version__ = "0.1.0"

from .aggregate import (  # noqa: E402
    AuditReport,
    accuracy,
    accuracy_skew,
    equalized_odds_score,
    fab_score,
    mfarm_score,
    run_audit,
    statistical_parity_score,
)
from .core import (  # noqa: E402
    AuditConfig,
    DerivedVectors,
    GroupSet,
    PredictionPanel,
    abs_deviation,
    build_panel,
    derive_vectors,
    peer_abs_deviation,
    peer_average,
    snap_ties,
)
from .metrics import (  # noqa: E402
    METRICS,
    PIPELINES,
    ComparisonRecord,
    MetricReport,
    absolute_deviation_fairness,
    correlation_difference_fairness,
    ks_distributional_fairness,
    mean_difference_fairness,
    unfairness,
    variance_heterogeneity_fairness,
)

__all__ = [
    "AuditConfig",
    "AuditReport",
    "ComparisonRecord",
    "DerivedVectors",
    "GroupSet",
    "METRICS",
    "MetricReport",
    "PIPELINES",
    "PredictionPanel",
    "abs_deviation",
    "absolute_deviation_fairness",
    "accuracy",
    "accuracy_skew",
    "build_panel",
    "correlation_difference_fairness",
    "derive_vectors",
    "equalized_odds_score",
    "fab_score",
    "ks_distributional_fairness",
    "mean_difference_fairness",
    "mfarm_score",
    "peer_abs_deviation",
    "peer_average",
    "run_audit",
    "snap_ties",
    "statistical_parity_score",
    "unfairness",
    "variance_heterogeneity_fairness",
]
