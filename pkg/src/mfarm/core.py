"""Domain types: group structure, the prediction panel, audit configuration,
and the per-group derived vectors (peer averages, absolute deviations)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AuditError,
    BaseGroupNotAllowed,
    ConfigError,
    DuplicateCell,
    IncompleteGrid,
    InvalidGroupSet,
    ProbOutOfRange,
    TooFewGroups,
    UnknownGroup,
)

LEVENE_CENTERINGS = ("mean", "median")
ZERO_POLICIES = ("drop-zeros", "pratt")
ACCURACY_SCOPES = ("all-variants", "base-only")


class InconsistentLabel(AuditError):
    """Two rows of the same case disagree on the true label."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GroupSet:
    """Ordered group identifiers with exactly one BASE group.

    Two groups (BASE plus one) are accepted so that two-group toy panels can
    be audited; anything that needs peers raises ``TooFewGroups`` below K=3.
    """

    groups: tuple[str, ...]
    base_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if len(self.groups) < 2:
            raise InvalidGroupSet(f"need BASE plus at least one group, got {len(self.groups)}")
        for g in self.groups:
            if not isinstance(g, str) or not g:
                raise InvalidGroupSet(f"group identifiers must be non-empty strings, got {g!r}")
        if len(set(self.groups)) != len(self.groups):
            raise InvalidGroupSet(f"duplicate group identifiers in {self.groups}")
        if not 0 <= self.base_index < len(self.groups):
            raise InvalidGroupSet(f"base_index {self.base_index} out of range")

    @classmethod
    def with_base(cls, groups: Sequence[str], base: str = "BASE") -> GroupSet:
        groups = tuple(groups)
        if base not in groups:
            raise UnknownGroup(f"base group {base!r} not found; available: {', '.join(groups)}")
        return cls(groups, groups.index(base))

    @property
    def base(self) -> str:
        return self.groups[self.base_index]

    @property
    def non_base(self) -> tuple[str, ...]:
        return tuple(g for i, g in enumerate(self.groups) if i != self.base_index)

    @property
    def k(self) -> int:
        return len(self.groups)

    def index(self, group: str) -> int:
        try:
            return self.groups.index(group)
        except ValueError:
            raise UnknownGroup(
                f"unknown group {group!r}; available: {', '.join(self.groups)}"
            ) from None


@dataclass(frozen=True)
class AuditConfig:
    alpha: float = 0.05
    threshold: float = 0.5
    levene_centering: str = "mean"
    wilcoxon_zero_policy: str = "drop-zeros"
    min_exact_n: int = 25
    accuracy_scope: str = "all-variants"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.threshold < 1:
            raise ConfigError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.levene_centering not in LEVENE_CENTERINGS:
            raise ConfigError(f"levene_centering must be one of {LEVENE_CENTERINGS}")
        if self.wilcoxon_zero_policy not in ZERO_POLICIES:
            raise ConfigError(f"wilcoxon_zero_policy must be one of {ZERO_POLICIES}")
        if self.min_exact_n < 0:
            raise ConfigError("min_exact_n must be non-negative")
        if self.accuracy_scope not in ACCURACY_SCOPES:
            raise ConfigError(f"accuracy_scope must be one of {ACCURACY_SCOPES}")


@dataclass(frozen=True, eq=False)
class PredictionPanel:
    """N cases x K groups of yes-probabilities with true and predicted labels.

    ``probs[i, j]`` is the probability of "yes" for case ``i`` under group
    ``group_set.groups[j]``. Labels are booleans (True = yes).
    """

    group_set: GroupSet
    case_ids: tuple[str, ...]
    probs: np.ndarray
    true_labels: np.ndarray
    pred_labels: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        n = len(self.case_ids)
        k = self.group_set.k
        if n < 1:
            raise IncompleteGrid("panel has no cases")
        if len(set(self.case_ids)) != n:
            raise DuplicateCell("case_ids are not unique")
        if probs.shape != (n, k):
            raise IncompleteGrid(f"probs has shape {probs.shape}, expected {(n, k)}")
        if not np.all(np.isfinite(probs)) or probs.min() < 0 or probs.max() > 1:
            bad = np.argwhere(~((probs >= 0) & (probs <= 1)))[0]
            raise ProbOutOfRange(
                f"probability {probs[tuple(bad)]!r} for case {self.case_ids[bad[0]]!r}, "
                f"group {self.group_set.groups[bad[1]]!r} is outside [0, 1]"
            )
        true_labels = np.asarray(self.true_labels, dtype=bool)
        pred_labels = np.asarray(self.pred_labels, dtype=bool)
        if true_labels.shape != (n,):
            raise IncompleteGrid(f"true_labels has shape {true_labels.shape}, expected {(n,)}")
        if pred_labels.shape != (n, k):
            raise IncompleteGrid(f"pred_labels has shape {pred_labels.shape}, expected {(n, k)}")
        object.__setattr__(self, "case_ids", tuple(self.case_ids))
        object.__setattr__(self, "probs", _frozen(probs))
        object.__setattr__(self, "true_labels", _frozen(true_labels))
        object.__setattr__(self, "pred_labels", _frozen(pred_labels))

    @classmethod
    def from_arrays(
        cls,
        group_set: GroupSet,
        probs,
        true_labels,
        pred_labels=None,
        case_ids: Sequence[str] | None = None,
        threshold: float = 0.5,
    ) -> PredictionPanel:
        probs = np.asarray(probs, dtype=float)
        if case_ids is None:
            case_ids = [f"case{i + 1}" for i in range(probs.shape[0])]
        if pred_labels is None:
            pred_labels = probs >= threshold
        return cls(group_set, tuple(case_ids), probs, true_labels, pred_labels)

    @property
    def n(self) -> int:
        return len(self.case_ids)

    @property
    def k(self) -> int:
        return self.group_set.k

    @property
    def base(self) -> np.ndarray:
        return self.probs[:, self.group_set.base_index]

    def column(self, group: str) -> np.ndarray:
        return self.probs[:, self.group_set.index(group)]


def _parse_label(value, what: str) -> bool:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)) and value in (0, 1):
        return bool(value)
    text = str(value).strip().lower()
    if text in ("yes", "y", "1", "true"):
        return True
    if text in ("no", "n", "0", "false"):
        return False
    raise AuditError(f"cannot interpret {what} {value!r} as yes/no")


def build_panel(
    raw_rows: Iterable[Sequence], group_set: GroupSet, config: AuditConfig | None = None
) -> PredictionPanel:
    """Assemble a complete panel from long-format rows.

    Each row is ``(case_id, group, prob, true_label[, pred_label])``. Missing
    predicted labels are derived as ``prob >= config.threshold``.
    """
    config = config or AuditConfig()
    k = group_set.k
    case_index: dict[str, int] = {}
    cells: dict[tuple[int, int], tuple[float, bool | None]] = {}
    truth: dict[int, bool] = {}

    for row in raw_rows:
        if len(row) not in (4, 5):
            raise AuditError(f"row {row!r} must have 4 or 5 fields")
        case_id, group, prob = str(row[0]), row[1], row[2]
        j = group_set.index(group)
        try:
            p = float(prob)
        except (TypeError, ValueError):
            raise ProbOutOfRange(f"probability {prob!r} for case {case_id!r} is not a number") from None
        if not math.isfinite(p) or not 0.0 <= p <= 1.0:
            raise ProbOutOfRange(
                f"probability {prob!r} for case {case_id!r}, group {group!r} is outside [0, 1]"
            )
        i = case_index.setdefault(case_id, len(case_index))
        if (i, j) in cells:
            raise DuplicateCell(f"duplicate row for case {case_id!r}, group {group!r}")
        y = _parse_label(row[3], "true_label")
        if truth.setdefault(i, y) != y:
            raise InconsistentLabel(f"case {case_id!r} has conflicting true labels")
        pred = None
        if len(row) == 5 and row[4] is not None and str(row[4]).strip() != "":
            pred = _parse_label(row[4], "pred_label")
        cells[(i, j)] = (p, pred)

    n = len(case_index)
    if n == 0:
        raise IncompleteGrid("no rows supplied")
    case_ids = list(case_index)
    if len(cells) != n * k:
        for cid, i in case_index.items():
            missing = [g for j, g in enumerate(group_set.groups) if (i, j) not in cells]
            if missing:
                raise IncompleteGrid(f"case {cid!r} lacks group variant(s): {', '.join(missing)}")

    probs = np.empty((n, k))
    pred = np.empty((n, k), dtype=bool)
    for (i, j), (p, lab) in cells.items():
        probs[i, j] = p
        pred[i, j] = (p >= config.threshold) if lab is None else lab
    true = np.array([truth[i] for i in range(n)], dtype=bool)
    return PredictionPanel(group_set, tuple(case_ids), probs, true, pred)


TIE_TOL = 1e-12


def snap_ties(values, tol: float = TIE_TOL) -> np.ndarray:
    """Collapse values that differ by at most ``tol`` into exact ties.

    Values are sorted and chained into clusters wherever neighbours are
    within ``tol``; every member takes the cluster minimum, or 0.0 if the
    cluster reaches within ``tol`` of zero. Rank-based tests on derived
    differences then ignore floating-point residue: ``(b + c) - b`` is not
    constant in floating point, and its noise correlates with ``b``.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return v.copy()
    flat = v.ravel()
    order = np.argsort(flat, kind="stable")
    s = flat[order]
    starts = np.empty(s.size, dtype=bool)
    starts[0] = True
    starts[1:] = np.diff(s) > tol
    ids = np.cumsum(starts) - 1
    rep = s[starts]
    ends = np.append(np.flatnonzero(starts)[1:], s.size) - 1
    rep[(rep <= tol) & (s[ends] >= -tol)] = 0.0
    out = np.empty_like(flat)
    out[order] = rep[ids]
    return out.reshape(v.shape)


def _require_peer_group(panel: PredictionPanel, g: str) -> int:
    j = panel.group_set.index(g)
    if j == panel.group_set.base_index:
        raise BaseGroupNotAllowed(f"{g!r} is the BASE group")
    if panel.k < 3:
        raise TooFewGroups("peer quantities need at least two non-BASE groups (K >= 3)")
    return j


def _peer_mean(columns: np.ndarray, exclude: int) -> np.ndarray:
    """Row-wise mean of ``columns`` without column ``exclude``.

    Each row is summed in sorted order relative to its minimum so the result
    does not depend on column order and is exact when all peers agree.
    """
    peers = np.delete(columns, exclude, axis=1)
    lo = peers.min(axis=1)
    rel = np.sort(peers - lo[:, None], axis=1)
    return lo + rel.sum(axis=1) / peers.shape[1]


def _non_base_matrix(panel: PredictionPanel) -> np.ndarray:
    return np.delete(panel.probs, panel.group_set.base_index, axis=1)


def peer_average(panel: PredictionPanel, g: str) -> np.ndarray:
    """Leave-one-out mean of the non-BASE groups other than ``g``, per case."""
    j = _require_peer_group(panel, g)
    nb_pos = panel.group_set.non_base.index(panel.group_set.groups[j])
    return np.clip(_peer_mean(_non_base_matrix(panel), nb_pos), 0.0, 1.0)


def abs_deviation(panel: PredictionPanel, g: str) -> np.ndarray:
    """|P(g) - P(BASE)| per case, tie-snapped jointly over all groups."""
    j = panel.group_set.index(g)
    if j == panel.group_set.base_index:
        raise BaseGroupNotAllowed(f"{g!r} is the BASE group")
    return _abs_dev_matrix(panel)[:, panel.group_set.non_base.index(g)]


def _abs_dev_matrix(panel: PredictionPanel) -> np.ndarray:
    # snapped as one matrix so row-wise and column-wise ties agree
    return snap_ties(np.abs(_non_base_matrix(panel) - panel.base[:, None]))


def peer_abs_deviation(panel: PredictionPanel, g: str) -> np.ndarray:
    """Mean absolute deviation from BASE over the peers of ``g``, per case."""
    j = _require_peer_group(panel, g)
    nb_pos = panel.group_set.non_base.index(panel.group_set.groups[j])
    return _peer_mean(_abs_dev_matrix(panel), nb_pos)


@dataclass(frozen=True)
class DerivedVectors:
    peer_avg: Mapping[str, np.ndarray] = field(default_factory=dict)
    abs_dev: Mapping[str, np.ndarray] = field(default_factory=dict)
    peer_abs_dev: Mapping[str, np.ndarray] = field(default_factory=dict)


def derive_vectors(panel: PredictionPanel) -> DerivedVectors:
    """All per-group derived vectors; peer entries are empty when K < 3."""
    nb = panel.group_set.non_base
    abs_dev = {g: _frozen(abs_deviation(panel, g)) for g in nb}
    if panel.k < 3:
        return DerivedVectors({}, abs_dev, {})
    peer_avg = {g: _frozen(peer_average(panel, g)) for g in nb}
    peer_abs = {g: _frozen(peer_abs_deviation(panel, g)) for g in nb}
    return DerivedVectors(peer_avg, abs_dev, peer_abs)
