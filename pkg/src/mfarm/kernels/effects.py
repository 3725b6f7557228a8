"""Effect sizes and the Bonferroni family-wise correction."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyFamily, ShapeMismatch
from .outcomes import EffectSize


def cliffs_delta_paired(x, y) -> EffectSize:
    """Per-case dominance: (#{x_i > y_i} - #{x_i < y_i}) / N.

    This is the paired form, not the all-pairs Cliff's delta.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ShapeMismatch(f"paired samples must be non-empty equal-length vectors, got {x.shape}, {y.shape}")
    above = int(np.count_nonzero(x > y))
    below = int(np.count_nonzero(x < y))
    return EffectSize("cliffs_delta", (above - below) / x.size)


def variance_ratio_effect(var_g: float, var_h: float) -> EffectSize:
    """Normalized variance ratio |R - 1| / (R + 1) with R = var_g / var_h.

    Evaluated as |var_g - var_h| / (var_g + var_h), which is the same quantity
    but exactly symmetric and defined when one variance is zero (-> 1).
    Two zero variances give 0.
    """
    if var_g < 0 or var_h < 0:
        raise ValueError(f"variances must be non-negative, got {var_g}, {var_h}")
    total = var_g + var_h
    if total == 0:
        return EffectSize("variance_ratio", 0.0)
    return EffectSize("variance_ratio", abs(var_g - var_h) / total)


def bonferroni(raw_ps, alpha: float = 0.05) -> list[tuple[float, bool]]:
    """Adjusted p-values min(1, m p) and significance flags at ``alpha``."""
    raw_ps = list(raw_ps)
    m = len(raw_ps)
    if m == 0:
        raise EmptyFamily("Bonferroni correction needs at least one p-value")
    out = []
    for p in raw_ps:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p-value {p} outside [0, 1]")
        adj = min(1.0, m * p)
        out.append((adj, adj <= alpha))
    return out
