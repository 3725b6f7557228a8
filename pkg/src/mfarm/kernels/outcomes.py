from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TestOutcome:
    """Result of one hypothesis test.

    ``df`` holds degrees of freedom for chi-square/t/F references and sample
    sizes for the rank and ECDF tests. ``method`` names the p-value route
    (e.g. ``"exact"`` or ``"normal"`` for the signed-rank test).
    """

    __test__ = False  # keep pytest from collecting this as a test class

    statistic: float
    p_value: float
    df: tuple = ()
    degenerate: bool = False
    method: str = ""

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        object.__setattr__(self, "df", tuple(self.df))


EFFECT_KINDS = ("cliffs_delta", "variance_ratio", "ks_distance", "spearman_abs")


@dataclass(frozen=True)
class EffectSize:
    kind: str
    value: float

    @property
    def magnitude(self) -> float:
        return min(1.0, abs(self.value))
