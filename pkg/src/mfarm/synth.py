"""Synthetic prediction panels with controlled, injectable harms.

The BASE column is drawn uniformly on [0.05, 0.95]. Every other group is
derived from it case by case::

    raw = c + sqrt(v) * (base - c) + shift + noise * e + coupling * s * A * (base - 0.05) / 0.9
    col = clip(raw, 0, 1)

with ``c = 0.5`` (centre of the BASE support), ``e ~ U(-1, 1)``, ``s`` a
random sign and ``A = 0.05``. Each term injects one kind of harm: ``shift``
an allocational shift, ``v`` (variance multiplier) a change in spread, and
``coupling`` a deviation whose size tracks the BASE probability while its
direction is random. Clipped cells are counted per group.

The random stream is numpy's PCG64 seeded with ``seed``; draws happen in a
fixed order (BASE, labels, then per group: noise, signs), and every group
consumes its draws even when the corresponding term is zero, so changing
one group's parameters never perturbs another group's column.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import GroupSet, PredictionPanel
from .errors import SpecOutOfRange

BASE_LOW, BASE_HIGH = 0.05, 0.95
SPREAD_CENTER = 0.5
COUPLING_AMPLITUDE = 0.05


@dataclass(frozen=True)
class GroupSpec:
    name: str
    shift: float = 0.0
    noise_scale: float = 0.0
    variance_multiplier: float = 1.0
    coupling: float = 0.0


@dataclass(frozen=True)
class SynthSpec:
    n_cases: int
    groups: tuple[GroupSpec, ...]
    base_group: str = "BASE"
    label_balance: float = 0.5
    seed: int = 0
    threshold: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if self.n_cases < 1:
            raise SpecOutOfRange(f"n_cases must be positive, got {self.n_cases}")
        if not self.groups:
            raise SpecOutOfRange("at least one non-BASE group is required")
        names = [g.name for g in self.groups]
        if self.base_group in names or len(set(names)) != len(names):
            raise SpecOutOfRange("group names must be unique and differ from the BASE name")
        if not 0.0 <= self.label_balance <= 1.0:
            raise SpecOutOfRange(f"label_balance must lie in [0, 1], got {self.label_balance}")
        for g in self.groups:
            vals = (g.shift, g.noise_scale, g.variance_multiplier, g.coupling)
            if not all(math.isfinite(v) for v in vals):
                raise SpecOutOfRange(f"group {g.name!r} has non-finite parameters")
            if g.noise_scale < 0:
                raise SpecOutOfRange(f"group {g.name!r}: noise_scale must be >= 0")
            if g.variance_multiplier <= 0:
                raise SpecOutOfRange(f"group {g.name!r}: variance_multiplier must be > 0")

    @classmethod
    def from_dict(cls, d: dict) -> SynthSpec:
        d = dict(d)
        try:
            groups = tuple(GroupSpec(**g) for g in d.pop("groups"))
            return cls(groups=groups, **d)
        except (KeyError, TypeError) as exc:
            raise SpecOutOfRange(f"malformed synth spec: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> SynthSpec:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SynthResult:
    panel: PredictionPanel
    clips: dict[str, int] = field(default_factory=dict)

    @property
    def total_clips(self) -> int:
        return sum(self.clips.values())


def generate(spec: SynthSpec) -> SynthResult:
    """Draw a panel realizing ``spec`` and count clipped cells per group."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_cases
    base = rng.uniform(BASE_LOW, BASE_HIGH, n)
    truth = rng.random(n) < spec.label_balance

    cols = [base]
    clips = {}
    for g in spec.groups:
        noise = rng.uniform(-1.0, 1.0, n)
        signs = rng.integers(0, 2, n) * 2 - 1
        if g.variance_multiplier == 1.0:
            raw = base.copy()
        else:
            raw = SPREAD_CENTER + math.sqrt(g.variance_multiplier) * (base - SPREAD_CENTER)
        raw = raw + g.shift
        if g.noise_scale:
            raw = raw + g.noise_scale * noise
        if g.coupling:
            raw = raw + g.coupling * signs * COUPLING_AMPLITUDE * (base - BASE_LOW) / (BASE_HIGH - BASE_LOW)
        clips[g.name] = int(np.count_nonzero((raw < 0) | (raw > 1)))
        cols.append(np.clip(raw, 0.0, 1.0))

    group_set = GroupSet((spec.base_group, *(g.name for g in spec.groups)), 0)
    probs = np.column_stack(cols)
    panel = PredictionPanel.from_arrays(group_set, probs, truth, threshold=spec.threshold)
    return SynthResult(panel, clips)


def generate_panel(spec: SynthSpec) -> PredictionPanel:
    return generate(spec).panel


def group_names(k: int) -> list[str]:
    """Names for the K-1 non-BASE groups of a K-group panel."""
    return [f"G{j:02d}" for j in range(1, k)]


def harm_spec(n_cases: int = 200, k: int = 13, seed: int = 0, **harm) -> SynthSpec:
    """K-group spec where only the first non-BASE group carries ``harm``.

    ``harm`` takes :class:`GroupSpec` fields, e.g. ``shift=0.3`` or
    ``variance_multiplier=10``.
    """
    names = group_names(k)
    groups = [GroupSpec(names[0], **harm)] + [GroupSpec(name) for name in names[1:]]
    return SynthSpec(n_cases=n_cases, groups=tuple(groups), seed=seed)
