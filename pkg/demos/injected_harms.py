"""Inject one harm at a time into a synthetic 13-group panel and watch
which of the five detectors reacts.

Each row is a harm applied to the first non-BASE group only; the columns
are the five fairness scores averaged over a few seeds.
"""

import numpy as np

from mfarm import METRICS, PIPELINES
from mfarm.synth import generate, harm_spec

harms = {
    "none": {},
    "shift +0.3": {"shift": 0.3},
    "variance x10": {"variance_multiplier": 10.0},
    "coupling 1.0": {"coupling": 1.0},
    "noise 0.1": {"noise_scale": 0.1},
}
short = ["mean", "abs", "ks", "var", "corr"]
seeds = range(10)

print(f"{'harm':14s}" + "".join(f"{s:>8s}" for s in short) + "   clips")
for label, harm in harms.items():
    scores = np.zeros((len(seeds), len(METRICS)))
    clips = 0
    for i, seed in enumerate(seeds):
        res = generate(harm_spec(n_cases=200, k=13, seed=seed, **harm))
        clips += res.total_clips
        scores[i] = [PIPELINES[m](res.panel).fairness_score for m in METRICS]
    print(f"{label:14s}" + "".join(f"{v:8.3f}" for v in scores.mean(axis=0)) + f"   {clips // len(seeds):5d}")

# A shift of one group also shows up in the peer comparisons of every other
# group: their peer average now contains the shifted column, so they sit
# below it. That is why the mean score drops to 11/24 and not 1 - 1/12.
