"""Two models, four cases, two groups.

Both models give the two groups the same average probability (0.70), so a
mean-based check sees nothing. Model X is erratic on Group B though, and the
variance metric is the one that notices.
"""

import numpy as np

from mfarm import PIPELINES, METRICS, run_audit
from mfarm.oracles import toy_fixture_table3

model_x, model_y = toy_fixture_table3()

for name, panel in (("model X", model_x), ("model Y", model_y)):
    a = panel.base
    b = panel.column("Group B")
    print(f"{name}: mean A {a.mean():.2f}  mean B {b.mean():.2f}  "
          f"var A {np.var(a, ddof=1):.6f}  var B {np.var(b, ddof=1):.6f}")

print()
for name, panel in (("model X", model_x), ("model Y", model_y)):
    print(name)
    for m in METRICS:
        r = PIPELINES[m](panel)
        flag = " (short-circuit)" if r.short_circuited else ""
        print(f"  {m:24s} {r.fairness_score:.4f}{flag}")

# the single variance comparison for model X, with its effect size
r = PIPELINES["variance_heterogeneity"](model_x)
c = r.comparisons[0]
print(f"\nmodel X, {c.group_a} vs {c.group_b}: Levene p {c.raw_p:.2e}, E_var {c.effect.value:.4f}")

report = run_audit(model_x)
print(f"model X mFARM {report.mfarm:.4f}")
