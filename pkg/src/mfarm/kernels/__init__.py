from .distributions import (
    betainc,
    chi2_sf,
    f_sf,
    gammaincc,
    kolmogorov_sf,
    normal_cdf,
    normal_sf,
    t_sf,
)
from .effects import bonferroni, cliffs_delta_paired, variance_ratio_effect
from .hypothesis import (
    friedman_test,
    kendalls_w,
    ks_two_sample,
    levene_test,
    rankdata,
    spearman_test,
    wilcoxon_signed_rank,
)
from .outcomes import EffectSize, TestOutcome

__all__ = [
    "EffectSize",
    "TestOutcome",
    "betainc",
    "bonferroni",
    "chi2_sf",
    "cliffs_delta_paired",
    "f_sf",
    "friedman_test",
    "gammaincc",
    "kendalls_w",
    "kolmogorov_sf",
    "ks_two_sample",
    "levene_test",
    "normal_cdf",
    "normal_sf",
    "rankdata",
    "spearman_test",
    "t_sf",
    "variance_ratio_effect",
    "wilcoxon_signed_rank",
]
