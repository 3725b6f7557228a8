import math

import mpmath
import pytest

from mfarm.errors import InvalidDf
from mfarm.kernels import betainc, chi2_sf, f_sf, gammaincc, kolmogorov_sf, normal_cdf, t_sf

mpmath.mp.dps = 40


def mp_chi2_sf(x, k):
    return float(mpmath.gammainc(mpmath.mpf(k) / 2, mpmath.mpf(x) / 2, mpmath.inf, regularized=True))


def mp_t_sf(t, df):
    x = mpmath.mpf(df) / (df + mpmath.mpf(t) ** 2)
    tail = mpmath.betainc(mpmath.mpf(df) / 2, mpmath.mpf(1) / 2, 0, x, regularized=True) / 2
    return float(tail if t >= 0 else 1 - tail)


def mp_f_sf(f, d1, d2):
    x = mpmath.mpf(d2) / (d2 + d1 * mpmath.mpf(f))
    return float(mpmath.betainc(mpmath.mpf(d2) / 2, mpmath.mpf(d1) / 2, 0, x, regularized=True))


def mp_normal_cdf(z):
    return float(mpmath.ncdf(z))


def mp_kolmogorov_sf(lam):
    lam = mpmath.mpf(lam)
    return float(2 * mpmath.nsum(lambda j: (-1) ** (j - 1) * mpmath.exp(-2 * j * j * lam * lam), [1, mpmath.inf]))


def test_chi2_closed_forms():
    assert chi2_sf(0.0, 5) == 1.0
    assert chi2_sf(2 * math.log(2), 2) == pytest.approx(0.5, abs=1e-15)
    # exponential with mean 2
    for x in (0.1, 1.0, 7.5, 40.0):
        assert chi2_sf(x, 2) == pytest.approx(math.exp(-x / 2), rel=1e-13)


def test_chi2_twelve_df_critical_value():
    assert chi2_sf(21.0261, 12) == pytest.approx(0.05, abs=1e-3)


def test_symmetry_points():
    assert normal_cdf(0) == 0.5
    assert t_sf(0, 7) == pytest.approx(0.5, abs=1e-15)
    assert f_sf(1, 10, 10) == pytest.approx(0.5, abs=1e-14)


def test_kolmogorov_points():
    assert kolmogorov_sf(0) == 1.0
    assert kolmogorov_sf(4.0) < 1e-12
    assert kolmogorov_sf(1.3581) == pytest.approx(0.05, abs=5e-4)


@pytest.mark.parametrize("lam", [0.05, 0.3, 0.7, 1.0, 1.17, 1.19, 1.5, 2.5])
def test_kolmogorov_matches_series(lam):
    assert kolmogorov_sf(lam) == pytest.approx(mp_kolmogorov_sf(lam), abs=1e-13)


def test_kolmogorov_monotone():
    grid = [i / 50 for i in range(0, 250)]
    vals = [kolmogorov_sf(v) for v in grid]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("x,k", [(0.5, 1), (3.0, 2), (11.07, 5), (1e-3, 12), (60.0, 12), (300.0, 10), (25.0, 30)])
def test_chi2_vs_mpmath(x, k):
    assert chi2_sf(x, k) == pytest.approx(mp_chi2_sf(x, k), rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("t,df", [(0.5, 1), (-1.2, 3), (2.2, 10), (4.0, 28), (0.01, 1018), (6.0, 998)])
def test_t_vs_mpmath(t, df):
    assert t_sf(t, df) == pytest.approx(mp_t_sf(t, df), rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("f,d1,d2", [(0.2, 1, 6), (3.5, 2, 27), (7.77, 2, 28), (1.01, 12, 13247), (40.0, 1, 398)])
def test_f_vs_mpmath(f, d1, d2):
    assert f_sf(f, d1, d2) == pytest.approx(mp_f_sf(f, d1, d2), rel=1e-10, abs=1e-300)


def test_incomplete_functions_limits():
    assert gammaincc(2.0, 0.0) == 1.0
    assert gammaincc(2.0, math.inf) == 0.0
    assert betainc(2.0, 3.0, 0.0) == 0.0
    assert betainc(2.0, 3.0, 1.0) == 1.0
    # I_x(1, 1) = x
    assert betainc(1.0, 1.0, 0.3) == pytest.approx(0.3, rel=1e-14)


def test_invalid_df():
    with pytest.raises(InvalidDf):
        chi2_sf(1.0, 0)
    with pytest.raises(InvalidDf):
        t_sf(1.0, -1)
    with pytest.raises(InvalidDf):
        f_sf(1.0, 0, 3)
