"""Tail probabilities for the reference distributions used by the tests.

Regularized incomplete gamma and beta functions are evaluated with the
classic power-series / modified-Lentz continued-fraction pair; everything
else is expressed through them or through ``math.erfc``.
"""

import math

from ..errors import InvalidDf

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def _log_gamma_prefix(a, x):
    # log(x^a e^-x / Gamma(a))
    return a * math.log(x) - x - math.lgamma(a)


def _gamma_series(a, x):
    """Lower regularized incomplete gamma P(a, x) by power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(_log_gamma_prefix(a, x))


def _gamma_cf(a, x):
    """Upper regularized incomplete gamma Q(a, x) by continued fraction (x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(_log_gamma_prefix(a, x)) * h


def gammaincc(a, x):
    """Upper regularized incomplete gamma function Q(a, x)."""
    if a <= 0:
        raise InvalidDf(f"shape parameter must be positive, got {a}")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cf(a, x))


def _beta_cf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise InvalidDf(f"beta parameters must be positive, got a={a}, b={b}")
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cf(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_cf(b, a, 1.0 - x) / b)


def chi2_sf(x, k):
    """Survival function of the chi-square distribution with ``k`` degrees of freedom."""
    if not k >= 1:
        raise InvalidDf(f"chi-square needs k >= 1, got {k}")
    if x <= 0:
        return 1.0
    return gammaincc(k / 2.0, x / 2.0)


def normal_cdf(z):
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_sf(z):
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def t_sf(t, df):
    """Upper tail P(T > t) of Student's t with ``df`` degrees of freedom."""
    if not df > 0:
        raise InvalidDf(f"t distribution needs df > 0, got {df}")
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + t * t))
    return tail if t >= 0 else 1.0 - tail


def f_sf(f, d1, d2):
    """Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom."""
    if not (d1 > 0 and d2 > 0):
        raise InvalidDf(f"F distribution needs positive df, got ({d1}, {d2})")
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))


def kolmogorov_sf(lam):
    """Asymptotic Kolmogorov survival function Q(lam) = 2 sum (-1)^(j-1) exp(-2 j^2 lam^2).

    For small ``lam`` the alternating series cancels badly, so the equivalent
    Jacobi-theta form 1 - sqrt(2 pi)/lam * sum exp(-(2j-1)^2 pi^2 / (8 lam^2))
    is used there instead.
    """
    if lam <= 0.1:
        # the theta-form correction is below 1e-50 here
        return 1.0
    if lam < 1.18:
        k = math.pi * math.pi / (8.0 * lam * lam)
        total = 0.0
        j = 1
        while True:
            term = math.exp(-(2 * j - 1) ** 2 * k)
            total += term
            if term < 1e-17:
                break
            j += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * total))
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * lam * lam)
        total += sign * term
        if term < 1e-18:
            break
        sign = -sign
        j += 1
    return min(1.0, max(0.0, 2.0 * total))
