"""Closed-form approximations of ``g(k)`` and the Rayleigh reference law.

With ``alpha = k/n`` the ladder is

* ``RAYLEIGH``: ``exp(-k^2 sigma2 / (2n))``
* ``PRODUCT``:  ``(1-alpha)^(n-k) * prod_j (alpha d_j + 1)``
* ``REFINED``:  ``PRODUCT * e^(k-lam) * (lam/k)^k`` with
  ``lam = sum_j alpha d_j / (alpha d_j + 1)``

Products are formed as sums of ``log1p`` terms grouped by distinct degree value,
so the cost depends on the number of distinct degrees, not on ``n``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .degrees import DegreeSequence, stats
from .errors import DegenerateRegimeWarning, DomainError
from .exact import g_table, survival


class ApproxLevel(enum.Enum):
    RAYLEIGH = "rayleigh"
    REFINED = "refined"
    PRODUCT = "product"


@dataclass(frozen=True)
class Lambda:
    value: float
    second_order: float  # k - k^2 m2 / n^2
    k: int


def lambda_of(ds: DegreeSequence, k: int) -> Lambda:
    """Mean of the Bernoulli sum with success probabilities ``alpha d_j/(alpha d_j + 1)``."""
    n = ds.n
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    alpha = k / n
    lam = math.fsum(m * (alpha * c / (alpha * c + 1)) for c, m in ds.value_counts.items())
    m2 = stats(ds).m2
    return Lambda(lam, k - k * k * m2 / (n * n), k)


def _log_product(ds: DegreeSequence, k: int) -> float:
    n = ds.n
    alpha = k / n
    terms = [m * math.log1p(alpha * c) for c, m in ds.value_counts.items() if c]
    terms.append((n - k) * math.log1p(-alpha))
    return math.fsum(terms)


def _warn_flat(ds: DegreeSequence) -> bool:
    if stats(ds).sigma2 == 0:
        warnings.warn("sigma2 == 0: permutation regime, the Rayleigh scaling degenerates",
                      DegenerateRegimeWarning, stacklevel=3)
        return True
    return False


def g_approx(ds: DegreeSequence, k: int, level: ApproxLevel | str = ApproxLevel.RAYLEIGH) -> float:
    """Approximate ``g(k)`` at one of the ladder levels, ``1 <= k < n``."""
    level = ApproxLevel(level)
    n = ds.n
    if not 1 <= k < n:
        raise DomainError("need 1 <= k < n")
    _warn_flat(ds)
    if level is ApproxLevel.RAYLEIGH:
        s2 = stats(ds).sigma2_float
        return math.exp(-k * k * s2 / (2 * n))
    logp = _log_product(ds, k)
    if level is ApproxLevel.PRODUCT:
        return math.exp(logp)
    lam = lambda_of(ds, k).value
    # k - lam + k log(lam/k), with log(lam/k) = log1p((lam-k)/k)
    corr = (k - lam) + k * math.log1p((lam - k) / k)
    return math.exp(logp + corr)


def correction_ratio(ds: DegreeSequence, k: int) -> float:
    """Diagnostic ``k / (n^2/m2)^(2/3)``; the refined form is justified for small values."""
    st = stats(ds)
    return k / (ds.n**2 / st.m2) ** (2 / 3)


# ---------------------------------------------------------------------------
# Rayleigh reference

def rayleigh_cdf(x):
    x = np.asarray(x, dtype=float)
    if (x < 0).any():
        raise DomainError("Rayleigh cdf needs x >= 0")
    out = -np.expm1(-x * x / 2)
    return float(out) if out.ndim == 0 else out


def rayleigh_sf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-np.maximum(x, 0) ** 2 / 2)
    return float(out) if out.ndim == 0 else out


def rayleigh_quantile(p: float) -> float:
    if not 0 < p < 1:
        raise DomainError("quantile needs 0 < p < 1")
    return math.sqrt(-2 * math.log1p(-p))


def rayleigh_moment(order: float) -> float:
    """``E[X^p] = 2^(p/2) Gamma(1 + p/2)``."""
    if order < 1:
        raise DomainError("moment order must be >= 1")
    return 2 ** (order / 2) * math.gamma(1 + order / 2)


def predicted_mean(n: int, sigma2: float) -> float:
    return math.sqrt(math.pi * n / (2 * sigma2))


def predicted_variance(n: int, sigma2: float) -> float:
    return (4 - math.pi) * n / (2 * sigma2)


def predicted_tail_mean(n: int, sigma2: float) -> float:
    """Limit mean of both the tail-length and the cycle-length."""
    return math.sqrt(math.pi * n / (8 * sigma2))


# ---------------------------------------------------------------------------
# m3 diagnostics

@dataclass(frozen=True)
class M3Check:
    ratio: float          # m3 / (n sigma2)^(3/2)
    m3: int
    bound: int            # (Delta + 2) n sigma2 + n
    holds: bool


def m3_bound_check(ds: DegreeSequence) -> M3Check:
    """Check ``m3 <= (Delta + 2) n sigma2 + n`` exactly and report the ratio."""
    st = stats(ds)
    ex = st.excess
    bound = (st.delta + 2) * ex + st.n
    ratio = st.m3 / ex**1.5 if ex > 0 else math.inf
    return M3Check(ratio=ratio, m3=st.m3, bound=bound, holds=st.m3 <= bound)


# ---------------------------------------------------------------------------
# comparison tables

def ladder_table(ds: DegreeSequence, ks: Iterable[int] | None = None,
                 backend: str = "float") -> list[dict]:
    """Rows ``k, exact, rayleigh, refined, product, rel_err_*`` comparing against exact ``g``."""
    n = ds.n
    if ks is None:
        s2 = stats(ds).sigma2_float
        top = n - 1 if s2 == 0 else min(n - 1, math.ceil(4 * math.sqrt(n / s2)))
        ks = range(1, top + 1)
    ks = list(ks)
    g = g_table(ds, max(ks), backend)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateRegimeWarning)
        for k in ks:
            exact = float(g[k])
            row = {"k": k, "exact": exact}
            for lvl in ApproxLevel:
                val = g_approx(ds, k, lvl)
                row[lvl.value] = val
            for lvl in ApproxLevel:
                row[f"rel_err_{lvl.value}"] = (row[lvl.value] - exact) / exact if exact else math.nan
            rows.append(row)
    return rows


def rayleigh_gap(ds: DegreeSequence, v: int, kmax: int | None = None,
                 backend: str = "float") -> float:
    """``max_k |P(SL > k) - exp(-k^2 sigma2/(2n))|`` over ``k <= kmax``.

    ``kmax`` defaults to ``4 sqrt(n/sigma2)`` (the bulk of the law).
    """
    n = ds.n
    s2 = stats(ds).sigma2_float
    if kmax is None:
        kmax = n - 1 if s2 == 0 else min(n - 1, math.ceil(4 * math.sqrt(n / s2)))
    tab = survival(ds, v, kmax, backend)
    k = np.arange(kmax + 1)
    s = np.array([float(x) for x in tab.surv])
    return float(np.max(np.abs(s - np.exp(-k * k * s2 / (2 * n)))))
