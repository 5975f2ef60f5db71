"""Goodness-of-fit statistics used by the experiments.

KS distances are computed directly from the empirical step function so that
weighted samples (e.g. an exact law fed in as weights) work the same way as
plain draws.  Chi-square statistics merge adjacent bins until every expected
count reaches ``min_expected``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats as sps

from .errors import DegenerateBins


def _ecdf(samples, weights=None):
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("need at least one sample")
    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float)
    keep = w > 0
    x, w = x[keep], w[keep]
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    ux, start = np.unique(x, return_index=True)
    wsum = np.add.reduceat(w, start)
    cum = np.cumsum(wsum) / w.sum()
    return ux, cum


def ks_distance(samples, cdf: Callable, weights=None, discrete: bool = False) -> float:
    """One-sample Kolmogorov-Smirnov distance ``sup |F_N - F|``.

    ``cdf`` must accept a numpy array.  With ``discrete=True`` the samples
    and the reference are integer-valued step functions and the supremum is
    taken over the integers between ``min - 1`` and ``max``.
    """
    ux, cum = _ecdf(samples, weights)
    if discrete:
        lo, hi = int(ux[0]) - 1, int(ux[-1])
        grid = np.arange(lo, hi + 1)
        idx = np.searchsorted(ux, grid, side="right")
        emp = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
        return float(np.max(np.abs(emp - np.asarray(cdf(grid), dtype=float))))
    ref = np.asarray(cdf(ux), dtype=float)
    below = np.concatenate([[0.0], cum[:-1]])
    return float(max(np.max(np.abs(cum - ref)), np.max(np.abs(below - ref))))


def ks_critical(n_samples: int, level: float = 0.05) -> float:
    """Asymptotic critical value of the KS distance (1.358/sqrt(N) at 5%)."""
    return float(sps.kstwobign.isf(level)) / math.sqrt(n_samples)


def merge_bins(observed, expected, min_expected: float = 5.0):
    """Merge adjacent bins left to right until each expected count is large enough."""
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    out_o, out_e = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            out_o.append(acc_o)
            out_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if out_e:
            out_o[-1] += acc_o
            out_e[-1] += acc_e
        else:
            out_o.append(acc_o)
            out_e.append(acc_e)
    return np.array(out_o), np.array(out_e)


@dataclass(frozen=True)
class ChiSquare:
    stat: float
    df: int
    p: float
    bins: int


def chi_square(observed, expected, min_expected: float = 5.0, ddof: int = 0) -> ChiSquare:
    """Pearson goodness-of-fit; ``expected`` is rescaled to the observed total."""
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape:
        raise ValueError("observed and expected differ in shape")
    tot_e = exp.sum()
    if tot_e <= 0:
        raise DegenerateBins("expected counts are all zero")
    exp = exp * (obs.sum() / tot_e)
    o, e = merge_bins(obs, exp, min_expected)
    if len(e) < 2:
        raise DegenerateBins("fewer than two bins after merging")
    if (e <= 0).any():
        raise DegenerateBins("empty expected bin")
    stat = float(np.sum((o - e) ** 2 / e))
    df = len(e) - 1 - ddof
    return ChiSquare(stat, df, float(sps.chi2.sf(stat, df)), len(e))


def chi_square_two_sample(counts_a, counts_b, min_expected: float = 5.0) -> ChiSquare:
    """Homogeneity test of two histograms over the same ordered bins."""
    a = np.asarray(counts_a, dtype=float)
    b = np.asarray(counts_b, dtype=float)
    na, nb = a.sum(), b.sum()
    if na == 0 or nb == 0:
        raise DegenerateBins("empty sample")
    pooled = a + b
    # merge on the smaller of the two expected rows
    smallest = pooled * min(na, nb) / (na + nb)
    groups = []
    cur: list[int] = []
    acc = 0.0
    for i, e in enumerate(smallest):
        cur.append(i)
        acc += e
        if acc >= min_expected:
            groups.append(cur)
            cur, acc = [], 0.0
    if cur:
        if groups:
            groups[-1].extend(cur)
        else:
            groups.append(cur)
    if len(groups) < 2:
        raise DegenerateBins("fewer than two bins after merging")
    ga = np.array([a[g].sum() for g in groups])
    gb = np.array([b[g].sum() for g in groups])
    tot = ga + gb
    ea = tot * na / (na + nb)
    eb = tot * nb / (na + nb)
    stat = float(np.sum((ga - ea) ** 2 / ea) + np.sum((gb - eb) ** 2 / eb))
    df = len(groups) - 1
    return ChiSquare(stat, df, float(sps.chi2.sf(stat, df)), len(groups))


@dataclass(frozen=True)
class UniformityResult:
    chi2: float
    df: int
    p: float
    ks: float
    degenerate: bool = False


def _weighted_cuts(values: np.ndarray, weights: np.ndarray, buckets: int) -> np.ndarray:
    cum = np.cumsum(weights) / weights.sum()
    cuts = [values[np.searchsorted(cum, q / buckets)] for q in range(1, buckets)]
    return np.unique(cuts)


def joint_uniformity_test(six, tail, weights=None, buckets: int = 5, bins: int = 10,
                          min_samples: int = 10_000) -> UniformityResult:
    """Check that, given ``SL = k`` and ``TL > 0``, ``TL`` is uniform on ``1..k-1``.

    Samples with a positive tail are grouped into ``buckets`` six-length
    buckets.  Inside a bucket, ``TL`` is mapped to one of ``bins`` relative
    position bins; the expected bin masses are exact for every ``k`` and are
    pooled across the bucket.  The per-bucket chi-square statistics are
    summed.  ``ks`` is the KS distance of ``TL/SL`` (all samples) to U(0,1).
    """
    six = np.asarray(six, dtype=np.int64)
    tail = np.asarray(tail, dtype=np.int64)
    w = np.ones(six.size) if weights is None else np.asarray(weights, dtype=float)
    if w.sum() < min_samples:
        raise ValueError(f"need at least {min_samples} samples (total weight)")
    ks = ks_distance(tail / six, lambda x: np.clip(x, 0.0, 1.0), weights=w)
    pos = (tail > 0) & (w > 0)
    if not pos.any():
        return UniformityResult(math.nan, 0, math.nan, ks, degenerate=True)
    k_all, t_all, w_all = six[pos], tail[pos], w[pos]
    ks_unique, inv = np.unique(k_all, return_inverse=True)
    wk = np.bincount(inv, weights=w_all)
    cuts = _weighted_cuts(ks_unique, wk, buckets)
    bucket_of_k = np.searchsorted(cuts, ks_unique, side="right")
    stat, df = 0.0, 0
    for bkt in np.unique(bucket_of_k):
        sel_k = bucket_of_k == bkt
        expected = np.zeros(bins)
        for k, wt in zip(ks_unique[sel_k], wk[sel_k]):
            pos_bins = (bins * np.arange(k - 1)) // (k - 1)
            expected += np.bincount(pos_bins, minlength=bins) * (wt / (k - 1))
        in_b = np.isin(k_all, ks_unique[sel_k])
        ob_bins = (bins * (t_all[in_b] - 1)) // (k_all[in_b] - 1)
        observed = np.bincount(ob_bins, weights=w_all[in_b], minlength=bins)
        live = expected > 0
        o, e = merge_bins(observed[live], expected[live])
        if len(e) < 2:
            continue
        stat += float(np.sum((o - e) ** 2 / e))
        df += len(e) - 1
    if df == 0:
        raise DegenerateBins("no bucket has two usable bins")
    return UniformityResult(stat, df, float(sps.chi2.sf(stat, df)), ks)
