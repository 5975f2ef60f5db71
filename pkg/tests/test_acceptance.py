"""Acceptance criteria 1-12.

Thresholds come from ``sixlength/data/thresholds.json``.  Each test records one
PASS/FAIL line, printed in the terminal summary of the pytest run.
"""
from fractions import Fraction
import math
import time

import numpy as np
import pytest

from sixlength.asymptotics import rayleigh_gap
from sixlength.degrees import DegreeSequence, generate, stats
from sixlength.exact import brute_force_all, enumerate_functions, joint_law, survival
from sixlength.experiments import ExperimentConfig, draw_samples, load_thresholds, summarize
from sixlength.gof import chi_square, chi_square_two_sample
from sixlength.graph import FunctionalGraph, sample_uniform, sample_walks_lazy
from sixlength.reduction import (coupled_six_length, extension_law, n_extend, plan_reduction,
                                 reduced_size, urn_mean, urn_run_many, urn_tail_bound, w_reduce)
from sixlength.rng import stream

from conftest import compositions, random_sequence, record

pytestmark = pytest.mark.slow

TH = load_thresholds()
SEED = TH["seed"]


@pytest.fixture(scope="module")
def oracle_runs():
    cfg = TH["oracle_equivalence"]
    t0 = time.perf_counter()
    runs = []
    for n in range(cfg["n_min"], cfg["n_max"] + 1):
        for d in compositions(n, cfg["delta_max"]):
            ds = DegreeSequence(d)
            runs.append((ds, brute_force_all(ds)))
    return runs, t0


def test_01_oracle_equivalence(oracle_runs):
    runs, t0 = oracle_runs
    mismatches = [(ds.degrees, v) for ds, laws in runs for v in range(ds.n)
                  if joint_law(ds, v) != laws[v]]
    elapsed = time.perf_counter() - t0
    limit = TH["oracle_equivalence"]["max_seconds"]
    ok = not mismatches and elapsed < limit
    record(1, "oracle equivalence", ok,
           f"{len(runs)} sequences, {sum(ds.n for ds, _ in runs)} vertices, "
           f"{len(mismatches)} mismatches, {elapsed:.1f}s (limit {limit}s)")
    assert ok


def test_02_conditional_uniformity(oracle_runs):
    runs, _ = oracle_runs
    bad = 0
    checked = 0
    for ds, laws in runs:
        for law in laws:
            for k in range(2, law.kmax + 1):
                checked += 1
                if len(set(law.rows[k][1:])) > 1:
                    bad += 1
    record(2, "conditional uniformity", bad == 0, f"{checked} (v, k) rows from enumeration, {bad} non-uniform")
    assert bad == 0


def test_03_permutation_closed_form():
    cfg = TH["permutation_closed_form"]
    n = cfg["n"]
    t0 = time.perf_counter()
    tab = survival(generate("permutation", n), 0, n - 1, "float")
    elapsed = time.perf_counter() - t0
    err = max(abs(s - (n - k) / n) for k, s in enumerate(tab.surv))
    ok = err <= cfg["max_abs_error"] and elapsed < cfg["max_seconds"]
    record(3, "permutation closed form", ok, f"max abs error {err:.2e}, {elapsed:.3f}s")
    assert ok


def test_04_sampler_vs_exact():
    cfg = TH["sampler_vs_exact"]
    t0 = time.perf_counter()
    ec = ExperimentConfig("generator:two_zero", cfg["n"], trials=cfg["samples"], seed=SEED,
                          outputs=("exact",))
    ds = ec.resolve_degrees()
    v = 0
    rep = summarize(draw_samples(ec, ds, v), ds, v, ec)
    elapsed = time.perf_counter() - t0
    ok = (rep.ks_exact <= cfg["ks_max"] and rep.chi2_exact.p > cfg["chi2_p_min"]
          and elapsed < cfg["max_seconds"])
    record(4, "sampler vs exact", ok,
           f"KS {rep.ks_exact:.4f} (max {cfg['ks_max']}), chi2 p {rep.chi2_exact.p:.3f}, "
           f"{elapsed:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def limit_runs():
    cfg = TH["rayleigh_limit"]
    t0 = time.perf_counter()
    reports = {}
    for n in cfg["n"]:
        ec = ExperimentConfig("generator:two_zero", n, trials=cfg["trials"], seed=SEED,
                              outputs=("moments", "ks_rayleigh", "tail"))
        ds = ec.resolve_degrees()
        reports[n] = summarize(draw_samples(ec, ds, 0), ds, 0, ec)
    return reports, time.perf_counter() - t0


def test_05_rayleigh_limit(limit_runs):
    cfg = TH["rayleigh_limit"]
    reports, elapsed = limit_runs
    ks = [reports[n].ks_rayleigh for n in cfg["n"]]
    trend = all(a >= b for a, b in zip(ks, ks[1:]))
    ok = ks[-1] <= cfg["ks_max"] and trend and elapsed < cfg["max_seconds"]
    record(5, "Rayleigh limit", ok,
           "KS " + ", ".join(f"n={n}: {k:.4f}" for n, k in zip(cfg["n"], ks))
           + f"; non-increasing {trend}; {elapsed:.1f}s")
    assert ok


def test_06_moments(limit_runs):
    cfg = TH["moments"]
    rep = limit_runs[0][max(TH["rayleigh_limit"]["n"])]
    ok = abs(rep.mean_ratio - 1) <= cfg["mean_rel_tol"] and abs(rep.var_ratio - 1) <= cfg["var_rel_tol"]
    record(6, "moments", ok,
           f"mean {rep.six.mean:.2f} (ratio {rep.mean_ratio:.4f}), "
           f"var {rep.six.var:.0f} (ratio {rep.var_ratio:.4f})")
    assert ok


def test_07_joint_limit(limit_runs):
    cfg = TH["joint_limit"]
    rep = limit_runs[0][max(TH["rayleigh_limit"]["n"])]
    ks = rep.tail_uniformity.ks
    ratio = rep.tail_six_ratio
    ok = (ks <= cfg["ks_max"] and abs(ratio / 0.5 - 1) <= cfg["ratio_rel_tol"]
          and abs(rep.tail_mean_ratio - 1) <= cfg["tail_mean_rel_tol"])
    record(7, "joint limit", ok,
           f"KS(TL/SL, U) {ks:.4f}, mean TL/mean SL {ratio:.4f}, "
           f"mean TL ratio {rep.tail_mean_ratio:.4f}")
    assert ok


def test_08_reduction_invariant():
    count = TH["reduction_invariant"]["sequences"]
    gen = stream(SEED, 8)
    done = failures = 0
    while done < count:
        n = int(gen.integers(10, 400))
        ds = random_sequence(gen, n, int(gen.integers(2, 6)))
        st = stats(ds)
        # excess 2 is the one case where w of degree 1 cannot always be kept
        if st.excess < 4 or reduced_size(ds) >= n:
            continue
        w = int(gen.integers(n))
        res = w_reduce(sample_uniform(ds, gen), ds, w)
        rst = stats(res.reduced_degrees)
        good = (rst.excess == st.excess and rst.delta == st.delta and w in res.kept
                and res.reduced.n == res.n_hat
                and np.array_equal(res.reduced.in_degrees(), res.reduced_degrees.array))
        failures += not good
        done += 1
    record(8, "reduction invariant", failures == 0,
           f"{done} random active reductions, {failures} violations")
    assert failures == 0


def test_09_extension_uniformity():
    cfg = TH["extension_uniformity"]
    ds = DegreeSequence([2, 0, 1, 1, 1])
    w = 0
    plan = plan_reduction(ds, w)
    n, n_hat = ds.n, plan.n_hat
    rd = DegreeSequence([ds[v] for v in plan.kept])
    cells = {f: i for i, f in enumerate(enumerate_functions(ds))}
    gen = stream(SEED, 9)
    counts = np.zeros(len(cells), dtype=np.int64)
    for _ in range(cfg["extensions"]):
        g = sample_uniform(rd, gen)
        counts[cells[n_extend(g, n, gen, plan.kept).as_tuple()]] += 1
    chi = chi_square(counts, np.ones(len(cells)))
    # exact: every choice sequence gives a distinct mapping of weight prod 1/(n_hat + j)
    weight = Fraction(1, math.prod(n_hat + j for j in range(1, n - n_hat + 1)))
    exact_ok = True
    for image in enumerate_functions(rd):
        law = extension_law(FunctionalGraph(image), n, plan.kept)
        exact_ok &= set(law.values()) == {weight} and len(law) * weight == 1
        exact_ok &= all(np.array_equal(np.bincount(f, minlength=n), ds.array) for f in law)
    ok = chi.p > cfg["chi2_p_min"] and exact_ok and len(cells) == 60
    record(9, "extension uniformity", ok,
           f"{len(cells)} cells, chi2 {chi.stat:.1f} on {chi.df} df, p {chi.p:.3f}; "
           f"exact weights 1/{weight.denominator} {exact_ok}")
    assert ok


def test_10_coupling():
    cfg = TH["coupling"]
    t0 = time.perf_counter()
    ds = generate("binary_mix", cfg["n"], {"twos": 2})
    w = 0
    assert stats(ds).excess == cfg["excess"] and reduced_size(ds) == cfg["n_hat"]
    gen = stream(SEED, 10)
    direct = sample_walks_lazy(ds, w, cfg["draws"], gen)[:, 0]
    coupled = coupled_six_length(ds, w, gen, size=cfg["draws"])
    edges = ds.n + 1
    chi = chi_square_two_sample(np.bincount(direct, minlength=edges),
                                np.bincount(coupled, minlength=edges))
    elapsed = time.perf_counter() - t0
    ok = chi.p > cfg["chi2_p_min"] and elapsed < cfg["max_seconds"]
    record(10, "coupling", ok,
           f"chi2 {chi.stat:.1f} on {chi.df} df, p {chi.p:.3f}; means {direct.mean():.2f} vs "
           f"{coupled.mean():.2f}; {elapsed:.1f}s")
    assert ok


def test_11_urn():
    cfg = TH["urn"]
    k = cfg["se_multiple"]
    runs = cfg["runs"]
    gen = stream(SEED, 11)
    n, a, b = cfg["mean_case"]
    red = urn_run_many(n, a, b, gen, size=runs)
    se = red.std(ddof=1) / math.sqrt(runs)
    mean = float(red.mean())
    mean_ok = abs(mean - urn_mean(n, a, b)) <= k * se
    worst = -math.inf
    for n, a, b in [(100, 3, 5), (100, 30, 70), (1000, 30, 70), (1000, 50, 50), (300, 10, 2)]:
        red = urn_run_many(n, a, b, gen, size=runs)
        mu = urn_mean(n, a, b)
        for t in (0.1, 0.25, 0.5, 1.0):
            freq = float(np.mean(np.abs(red - mu) >= t * mu))
            bound = urn_tail_bound(n, a, b, t)
            worst = max(worst, freq - bound - k * math.sqrt(freq * (1 - freq) / runs))
    azuma_ok = worst <= 0
    one = urn_run_many(1, 1, 1, gen, size=runs)
    half_se = math.sqrt(0.25 / runs)
    freqs = [float(np.mean(one == 1)), float(np.mean(one == 2))]
    tiny_ok = set(np.unique(one)) == {1, 2} and all(abs(f - 0.5) <= k * half_se for f in freqs)
    ok = mean_ok and azuma_ok and tiny_ok
    record(11, "urn", ok,
           f"R(100,3,5) mean {mean:.3f} (se {se:.3f}) {mean_ok}; Azuma grid {azuma_ok}; "
           f"R(1,1,1) freqs {freqs[0]:.4f}/{freqs[1]:.4f}")
    assert ok


def test_12_ladder():
    ns = TH["ladder"]["n"]
    gaps = [rayleigh_gap(generate("two_zero", n), 0) for n in ns]
    ok = all(a > b for a, b in zip(gaps, gaps[1:]))
    record(12, "approximation ladder", ok,
           "sup gap " + ", ".join(f"n={n}: {g:.5f}" for n, g in zip(ns, gaps)))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
