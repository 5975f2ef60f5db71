from collections import Counter

import numpy as np
import pytest

from sixlength.degrees import DegreeSequence, generate
from sixlength.errors import SixLengthError
from sixlength.exact import enumerate_functions, family_size, survival
from sixlength.gof import chi_square, chi_square_two_sample
from sixlength.graph import (FunctionalGraph, all_walk_lengths, iterate, read_graph_csv,
                             sample_uniform, sample_walk_lazy, sample_walks_full,
                             sample_walks_lazy, walk_lengths, write_graph_csv)


def figure_graph():
    # tail a -> b -> c, then the 8-cycle r1 -> ... -> r8 -> r1, plus trees
    a, b, c = 0, 1, 2
    ring = list(range(3, 11))
    v1, v2, v3, v4, v5, v6, v7, v8 = range(11, 19)
    f = [0] * 19
    f[a], f[b], f[c] = b, c, ring[0]
    for i, r in enumerate(ring):
        f[r] = ring[(i + 1) % 8]
    f[v1], f[v2], f[v3] = a, b, b
    f[v4], f[v5], f[v6] = ring[6], v4, v4
    f[v7], f[v8] = ring[4], v7
    return FunctionalGraph(f)


def test_square_map(square_mod5):
    g = FunctionalGraph(square_mod5)
    assert iterate(g, 2, 2) == 1
    assert tuple(walk_lengths(g, 3)) == (3, 2, 1)
    assert tuple(walk_lengths(g, 2)) == (3, 2, 1)
    assert tuple(walk_lengths(g, 0)) == (1, 0, 1)
    assert g.degree_sequence().degrees == (1, 2, 0, 0, 2)


def test_figure_graph():
    g = figure_graph()
    w = walk_lengths(g, 0)
    assert (w.six, w.tail, w.cycle) == (11, 3, 8)
    assert sum(g.in_degrees()) == 19


def test_iterate_identity_and_errors():
    g = FunctionalGraph([1, 2, 0])
    assert iterate(g, 1, 0) == 1
    assert iterate(g, 0, 3) == 0
    with pytest.raises(ValueError):
        iterate(g, 0, -1)
    with pytest.raises(SixLengthError):
        FunctionalGraph([0, 3, 1])


def test_walk_lengths_agree_with_naive_definition(rng):
    for _ in range(200):
        n = int(rng.integers(1, 30))
        g = FunctionalGraph(rng.integers(0, n, n))
        for v in range(n):
            orbit = [v]
            while iterate(g, orbit[-1], 1) not in orbit:
                orbit.append(iterate(g, orbit[-1], 1))
            six = len(orbit)
            tail = orbit.index(iterate(g, orbit[-1], 1))
            assert (walk_lengths(g, v).six, walk_lengths(g, v).tail) == (six, tail)
        assert all_walk_lengths(g.as_tuple()) == [(w.six, w.tail) for w in
                                                  (walk_lengths(g, v) for v in range(n))]


def test_sample_uniform_has_degrees(rng):
    ds = generate("multinomial", 50, rng=rng)
    for _ in range(20):
        assert np.array_equal(sample_uniform(ds, rng).in_degrees(), ds.array)


def test_sample_uniform_is_uniform():
    ds = DegreeSequence([2, 0, 1, 1, 1])
    gen = np.random.default_rng(5)
    index = {f: i for i, f in enumerate(enumerate_functions(ds))}
    assert len(index) == family_size(ds) == 60
    counts = Counter(index[sample_uniform(ds, gen).as_tuple()] for _ in range(30000))
    obs = [counts[i] for i in range(60)]
    assert chi_square(obs, np.ones(60)).p > 1e-3


def test_lazy_walk_matches_exact_law():
    ds = generate("two_zero", 40)
    gen = np.random.default_rng(9)
    recs = sample_walks_lazy(ds, 0, 20000, gen)
    surv = survival(ds, 0, 39, "rational").surv
    pmf = [float(surv[k - 1] - surv[k]) for k in range(1, 40)]
    obs = np.bincount(recs[:, 0], minlength=41)[1:40]
    assert chi_square(obs, pmf).p > 1e-3
    assert (recs[:, 1] < recs[:, 0]).all()


def test_lazy_and_full_agree_on_tail():
    ds = DegreeSequence([3, 0, 0, 1, 2, 0, 1, 1])
    gen = np.random.default_rng(2)
    lazy = sample_walks_lazy(ds, 4, 20000, gen)
    full = sample_walks_full(ds, 4, 20000, gen)
    cells = lambda r: np.bincount(r[:, 0] * 9 + r[:, 1], minlength=81)
    assert chi_square_two_sample(cells(lazy), cells(full)).p > 1e-3


def test_lazy_walk_is_reproducible():
    ds = generate("two_zero", 1000)
    a = sample_walks_lazy(ds, 3, 50, np.random.default_rng(1))
    b = sample_walks_lazy(ds, 3, 50, np.random.default_rng(1))
    assert np.array_equal(a, b)
    w = sample_walk_lazy(ds, 3, np.random.default_rng(1))
    assert (w.six, w.tail) == tuple(a[0])


def test_permutation_walk_is_pure_cycle(rng):
    ds = generate("permutation", 30)
    recs = sample_walks_lazy(ds, 0, 500, rng)
    assert (recs[:, 1] == 0).all()


def test_graph_csv_round_trip(tmp_path):
    g = figure_graph()
    path = tmp_path / "g.csv"
    write_graph_csv(g, path, header=["figure"])
    text = path.read_text().splitlines()
    assert text[0] == "# figure" and text[1] == "1,2"
    assert read_graph_csv(path) == g
    bad = tmp_path / "bad.csv"
    bad.write_text("1,1\n3,1\n")
    with pytest.raises(SixLengthError):
        read_graph_csv(bad)
