"""Contracting degree-1 vertices, re-inflating, and the Polya urn coupling.

Run: python demos/05_reduction_and_urn.py
"""
import numpy as np

from sixlength.degrees import generate, stats
from sixlength.graph import sample_uniform, sample_walks_lazy, walk_lengths
from sixlength.reduction import (coupled_six_length, n_extend, urn_mean, urn_run_many,
                                 w_reduce)

gen = np.random.default_rng(3)
ds = generate("binary_mix", 64, {"twos": 2})
print(f"n={ds.n}, sum (d-1)^2 = {stats(ds).excess}")

g = sample_uniform(ds, gen)
res = w_reduce(g, ds, 0)
print(f"reduced to n_hat={res.n_hat}: kept {res.kept}, degrees {res.reduced_degrees.degrees}")
print("six-length before/after:", walk_lengths(g, 0).six,
      walk_lengths(res.reduced, res.w_reduced).six)

h = n_extend(res.reduced, ds.n, gen, res.kept)
print("re-inflated in-degrees match:", sorted(h.in_degrees()) == sorted(ds.degrees))

red = urn_run_many(100, 3, 5, gen, size=20000)
print(f"urn R(100,3,5): mean {red.mean():.2f}, expected {urn_mean(100, 3, 5)}")

direct = sample_walks_lazy(ds, 0, 20000, gen)[:, 0]
coupled = coupled_six_length(ds, 0, gen, size=20000)
print(f"six-length mean: direct {direct.mean():.2f}, via reduction and urn {coupled.mean():.2f}")
