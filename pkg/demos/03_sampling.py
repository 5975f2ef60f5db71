"""Uniform sampling and walk lengths, with the full and the lazy sampler.

Run: python demos/03_sampling.py
"""
import numpy as np

from sixlength.degrees import generate
from sixlength.exact import survival
from sixlength.gof import chi_square
from sixlength.graph import sample_uniform, sample_walks_lazy, walk_lengths

gen = np.random.default_rng(1)
ds = generate("two_zero", 12)
g = sample_uniform(ds, gen)
print("sampled mapping:", g.as_tuple())
print("in-degrees preserved:", tuple(g.in_degrees()) == ds.degrees)
print("walk from vertex 0 (six, tail, cycle):", tuple(walk_lengths(g, 0)))

# The lazy sampler reveals f only along the walk, so n can be large.
n = 200
ds = generate("two_zero", n)
recs = sample_walks_lazy(ds, 0, 50_000, gen)
surv = survival(ds, 0, n - 1, "float").surv
pmf = [surv[k - 1] - surv[k] for k in range(1, n)]
obs = np.bincount(recs[:, 0], minlength=n + 1)[1:n]
print(f"lazy sampler vs exact law at n={n}: chi2 p = {chi_square(obs, pmf).p:.3f}")
