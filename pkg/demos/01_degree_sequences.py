"""Degree sequences: validation, summary statistics and assumption ratios.

Run: python demos/01_degree_sequences.py
"""
import numpy as np

from sixlength.asymptotics import m3_bound_check
from sixlength.degrees import check_assumptions, generate, make_degree_sequence, stats

# In-degrees of f(x) = x^2 mod 5 on {0, ..., 4}.
ds = make_degree_sequence([1, 2, 0, 0, 2])
st = stats(ds)
print(f"square map: n={st.n} delta={st.delta} m2={st.m2} sigma2={st.sigma2}")

# The generators used throughout the tests and acceptance runs.
gen = np.random.default_rng(0)
for kind, params in [("two_zero", None), ("permutation", None), ("binary_mix", {"twos": 2}),
                     ("multinomial", None)]:
    d = generate(kind, 64, params, gen if kind == "multinomial" else None)
    s = stats(d)
    print(f"{kind:12s} sigma2={s.sigma2_float:.4f} excess={s.excess:3d} deg1={s.num_deg1}")

# Asymptotic conditions are family statements; at one n only ratios are reported.
rep = check_assumptions(generate("two_zero", 200))
for row in rep.rows():
    print(f"  {row['condition']:9s} ratio={row['ratio']:.4f} want {row['want']}")
print("m3 bound:", m3_bound_check(generate("two_zero", 200)))
