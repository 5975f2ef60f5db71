"""Convergence of the scaled six-length to the Rayleigh law.

Run: python demos/04_rayleigh_limit.py
"""
from sixlength.asymptotics import ladder_table, rayleigh_gap
from sixlength.degrees import generate
from sixlength.experiments import ExperimentConfig, run_experiment

for n in (100, 1000, 10_000):
    print(f"n={n:6d} exact sup gap to exp(-k^2 sigma2/2n): "
          f"{rayleigh_gap(generate('two_zero', n), 0):.5f}")

rows = ladder_table(generate("two_zero", 2000), [10, 45, 90])
for r in rows:
    print(f"  k={r['k']:3d} exact={r['exact']:.5f} rayleigh={r['rayleigh']:.5f} "
          f"refined={r['refined']:.5f} product={r['product']:.5f}")

rep = run_experiment(ExperimentConfig("generator:two_zero", 10_000, trials=5000, seed=7))
print(f"Monte-Carlo n=10^4: KS to Rayleigh {rep.ks_rayleigh:.4f}, "
      f"mean ratio {rep.mean_ratio:.4f}, TL/SL mean ratio {rep.tail_six_ratio:.4f}")
