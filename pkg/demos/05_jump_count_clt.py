"""Sparre Andersen's CLT for the number of jumps, and why it is slow.

(m - log n) / sqrt(log n) tends to N(0, 1), but the exact mean of m is H_n,
so the standardised mean is (H_n - log n) / sqrt(log n), roughly
0.5772 / sqrt(log n).  Even at n = 10^12 that is still about 0.11.  The
count is also an integer, which bounds how close a KS fit to a continuous
law can be.  The representation sampler makes huge n cheap: each draw costs
O(log n).
"""
import math

from grenander.harness import ExperimentConfig, ks_one_sample, run_experiment
from grenander.representation import harmonic

print(f"{'n':>8} {'sim mean':>9} {'exact mean':>10} {'variance':>9} {'KS D':>7} {'time':>6}")
for k in (2, 4, 6, 9, 12):
    n = 10**k
    r = run_experiment(ExperimentConfig("jumps", n, 50_000, seed=k, path="representation"))
    exact = (harmonic(n) - math.log(n)) / math.sqrt(math.log(n))
    D, _ = ks_one_sample(r.values)
    print(f"  1e{k:<5} {r.mean:9.4f} {exact:10.4f} {r.variance:9.4f} {D:7.4f} {r.wall_time:5.2f}s")

print("\ndirect fits at n=2000 for comparison")
r = run_experiment(ExperimentConfig("jumps", 2000, 2000, seed=1, compare=True))
print(f"  mean {r.mean:.4f}, two-sample KS vs representation p={r.two_sample_ks[1]:.3f}")
