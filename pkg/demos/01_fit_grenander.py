"""Fit the Grenander estimator to a small uniform sample and inspect its blocks.

The estimator is the left derivative of the least concave majorant of the
empirical distribution function.  For a uniform sample its constancy
intervals ("blocks") carry the information the later demos work with: the
number of observations J_i in each block and the scaled lengths n D_i.
"""
import numpy as np

from grenander import blocks, grenander, grenander_oracle, jump_profile, l2_statistic

rng = np.random.default_rng(1)
u = rng.random(12)
d = grenander(u)

print("sorted sample:", np.round(np.sort(u), 3))
print("\nbreakpoints:", np.round(d.breakpoints, 3))
print("levels:     ", np.round(d.levels, 3))
print("integral:   ", d.integral())

# the fast hull agrees with the min-max formula
o = grenander_oracle(u)
print("\nmax |fast - min-max oracle|:", np.max(np.abs(d.levels - o.levels)))

prof = jump_profile(d, u)
J, S = blocks(d, u)
print("\nblock sizes J_i:", prof.sizes)
print("profile Q_j:   ", prof.counts)
print("n D_i:         ", np.round(S, 3))
print("jumps m:       ", d.n_jumps)

print("\nL2 statistic:", l2_statistic(u))

d.to_csv("demo_density.csv")
print("\nwrote demo_density.csv")
