"""Certify one random trajectory as a weak solution of Burgers' equation.

Every discontinuity line is tested against the Rankine-Hugoniot relation in
exact arithmetic, Lax admissibility is tallied, and the integral identity is
evaluated numerically for bump test functions at two grid steps.
"""

from collections import Counter
from fractions import Fraction

import numpy as np

from tasepburgers import Domain, NoiseField, edges, lax_condition, pair_forward, trajectory
from tasepburgers import rankine_hugoniot_residual, weak_residual
from tasepburgers.ensemble import random_config, random_test_functions

dom = Domain.ring(24)
seed = 11
cfg = pair_forward(random_config(dom, seed))
frames = trajectory(cfg, NoiseField(seed), 8)

es = edges(frames)
print(len(es), "edges")
print("RH residuals:", Counter(str(rankine_hugoniot_residual(e)) for e in es))
print("Lax:", Counter(lax_condition(e) for e in es))

rng = np.random.default_rng(0)
for phi in random_test_functions(frames, 5, rng):
    r1 = weak_residual(frames, phi, Fraction(1, 100))
    r2 = weak_residual(frames, phi, Fraction(1, 200))
    print(f"phi at (t={phi.t_c:.3f}, x={phi.x_c:.3f}): {r1:+.2e} -> {r2:+.2e}")
