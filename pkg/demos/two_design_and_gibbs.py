"""Random vectorized unitaries as an approximate state 2-design, and Gibbs-state encodings."""

import numpy as np

from matramp.experiments import (
    distance_bound, exact_trace_distance, gibbs_demo, random_two_local, two_design_check,
)

for n in (1, 2, 3):
    print(f"n={n}: trace distance {exact_trace_distance(n):.5f}, bound {distance_bound(n):.5f}")
rep = two_design_check(2, 2000, np.random.default_rng(0))
print("Monte-Carlo z-scores at n=2:", ", ".join(f"{z:.2f}" for z in rep.mc_z_scores), "\n")

rng = np.random.default_rng(7)
for n in (2, 3, 4):
    for beta in (0.0, 1.0, 3.0):
        r = gibbs_demo(random_two_local(n, rng), beta)
        print(f"n={n} beta={beta:.1f}: gamma {r.gamma:.5f}  (formula {r.gamma_formula:.5f}), "
              f"gamma*2^(n/2) {r.gamma * 2 ** (n / 2):.4f}")
