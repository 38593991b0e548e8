"""Channel-encoding efficiencies: two-qubit gates, CNOT ladders and Trotterized evolution."""

import math

import numpy as np

from matramp.encoders import canonical_decompose, entangling_power_schmidt
from matramp.encoders.programs import FIXED_GATES
from matramp.experiments import run_regime_sweep
from matramp.qcore import haar_random_unitary

for name in ("cnot", "cz", "swap"):
    g = FIXED_GATES[name]
    c = canonical_decompose(g)
    theta = ", ".join(f"{t / math.pi:.3f}pi" for t in c.theta)
    print(f"{name:5s} theta = ({theta})  eta = {c.eta:.4f}  H_s = {entangling_power_schmidt(g):.3f}")

g = haar_random_unitary(2, np.random.default_rng(1))
c = canonical_decompose(g)
print(f"Haar  eta = {c.eta:.4f}, -2 log2 eta = {-2 * math.log2(c.eta):.4f}, "
      f"H_s = {entangling_power_schmidt(g):.4f}\n")

sweep = run_regime_sweep(depths=range(0, 7), times=[0.1, 0.5, 1.0], n=4)
for row in sweep.rows:
    extra = f"  closed form gamma {row['eta_closed_form'] / 2:.4f}" if "eta_closed_form" in row else ""
    print(f"{row['kind']:8s} {row['parameter']:>4}  gamma {row['gamma']:.4f}  "
          f"gamma*lambda {row['gamma_lambda']:.4f}{extra}")
