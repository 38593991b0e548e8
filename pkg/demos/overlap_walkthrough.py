"""Estimate Re<B|A> for a small instance with the indirect and direct methods.

|A> starts as a product state and is evolved by a circuit that crosses the cut
once; |B> is a combination of two Pauli-operator states.
"""

import numpy as np

from matramp.encoders import CircuitIR, Gate, cbe_compile_circuit, dmse_initial_product
from matramp.encoders.cbe import apply_to_dmse
from matramp.estimators import (
    EstimationTask, amplitude_estimation_run, direct_ae_baseline, direct_hadamard_baseline,
    hadamard_test_run,
)
from matramp.matrixize import BipartiteState, entropy_report
from matramp.parsing import ubse_from_spec

n = 2
upper = np.array([1, 0, 0, 0], dtype=complex)
lower = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
circuit = CircuitIR(n, [Gate.make("h", [0]), Gate.make("cnot", [0, 2]), Gate.make("ry", [3], [0.4])])

channel, gamma = cbe_compile_circuit(circuit)
evolved = BipartiteState(circuit.unitary() @ np.kron(upper, lower))
dmse = apply_to_dmse(channel, dmse_initial_product(upper, lower), evolved)
print(f"circuit: eta = {channel.eta:.4f}, gamma = {gamma:.4f}, block residual = {dmse.residual():.1e}")

ubse = ubse_from_spec({"decomposition": [{"coeff": 0.6, "pauli": "II"},
                                         {"coeff": [0, 0.8], "pauli": "XZ"}]})
rep = entropy_report(ubse.b)
print(f"B: lambda = {ubse.lam:.4f} (cap {rep.lambda_max:.4f}), ancillas k = {ubse.k}")

task = EstimationTask("real", ubse, dmse, epsilon=0.1, delta=0.05)
print(f"exact mu = {task.mu:+.5f}, gamma * lambda = {task.scale:.4f}\n")

rng = np.random.default_rng(2024)
runs = {
    "indirect s.q.l.": hadamard_test_run(task, rng),
    "indirect h.l.": amplitude_estimation_run(task, rng),
    "direct s.q.l.": direct_hadamard_baseline(dmse.a, ubse.b, 0.1, 0.05, rng),
    "direct h.l.": direct_ae_baseline(dmse.a, ubse.b, 0.1, 0.05, rng),
}
for name, res in runs.items():
    print(f"{name:16s} estimate {res.estimate:+.5f}  queries {res.queries_used:>9d}  "
          f"rel. error {res.relative_error:.3f}")
