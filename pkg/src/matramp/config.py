"""Numerical tolerances and the dense-register budget."""

import os

TOL_NORM = 1e-10
TOL_RANK = 1e-12
DEFAULT_MAX_QUBITS = 16


def max_qubits() -> int:
    """Qubit budget for dense objects; ``MATRAMP_MAX_QUBITS`` overrides it."""
    value = os.environ.get("MATRAMP_MAX_QUBITS")
    if value is None:
        return DEFAULT_MAX_QUBITS
    return int(value)
