"""Constructions of UBSE unitaries, DMSE density matrices and CBE channels."""

from .canonical import CanonicalGate, canonical_decompose, entangling_power_schmidt
from .cbe import (
    CompiledChannel,
    VecChannel,
    cbe_canonical_gate,
    cbe_compile_circuit,
    cbe_compile_trotter,
    cbe_pauli_sum,
    local_channel,
)
from .dmse import DmseDensity, dmse_initial_product, dmse_optimal
from .programs import CircuitIR, Gate, PauliHamiltonian
from .ubse import UbseOperator, ubse_from_bell_label, ubse_from_decomposition, verify_ubse

__all__ = [
    "CanonicalGate",
    "CircuitIR",
    "CompiledChannel",
    "DmseDensity",
    "Gate",
    "PauliHamiltonian",
    "UbseOperator",
    "VecChannel",
    "canonical_decompose",
    "cbe_canonical_gate",
    "cbe_compile_circuit",
    "cbe_compile_trotter",
    "cbe_pauli_sum",
    "dmse_initial_product",
    "dmse_optimal",
    "entangling_power_schmidt",
    "local_channel",
    "ubse_from_bell_label",
    "ubse_from_decomposition",
    "verify_ubse",
]
