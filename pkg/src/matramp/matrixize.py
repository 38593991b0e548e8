"""Vectorization / matrixization of bipartite states and the entropy bounds on lambda, gamma.

A 2n-qubit state ``sum_ij o_ij |i>|j>`` corresponds to the 2^n x 2^n matrix
``sum_ij o_ij |i><j|``: the upper subsystem (first n qubits) indexes rows and
the lower subsystem indexes columns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .config import TOL_NORM, TOL_RANK
from .errors import DimensionError, ValidationError
from .qcore import as_state, num_qubits, singular_values

logger = logging.getLogger(__name__)

# Set to True to cross-check overlap_via_trace against the direct inner product.
DEBUG_CHECKS = False


def vectorize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"vectorize needs a square matrix, got {m.shape}")
    num_qubits(m.shape[0])
    return m.reshape(-1).copy()


def matrixize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    q = num_qubits(v.size)
    if q % 2:
        raise DimensionError(f"matrixize needs an even qubit count, got {q}")
    d = 1 << (q // 2)
    return v.reshape(d, d).copy()


@dataclass(frozen=True)
class BipartiteState:
    """A normalized 2n-qubit state cut between its first and last n qubits."""

    state: np.ndarray

    def __post_init__(self):
        s = as_state(self.state)
        if num_qubits(s.size) % 2:
            raise ValidationError("bipartite state needs an even number of qubits")
        object.__setattr__(self, "state", s)

    @property
    def n(self) -> int:
        return num_qubits(self.state.size) // 2

    @property
    def matrix(self) -> np.ndarray:
        return matrixize(self.state)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "BipartiteState":
        return cls(vectorize(m))

    @classmethod
    def product(cls, upper: np.ndarray, lower: np.ndarray) -> "BipartiteState":
        return cls(np.kron(as_state(upper), as_state(lower)))


def overlap_via_trace(a: BipartiteState, b: BipartiteState) -> complex:
    """<B|A> evaluated as Tr(B^dagger A) on the matrixized states."""
    if a.n != b.n:
        raise DimensionError(f"size mismatch: n={a.n} vs n={b.n}")
    value = complex(np.trace(b.matrix.conj().T @ a.matrix))
    if DEBUG_CHECKS:
        direct = complex(np.vdot(b.state, a.state))
        assert abs(value - direct) < TOL_NORM, (value, direct)
    return value


@dataclass(frozen=True)
class EntropyReport:
    n: int
    h_inf: float
    h_half: float
    lambda_max: float
    gamma_max: float


def entropy_report(s: BipartiteState) -> EntropyReport:
    """Renyi entropies across the cut and the resulting caps on lambda and gamma.

    ``lambda_max = 2**(h_inf/2)`` bounds any block encoding of the state, and
    ``gamma_max = 2**(-h_half/2 - 1)`` bounds any density-matrix encoding.
    """
    sv = singular_values(s.matrix)
    sv = sv[sv > TOL_RANK]
    h_inf = float(-np.log2(np.max(sv) ** 2))
    h_half = float(2 * np.log2(np.sum(sv)))
    # clamp tiny negative round-off at product states
    h_inf, h_half = max(h_inf, 0.0), max(h_half, 0.0)
    return EntropyReport(
        n=s.n,
        h_inf=h_inf,
        h_half=h_half,
        lambda_max=float(2 ** (h_inf / 2)),
        gamma_max=float(2 ** (-h_half / 2 - 1)),
    )
