"""Density matrix state encodings: ``rho`` on 1+n qubits with upper-right block gamma * A."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import TOL_NORM
from ..errors import ValidationError
from ..matrixize import BipartiteState
from ..qcore import as_density, as_state, num_qubits, trace_norm


@dataclass(frozen=True)
class DmseDensity:
    """A ``(1+n, 0, 1, gamma)`` encoding; the flag qubit is the most significant."""

    n: int
    rho: np.ndarray
    gamma: float
    a: BipartiteState | None = None

    def block(self) -> np.ndarray:
        d = 1 << self.n
        return self.rho[:d, d:]

    def residual(self, a: BipartiteState | None = None) -> float:
        a = self.a if a is None else a
        return float(np.linalg.norm(self.block() - self.gamma * a.matrix))

    def check(self, tol: float = TOL_NORM) -> None:
        """Raise ValidationError unless rho is a density matrix carrying gamma * A."""
        as_density(self.rho, tol)
        if num_qubits(self.rho.shape[0]) != self.n + 1:
            raise ValidationError("rho must act on 1 + n qubits")
        if self.a is not None and self.residual() > tol:
            raise ValidationError(f"block residual {self.residual():.3g} exceeds {tol}")


def dmse_optimal(a: BipartiteState) -> DmseDensity:
    """Encoding attaining ``gamma = 1 / (2 ||A||_1)`` from the SVD of A."""
    mat = a.matrix
    u, s, vh = np.linalg.svd(mat)
    gamma = 1.0 / (2.0 * np.sum(s))
    top = (u * s) @ u.conj().T
    bottom = (vh.conj().T * s) @ vh
    rho = gamma * np.block([[top, mat], [mat.conj().T, bottom]])
    rho = (rho + rho.conj().T) / 2
    return DmseDensity(a.n, rho, float(gamma), a)


def dmse_initial_product(upper: np.ndarray, lower: np.ndarray) -> DmseDensity:
    """Pure encoding ``1/2 (|0>|u> + |1>|l*>)(h.c.)`` of the product ``|u>|l>``, gamma = 1/2."""
    upper = as_state(upper)
    lower = as_state(lower)
    if upper.size != lower.size:
        raise ValidationError("upper and lower factors must have the same qubit count")
    psi = np.concatenate([upper, lower.conj()]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    return DmseDensity(num_qubits(upper.size), rho, 0.5, BipartiteState.product(upper, lower))


def gamma_bound(a: BipartiteState) -> float:
    return 1.0 / (2.0 * trace_norm(a.matrix))
