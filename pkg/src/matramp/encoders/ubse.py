"""Unitary block state encodings: unitaries whose ancilla-zero block is lambda * M[|B>]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..config import TOL_NORM
from ..errors import ValidationError
from ..matrixize import BipartiteState, vectorize
from ..qcore import I2, X, Y, Z, check_budget, is_unitary, kron_all, num_qubits

BELL_PAULIS = {
    "phi+": I2,
    "phi-": Z,
    "psi+": X,
    "psi-": 1j * Y,
}


@dataclass(frozen=True)
class UbseOperator:
    """A unitary on ``n + k`` qubits (system first, ancilla last) encoding ``lam * B``."""

    n: int
    k: int
    unitary: np.ndarray
    lam: float
    b: BipartiteState | None = None

    def block(self) -> np.ndarray:
        """``(I_n (x) <0|_k) U (I_n (x) |0>_k)``."""
        d, a = 1 << self.n, 1 << self.k
        return self.unitary.reshape(d, a, d, a)[:, 0, :, 0]

    def with_lambda(self, lam: float) -> "UbseOperator":
        return UbseOperator(self.n, self.k, self.unitary, lam, self.b)


def _state_preparation(amplitudes: np.ndarray) -> np.ndarray:
    """Unitary whose first column is ``amplitudes`` (a Householder reflection up to phase)."""
    t = np.asarray(amplitudes, dtype=complex)
    d = t.size
    phase = np.exp(1j * np.angle(t[0])) if abs(t[0]) > 0 else 1.0
    e0 = np.zeros(d, dtype=complex)
    e0[0] = phase
    w = e0 - t
    if np.linalg.norm(w) < 1e-15:
        return np.eye(d, dtype=complex)
    refl = np.eye(d) - 2 * np.outer(w, w.conj()) / np.vdot(w, w)
    return refl * phase


def ubse_from_decomposition(components: Sequence[tuple]) -> UbseOperator:
    """Block-encode ``|B> = sum_i c_i 2^{-n/2} vec(V_i)`` with an LCU circuit.

    Args:
        components: pairs ``(c_i, V_i)`` of complex weights and n-qubit unitaries.
            The weighted sum must describe a unit-norm state.

    Returns:
        ``U_B = (I (x) T^dag) Q (I (x) T)`` with ``lam = 2^{n/2} / sum_i |c_i|``.
    """
    if not components:
        raise ValidationError("no components given")
    coeffs = np.array([complex(c) for c, _ in components])
    mats = [np.asarray(v, dtype=complex) for _, v in components]
    if np.all(np.abs(coeffs) == 0):
        raise ValidationError("all coefficients are zero")
    n = num_qubits(mats[0].shape[0])
    for v in mats:
        if v.shape != mats[0].shape or not is_unitary(v):
            raise ValidationError("every component must be an n-qubit unitary")
    d = 1 << n
    b_mat = sum(c * v for c, v in zip(coeffs, mats)) / np.sqrt(d)
    norm = np.linalg.norm(b_mat)
    if abs(norm - 1) > 1e-8:
        raise ValidationError(f"components describe a state of norm {norm:.6g}, not 1")

    count = len(mats)
    k = int(np.ceil(np.log2(count))) if count > 1 else 0
    check_budget(n + k)
    a = 1 << k
    weights = np.zeros(a)
    weights[:count] = np.sqrt(np.abs(coeffs))
    t = _state_preparation(weights / np.linalg.norm(weights))

    q = np.zeros((d, a, d, a), dtype=complex)
    for i in range(a):
        if i < count and abs(coeffs[i]) > 0:
            q[:, i, :, i] = coeffs[i] / abs(coeffs[i]) * mats[i]
        else:
            q[:, i, :, i] = np.eye(d)
    q = q.reshape(d * a, d * a)
    it = np.kron(np.eye(d), t)
    unitary = it.conj().T @ q @ it
    lam = np.sqrt(d) / np.sum(np.abs(coeffs))
    return UbseOperator(n, k, unitary, float(lam), BipartiteState(vectorize(b_mat)))


def ubse_from_bell_label(labels: Sequence[str]) -> UbseOperator:
    """UBSE of a Bell-basis state; pair i joins upper qubit i with lower qubit n+i.

    Labels are ``phi+``, ``phi-``, ``psi+`` or ``psi-``. The encoding is the
    tensor product of the matching Paulis, with ``lam = 2^{n/2}``.
    """
    try:
        paulis = [BELL_PAULIS[s.strip().lower()] for s in labels]
    except KeyError as exc:
        raise ValidationError(f"unknown Bell label {exc.args[0]!r}") from None
    n = len(paulis)
    u = kron_all(paulis)
    b = BipartiteState(vectorize(u / np.sqrt(1 << n)))
    return UbseOperator(n, 0, u, float(2 ** (n / 2)), b)


def verify_ubse(u: UbseOperator, b: BipartiteState | None = None) -> float:
    """Frobenius residual ``||block - lam B||``; certified when below TOL_NORM."""
    b = u.b if b is None else b
    if b is None:
        raise ValidationError("no target state to verify against")
    if b.n != u.n:
        raise ValidationError(f"size mismatch: UBSE n={u.n}, state n={b.n}")
    return float(np.linalg.norm(u.block() - u.lam * b.matrix))


def certify_ubse(u: UbseOperator, tol: float = TOL_NORM) -> bool:
    return is_unitary(u.unitary) and verify_ubse(u) <= tol
