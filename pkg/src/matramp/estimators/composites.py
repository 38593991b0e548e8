"""Composite unitaries that turn a UBSE into Hadamard-test and amplitude-estimation circuits.

Registers, most significant first:

* s.q.l.: ``[a1, a2, flag, n, k]`` (``3 + n + k`` qubits)
* h.l.:   ``[c, a1, a2, m, flag, n, k]``
"""

from __future__ import annotations

import numpy as np

from ..encoders.ubse import UbseOperator
from ..qcore import H, X, Y, check_budget, dagger, num_qubits
from .tasks import EstimationTask, check_part

_COEFFS = {
    "real": (1, 1j, 1, -1j),
    "imag": (1j, -1, -1j, -1),
}


def build_W(u: UbseOperator, part: str) -> np.ndarray:
    """Sum of the four controlled terms ``|ab><ab| (x) c_ab P_ab (x) U_B^(dag)``."""
    check_part(part)
    check_budget(3 + u.n + u.k)
    ub = u.unitary
    ops = (ub, ub, dagger(ub), dagger(ub))
    paulis = (X, Y, X, Y)
    out = 0
    for idx, (c, p, v) in enumerate(zip(_COEFFS[part], paulis, ops)):
        proj = np.zeros((4, 4), dtype=complex)
        proj[idx, idx] = 1
        out = out + np.kron(proj, np.kron(c * p, v))
    return out


def build_U1(u: UbseOperator, part: str) -> np.ndarray:
    """``(H (x) H (x) I) W (H (x) H (x) I)``; its zero-zero block is ``1/2 [[0, lam B], [lam B^dag, 0]]``."""
    w = build_W(u, part)
    hh = np.kron(np.kron(H, H), np.eye(w.shape[0] // 4))
    return hh @ w @ hh


def sql_block(u1: np.ndarray, n: int, k: int) -> np.ndarray:
    """``(<00| (x) I (x) <0|_k) U1 (|00> (x) I (x) |0>_k)`` on the flag and system qubits."""
    s, a = 1 << (1 + n), 1 << k
    return u1.reshape(4, s, a, 4, s, a)[0, :, 0, 0, :, 0]


def _controlled_u1(u1: np.ndarray, m: int, x: np.ndarray) -> np.ndarray:
    """Apply ``I_m (x) U1`` with the m register sitting between a1a2 and the rest."""
    rest = u1.shape[0] // 4
    x = x.reshape(4, 1 << m, rest)
    t = u1.reshape(4, rest, 4, rest)
    return np.einsum("arbs,bms->amr", t, x, optimize=True).reshape(-1)


def apply_U2(u1: np.ndarray, m: int, vec: np.ndarray) -> np.ndarray:
    """Matrix-free ``U_{B,r2} vec = (H (x) I) V (H (x) I) vec`` with ``V = |0><0| I + |1><1| I_m U1``."""
    vec = np.asarray(vec, dtype=complex).reshape(2, -1)
    plus = (vec[0] + vec[1]) / np.sqrt(2)
    minus = (vec[0] - vec[1]) / np.sqrt(2)
    minus = _controlled_u1(u1, m, minus)
    return np.concatenate([(plus + minus) / np.sqrt(2), (plus - minus) / np.sqrt(2)])


def build_U2(u: UbseOperator, part: str, m: int) -> np.ndarray:
    """Dense ``U_{B,r2}`` (or ``i2``) on ``1 + 2 + m + 1 + n + k`` qubits."""
    total = 4 + m + u.n + u.k
    check_budget(total)
    u1 = build_U1(u, part)
    dim = 1 << total
    eye = np.eye(dim, dtype=complex)
    cols = [apply_U2(u1, m, eye[:, j]) for j in range(dim)]
    return np.array(cols).T


def hl_block(u2: np.ndarray, n: int, k: int, m: int) -> np.ndarray:
    """``<0|_c <00| <0|_k U2 |0>_c |00> |0>_k`` acting on ``(m, flag, n)``."""
    s, a = 1 << (m + 1 + n), 1 << k
    return u2.reshape(8, s, a, 8, s, a)[0, :, 0, 0, :, 0]


def exact_sql_expectation(task: EstimationTask) -> float:
    """``Tr(U1 |00><00| (x) rho_A (x) |0><0|_k)``, equal to ``gamma lam mu``."""
    check_budget(3 + task.n + task.ubse.k)
    u1 = build_U1(task.ubse, task.target)
    block = sql_block(u1, task.n, task.ubse.k)
    return float(np.trace(block @ task.dmse.rho).real)


def hl_input_state(task: EstimationTask) -> np.ndarray:
    """``|0>_c |00> |S_A> |0>_k``."""
    sa = task.state_sa
    k = task.ubse.k
    check_budget(3 + num_qubits(sa.size) + k)
    psi = np.zeros((8, sa.size, 1 << k), dtype=complex)
    psi[0, :, 0] = sa
    return psi.reshape(-1)


def exact_hl_amplitude(task: EstimationTask) -> float:
    """``a = |<psi| U2 |psi>|`` for ``psi = |0 S_A 0>``; equal to ``1/2 + gamma lam mu / 2``."""
    u1 = build_U1(task.ubse, task.target)
    psi = hl_input_state(task)
    return float(abs(np.vdot(psi, apply_U2(u1, task.m, psi))))


class GroverOperator:
    """``Q = -(I - 2 phi phi^dag)(I - 2 psi psi^dag)`` with ``phi = U2 psi``, applied matrix-free."""

    def __init__(self, task: EstimationTask):
        u1 = build_U1(task.ubse, task.target)
        self.psi = hl_input_state(task)
        self.phi = apply_U2(u1, task.m, self.psi)
        self.amplitude = float(abs(np.vdot(self.psi, self.phi)))

    @property
    def dim(self) -> int:
        return self.psi.size

    @property
    def theta(self) -> float:
        return float(np.arcsin(min(self.amplitude, 1.0)))

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = v - 2 * self.psi * np.vdot(self.psi, v)
        v = v - 2 * self.phi * np.vdot(self.phi, v)
        return -v

    def matrix(self) -> np.ndarray:
        check_budget(num_qubits(self.dim))
        eye = np.eye(self.dim)
        return -(eye - 2 * np.outer(self.phi, self.phi.conj())) @ (
            eye - 2 * np.outer(self.psi, self.psi.conj())
        )

    def success_probability(self, j: int) -> float:
        """``|<psi| Q^j phi>|^2`` by repeated application."""
        v = self.phi
        for _ in range(j):
            v = self.apply(v)
        return float(abs(np.vdot(self.psi, v)) ** 2)


def grover_operator(task: EstimationTask) -> np.ndarray:
    return GroverOperator(task).matrix()
