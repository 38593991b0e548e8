"""Circuit and Pauli-Hamiltonian descriptions over a 2n-qubit register split at n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import ValidationError
from ..qcore import H, I2, X, Y, Z, embed, is_unitary, pauli_string

FIXED_GATES = {
    "h": H,
    "x": X,
    "y": Y,
    "z": Z,
    "s": np.diag([1, 1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]),
    "cnot": np.eye(4, dtype=complex)[[0, 1, 3, 2]],
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.eye(4, dtype=complex)[[0, 2, 1, 3]],
}
ROTATIONS = {"rx": X, "ry": Y, "rz": Z}


def rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    """``exp(-i angle/2 P)`` for a Pauli P."""
    return math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * axis


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple
    matrix: np.ndarray = field(repr=False)
    params: tuple = ()

    @classmethod
    def make(cls, name: str, qubits, params=(), matrix=None) -> "Gate":
        name = name.lower()
        qubits = tuple(int(q) for q in qubits)
        params = tuple(float(p) for p in params)
        if name in FIXED_GATES:
            mat = FIXED_GATES[name]
        elif name in ROTATIONS:
            if len(params) != 1:
                raise ValidationError(f"{name} takes exactly one angle")
            mat = rotation(ROTATIONS[name], params[0])
        elif name == "matrix":
            if matrix is None:
                raise ValidationError("matrix gate needs an explicit matrix")
            mat = np.asarray(matrix, dtype=complex)
        else:
            raise ValidationError(f"unknown gate {name!r}")
        if mat.shape != (1 << len(qubits),) * 2:
            raise ValidationError(f"gate {name} does not fit qubits {list(qubits)}")
        if len(qubits) > 2:
            raise ValidationError("gates may act on at most two qubits")
        if len(set(qubits)) != len(qubits):
            raise ValidationError(f"repeated qubit in {list(qubits)}")
        if not is_unitary(mat, 1e-9):
            raise ValidationError(f"gate {name} is not unitary")
        return cls(name, qubits, mat, params)


@dataclass(frozen=True)
class CircuitIR:
    """An ordered gate list on 2n qubits; qubits < n form the upper half."""

    n: int
    gates: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if min(g.qubits) < 0 or max(g.qubits) >= 2 * self.n:
                raise ValidationError(f"gate {g.name} on {list(g.qubits)} outside 2n={2 * self.n}")

    def is_interaction(self, gate: Gate) -> bool:
        sides = {q < self.n for q in gate.qubits}
        return len(sides) == 2

    @property
    def interaction_flags(self) -> list:
        return [self.is_interaction(g) for g in self.gates]

    def unitary(self) -> np.ndarray:
        u = np.eye(1 << (2 * self.n), dtype=complex)
        for g in self.gates:
            u = embed(g.matrix, g.qubits, 2 * self.n) @ u
        return u


def _is_identity_label(label: str) -> bool:
    return set(label) <= {"I"}


@dataclass(frozen=True)
class PauliHamiltonian:
    """``H = sum_i h_i P_i`` on 2n qubits evolved for time t with r first-order Trotter steps."""

    n: int
    terms: tuple
    t: float
    r: int | None = None

    def __post_init__(self):
        terms = []
        for coeff, label in self.terms:
            label = str(label).upper()
            if len(label) != 2 * self.n or not set(label) <= set("IXYZ"):
                raise ValidationError(f"bad Pauli string {label!r} for 2n={2 * self.n}")
            terms.append((float(coeff), label))
        object.__setattr__(self, "terms", tuple(terms))
        if self.r is None:
            steps = max(1, math.ceil(100 * self.norm * self.t))
            object.__setattr__(self, "r", steps)
        elif int(self.r) < 1:
            raise ValidationError("r must be at least 1")
        else:
            object.__setattr__(self, "r", int(self.r))

    def is_interaction(self, label: str) -> bool:
        return not _is_identity_label(label[: self.n]) and not _is_identity_label(label[self.n:])

    @property
    def norm(self) -> float:
        return float(sum(abs(h) for h, _ in self.terms))

    @cached_property
    def interaction_norm(self) -> float:
        return float(sum(abs(h) for h, p in self.terms if self.is_interaction(p)))

    def matrix(self) -> np.ndarray:
        return sum(h * pauli_string(p) for h, p in self.terms)

    def trotter_unitary(self) -> np.ndarray:
        """Dense first-order product formula, term 0 applied first within each step."""
        tau = self.t / self.r
        step = np.eye(1 << (2 * self.n), dtype=complex)
        for h, p in self.terms:
            step = (math.cos(h * tau) * np.eye(step.shape[0])
                    - 1j * math.sin(h * tau) * pauli_string(p)) @ step
        return np.linalg.matrix_power(step, self.r)
