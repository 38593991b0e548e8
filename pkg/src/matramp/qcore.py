"""Dense linear algebra on qubit registers.

States are complex 1-D arrays of length ``2**q`` and operators are complex
square arrays. Qubit 0 is the most significant bit of a basis label, so a
register ``[q0, q1, ...]`` is laid out exactly as ``np.kron(op0, op1, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .config import TOL_NORM, TOL_RANK, max_qubits
from .errors import DimensionError, ResourceLimitError, ValidationError

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def num_qubits(dim: int) -> int:
    """Return ``q`` with ``2**q == dim`` or raise DimensionError."""
    q = int(dim).bit_length() - 1
    if dim < 1 or 1 << q != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return q


def check_budget(qubits: int) -> None:
    limit = max_qubits()
    if qubits > limit:
        raise ResourceLimitError(
            f"register of {qubits} qubits exceeds MAX_QUBITS={limit}"
        )


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the register-size guard."""
    a = np.asarray(a)
    b = np.asarray(b)
    rows = a.shape[0] * b.shape[0]
    if rows > 1 and (rows & (rows - 1)) == 0:
        check_budget(num_qubits(rows))
    return np.kron(a, b)


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    ops = list(ops)
    if not ops:
        return np.ones((1, 1), dtype=complex)
    return reduce(tensor, ops)


def pauli_string(label: str) -> np.ndarray:
    """Matrix of a Pauli string such as ``"XIZ"`` (leftmost = qubit 0)."""
    try:
        return kron_all(PAULIS[c] for c in label.upper())
    except KeyError as exc:
        raise ValidationError(f"bad Pauli label {label!r}") from exc


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_unitary(m: np.ndarray, tol: float = TOL_NORM) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.abs(dagger(m) @ m - np.eye(m.shape[0])).max() <= tol


def is_hermitian(m: np.ndarray, tol: float = TOL_NORM) -> bool:
    return np.abs(m - dagger(m)).max() <= tol


def as_state(vec, tol: float = TOL_NORM) -> np.ndarray:
    """Validate a normalized state vector and return it as complex array."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    num_qubits(vec.size)
    if not np.all(np.isfinite(vec)):
        raise ValidationError("state has non-finite entries")
    if abs(np.linalg.norm(vec) - 1) > tol:
        raise ValidationError(f"state norm {np.linalg.norm(vec)!r} is not 1")
    return vec


def as_density(rho, tol: float = TOL_NORM) -> np.ndarray:
    """Validate a density matrix (Hermitian, PSD, unit trace)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    num_qubits(rho.shape[0])
    if not is_hermitian(rho, tol):
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValidationError(f"trace {np.trace(rho).real!r} is not 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValidationError("density matrix is not positive semidefinite")
    return rho


def projector(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, np.conj(vec))


def embed(gate: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Lift a gate acting on ``qubits`` (in the given order) to an n-qubit operator."""
    gate = np.asarray(gate, dtype=complex)
    k = len(qubits)
    if gate.shape != (1 << k, 1 << k):
        raise DimensionError(f"gate shape {gate.shape} does not match {k} qubits")
    if len(set(qubits)) != k or min(qubits) < 0 or max(qubits) >= n:
        raise DimensionError(f"qubits {list(qubits)} invalid for a {n}-qubit register")
    check_budget(n)
    rest = [q for q in range(n) if q not in qubits]
    full = np.kron(gate, np.eye(1 << len(rest), dtype=complex))
    order = list(qubits) + rest
    # full acts on the permuted register; move axes back to natural order
    perm = np.argsort(order)
    t = full.reshape([2] * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(1 << n, 1 << n)


def apply_to_state(gate: np.ndarray, qubits: Sequence[int], state: np.ndarray) -> np.ndarray:
    """Apply a k-qubit gate to selected qubits of a state vector via tensor contraction."""
    n = num_qubits(state.size)
    k = len(qubits)
    psi = state.reshape([2] * n)
    g = np.asarray(gate, dtype=complex).reshape([2] * (2 * k))
    psi = np.tensordot(g, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the gate's output axes first
    rest = [q for q in range(n) if q not in qubits]
    order = list(qubits) + rest
    return psi.transpose(np.argsort(order)).reshape(-1)


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the qubits listed in ``keep`` (kept in ascending order)."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise ValidationError("keep mask is empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValidationError(f"keep mask {keep} outside a {n}-qubit register")
    drop = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    t = t.transpose(keep + drop + [n + q for q in keep] + [n + q for q in drop])
    dk, dd = 1 << len(keep), 1 << len(drop)
    return np.einsum("iaja->ij", t.reshape(dk, dd, dk, dd))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form ``sum_i c_i |left_i>|right_i>`` with descending coefficients."""

    coefficients: np.ndarray
    left_basis: np.ndarray  # columns are the left vectors
    right_basis: np.ndarray  # columns are the right vectors

    def reconstruct(self) -> np.ndarray:
        return np.einsum("i,ai,bi->ab", self.coefficients, self.left_basis,
                         self.right_basis).reshape(-1)


def schmidt(state: np.ndarray, cut: int, tol: float = TOL_RANK) -> SchmidtDecomposition:
    """Schmidt decomposition across the cut after the first ``cut`` qubits."""
    state = np.asarray(state, dtype=complex).reshape(-1)
    n = num_qubits(state.size)
    if not 0 < cut < n:
        raise ValidationError(f"cut {cut} must lie strictly inside {n} qubits")
    u, s, vh = np.linalg.svd(state.reshape(1 << cut, 1 << (n - cut)))
    r = max(1, int(np.sum(s > tol)))
    return SchmidtDecomposition(s[:r], u[:, :r], vh[:r].T)


def singular_values(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.atleast_2d(m), compute_uv=False)


def trace_norm(m: np.ndarray) -> float:
    return float(np.sum(singular_values(m)))


def spectral_norm(m: np.ndarray) -> float:
    return float(np.max(singular_values(m)))


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators differ in shape")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def qubits(self) -> int:
        return num_qubits(self.kraus_ops[0].shape[1])

    def is_trace_preserving(self, tol: float = TOL_NORM) -> bool:
        total = sum(dagger(k) @ k for k in self.kraus_ops)
        return np.abs(total - np.eye(total.shape[0])).max() <= tol

    def choi(self) -> np.ndarray:
        """Choi matrix ``sum_ij |i><j| (x) C(|i><j|)``."""
        # row-major vec of K^T is (I (x) K) sum_i |i>|i>, ordered (input, output)
        vecs = [k.T.reshape(-1) for k in self.kraus_ops]
        return sum(np.outer(v, np.conj(v)) for v in vecs)


def apply_channel(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != ch.kraus_ops[0].shape[1]:
        raise DimensionError(
            f"channel input dim {ch.kraus_ops[0].shape[1]} != state dim {rho.shape[0]}"
        )
    return sum(k @ rho @ dagger(k) for k in ch.kraus_ops)


def purify(rho: np.ndarray, tol: float = TOL_RANK) -> np.ndarray:
    """Purification ``sum_j sqrt(p_j) |e_j>|j>`` with the ancilla appended last.

    The ancilla has ``ceil(log2(rank))`` qubits, so a pure input comes back
    with no ancilla at all.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(rho)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    rank = max(1, int(np.sum(w > tol)))
    m = int(np.ceil(np.log2(rank))) if rank > 1 else 0
    check_budget(num_qubits(rho.shape[0]) + m)
    amps = np.zeros((rho.shape[0], 1 << m), dtype=complex)
    amps[:, :rank] = v[:, :rank] * np.sqrt(np.clip(w[:rank], 0, None))
    psi = amps.reshape(-1)
    return psi / np.linalg.norm(psi)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_rngs(seed, count: int) -> list:
    """Independent child streams; identical for a given seed whatever the execution order."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def haar_random_unitary(qubits: int, rng) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    rng = make_rng(rng)
    check_budget(qubits)
    d = 1 << qubits
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_state(qubits: int, rng) -> np.ndarray:
    rng = make_rng(rng)
    d = 1 << qubits
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(qubits: int, rng, rank: int | None = None) -> np.ndarray:
    rng = make_rng(rng)
    d = 1 << qubits
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)
