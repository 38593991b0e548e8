"""Canonical (KAK) decomposition of two-qubit gates and their operator Schmidt data.

Every two-qubit unitary factors as ``(A0 (x) A1) exp(i(tx XX + ty YY + tz ZZ)) (B0 (x) B1)``.
The interaction coefficients are brought into the Weyl chamber
``pi/4 >= tx >= ty >= |tz|`` with ``tz >= 0`` whenever ``tx = pi/4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import TOL_NORM
from ..errors import ValidationError
from ..qcore import X, Y, Z, is_unitary

MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)
MAGIC_DAG = MAGIC.conj().T

_SIGMAS = (X, Y, Z)
_SIGMA_PAIRS = tuple(np.kron(s, s) for s in _SIGMAS)
# diagonal of XX, YY, ZZ in the magic basis, one row per basis vector
_MAGIC_SIGNS = np.array([np.diag(MAGIC_DAG @ p @ MAGIC).real for p in _SIGMA_PAIRS]).T
_PHASE_SYSTEM = np.column_stack([np.ones(4), _MAGIC_SIGNS])


def interaction(theta) -> np.ndarray:
    """``exp(i(tx XX + ty YY + tz ZZ))``; the three terms commute."""
    diag = np.exp(1j * (_MAGIC_SIGNS @ np.asarray(theta, dtype=float)))
    return MAGIC @ np.diag(diag) @ MAGIC_DAG


@dataclass(frozen=True)
class CanonicalGate:
    """Canonical form ``kron(*pre_locals) @ interaction(theta) @ kron(*post_locals)``.

    ``pre_locals`` is the left-hand pair (applied last in time) and carries the
    global phase; ``post_locals`` is applied first. ``schmidt_s`` and
    ``schmidt_phases`` expand the interaction as ``sum_P s_P e^{i phi_P} P (x) P``
    over ``P = I, X, Y, Z``.
    """

    theta: tuple
    pre_locals: tuple
    post_locals: tuple
    schmidt_s: np.ndarray
    schmidt_phases: np.ndarray

    @property
    def interaction(self) -> np.ndarray:
        return interaction(self.theta)

    def reconstruct(self) -> np.ndarray:
        pre = np.kron(*self.pre_locals)
        post = np.kron(*self.post_locals)
        return pre @ self.interaction @ post

    @property
    def eta(self) -> float:
        return float(1.0 / np.sum(self.schmidt_s))


def pauli_expansion(theta):
    """Magnitudes and phases of the I, XX, YY, ZZ coefficients of ``interaction(theta)``."""
    g = interaction(theta)
    coeffs = np.array(
        [np.trace(g) / 4] + [np.trace(p @ g) / 4 for p in _SIGMA_PAIRS]
    )
    s = np.abs(coeffs)
    phases = np.where(s > 1e-14, np.angle(coeffs), 0.0)
    return s, phases


def kron_factor(m: np.ndarray) -> tuple:
    """Split ``m = a (x) b`` for a 4x4 ``m`` that is (numerically) a product of 2x2 unitaries."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = u[:, 0].reshape(2, 2) * np.sqrt(2)
    b = vh[0].reshape(2, 2) * (s[0] / np.sqrt(2))
    return a, b


def _real_diagonalizer(s: np.ndarray) -> np.ndarray:
    """Real orthogonal P with det 1 such that P^T s P is diagonal, for symmetric unitary s."""
    re, im = s.real, s.imag
    for c in (0.6180339887, 1.4142135623, -0.7071067812, 2.7182818284, 0.3183098862):
        _, p = np.linalg.eigh(re + c * im)
        d = p.T @ s @ p
        if np.abs(d - np.diag(np.diag(d))).max() < 1e-9:
            break
    else:
        raise ValidationError("could not diagonalize the magic-basis Gram matrix")
    if np.linalg.det(p) < 0:
        p[:, 0] = -p[:, 0]
    return p


class _Builder:
    """Mutable ``phase * (l0 (x) l1) exp(i v.sigma sigma) (r0 (x) r1)`` during canonicalization."""

    def __init__(self, phase, l0, l1, v, r0, r1):
        self.phase = phase
        self.l0, self.l1 = l0, l1
        self.v = np.array(v, dtype=float)
        self.r0, self.r1 = r0, r1

    def shift(self, k: int, step: int) -> None:
        """Add ``step * pi/2`` to axis k, compensating with sigma_k on both right locals."""
        self.v[k] += step * np.pi / 2
        p = _SIGMAS[k]
        # exp(i pi/2 PP) = i PP
        if step % 2:
            self.phase *= (-1j) ** step
            self.r0 = p @ self.r0
            self.r1 = p @ self.r1
        else:
            self.phase *= (-1) ** (step // 2)

    def negate(self, k1: int, k2: int) -> None:
        """Flip the signs of axes k1 and k2 by conjugating qubit 1 with the remaining Pauli."""
        other = _SIGMAS[3 - k1 - k2]
        self.v[k1] = -self.v[k1]
        self.v[k2] = -self.v[k2]
        self.l1 = self.l1 @ other
        self.r1 = other @ self.r1

    def swap(self, k1: int, k2: int) -> None:
        """Exchange axes k1 and k2 using the Hadamard-like rotation between them."""
        h = (_SIGMAS[k1] + _SIGMAS[k2]) / np.sqrt(2)
        self.v[k1], self.v[k2] = self.v[k2], self.v[k1]
        self.l0, self.l1 = self.l0 @ h, self.l1 @ h
        self.r0, self.r1 = h @ self.r0, h @ self.r1

    def canonicalize(self) -> None:
        # reduce each coefficient to (-pi/4, pi/4]
        for k in range(3):
            step = int(np.round(-self.v[k] / (np.pi / 2)))
            if step:
                self.shift(k, step)
            if self.v[k] <= -np.pi / 4 + 1e-12:
                self.shift(k, 1)
        # sort by magnitude, largest first
        for _ in range(3):
            for k in range(2):
                if abs(self.v[k]) < abs(self.v[k + 1]) - 1e-13:
                    self.swap(k, k + 1)
        # make the first two non-negative
        if self.v[0] < 0:
            self.negate(0, 2)
        if self.v[1] < 0:
            self.negate(1, 2)
        # on the chamber edge tx = pi/4 the sign of tz is a free choice
        if abs(self.v[0] - np.pi / 4) < 1e-12 and self.v[2] < 0:
            self.shift(0, -1)
            self.negate(0, 2)


def canonical_decompose(g: np.ndarray) -> CanonicalGate:
    """Canonical decomposition of a 4x4 unitary via the magic basis.

    Raises:
        ValidationError: if ``g`` is not a 4x4 unitary.
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (4, 4) or not is_unitary(g, 1e-8):
        raise ValidationError("canonical_decompose needs a 4x4 unitary")
    u_b = MAGIC_DAG @ g @ MAGIC
    p = _real_diagonalizer(u_b.T @ u_b)
    d = np.sqrt(np.diag(p.T @ u_b.T @ u_b @ p))
    k1 = u_b @ p @ np.diag(1 / d)
    if np.linalg.det(k1).real < 0:
        d[0] = -d[0]
        k1[:, 0] = -k1[:, 0]
    # g = (M k1 M^dag) (M diag(d) M^dag) (M p^T M^dag), outer factors are local
    l0, l1 = kron_factor(MAGIC @ k1.real @ MAGIC_DAG)
    r0, r1 = kron_factor(MAGIC @ p.T @ MAGIC_DAG)
    w, *v = np.linalg.solve(_PHASE_SYSTEM, np.angle(d))

    b = _Builder(np.exp(1j * w), l0, l1, v, r0, r1)
    b.canonicalize()
    theta = tuple(float(t) + 0.0 for t in b.v)
    pre = (b.phase * b.l0, b.l1)
    post = (b.r0, b.r1)
    # absorb the residual factorization phase so the reconstruction is exact
    approx = np.kron(*pre) @ interaction(theta) @ np.kron(*post)
    ratio = np.vdot(approx, g) / 4
    pre = (pre[0] * ratio / abs(ratio), pre[1])
    s, phases = pauli_expansion(theta)
    out = CanonicalGate(theta, pre, post, s, phases)
    err = np.abs(out.reconstruct() - g).max()
    if err > 1e-8:
        raise ValidationError(f"canonical reconstruction failed (residual {err:.2e})")
    return out


def operator_schmidt_coefficients(g: np.ndarray) -> np.ndarray:
    """Operator Schmidt coefficients of a 4x4 operator w.r.t. trace-normalized operator bases."""
    g = np.asarray(g, dtype=complex)
    r = g.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    return np.linalg.svd(r, compute_uv=False)


def entangling_power_schmidt(g: np.ndarray) -> float:
    """``H_{1/2,s} = 2 log2(sum_i s_i) - 2`` for a two-qubit unitary."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (4, 4) or not is_unitary(g, TOL_NORM * 100):
        raise ValidationError("entangling_power_schmidt needs a 4x4 unitary")
    s = operator_schmidt_coefficients(g)
    return float(max(2 * np.log2(np.sum(s)) - 2, 0.0))

