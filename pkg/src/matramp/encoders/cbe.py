"""Channel block encodings: block-diagonal unitary mixtures acting on a DMSE register.

A channel ``rho -> sum_i p_i D_i rho D_i^dag`` with ``D_i = diag(K_i, L_i)`` maps the
upper-right block ``gamma A`` to ``gamma sum_i p_i K_i A L_i^dag``. In the vector
picture this is ``gamma (sum_i p_i K_i (x) L_i^*) |A>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import TOL_NORM
from ..errors import ValidationError
from ..qcore import I2, X, Y, Z, dagger, embed, pauli_string
from .canonical import CanonicalGate, canonical_decompose
from .dmse import DmseDensity
from .programs import CircuitIR, PauliHamiltonian

_PAULI_TERMS = (I2, X, Y, Z)
DROP_TOL = 1e-12


@dataclass(frozen=True)
class VecChannel:
    """Mixture of pairs ``(K_i, L_i, p_i)`` on n qubits with efficiency ``eta``."""

    n: int
    pairs: tuple
    eta: float
    eps: float = 0.0
    label: str = ""

    def action(self) -> np.ndarray:
        """``sum_i p_i K_i (x) conj(L_i)`` on the 2n-qubit vector space."""
        return sum(p * np.kron(k, l.conj()) for k, l, p in self.pairs)

    def block_map(self, a: np.ndarray) -> np.ndarray:
        """Image of an upper-right block under the channel."""
        return sum(p * k @ a @ dagger(l) for k, l, p in self.pairs)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = 1 << self.n
        out = np.zeros_like(rho, dtype=complex)
        for k, l, p in self.pairs:
            # D rho D^dag with D = diag(K, L), block by block
            out[:d, :d] += p * k @ rho[:d, :d] @ dagger(k)
            out[:d, d:] += p * k @ rho[:d, d:] @ dagger(l)
            out[d:, :d] += p * l @ rho[d:, :d] @ dagger(k)
            out[d:, d:] += p * l @ rho[d:, d:] @ dagger(l)
        return out

    def kraus(self) -> list:
        d = 1 << self.n
        ops = []
        for k, l, p in self.pairs:
            op = np.zeros((2 * d, 2 * d), dtype=complex)
            op[:d, :d] = k
            op[d:, d:] = l
            ops.append(math.sqrt(p) * op)
        return ops

    def trace_preservation_error(self) -> float:
        eye = np.eye(1 << self.n)
        ek = sum(p * dagger(k) @ k for k, _, p in self.pairs) - eye
        el = sum(p * dagger(l) @ l for _, l, p in self.pairs) - eye
        return float(max(np.abs(ek).max(), np.abs(el).max()))


@dataclass(frozen=True)
class CompiledChannel:
    """A sequence of VecChannels applied first to last."""

    n: int
    stages: tuple = field(default_factory=tuple)

    @property
    def eta(self) -> float:
        return float(np.prod([s.eta for s in self.stages])) if self.stages else 1.0

    def action(self) -> np.ndarray:
        out = np.eye(1 << (2 * self.n), dtype=complex)
        for s in self.stages:
            out = s.action() @ out
        return out

    def apply(self, rho) -> np.ndarray:
        rho = rho.rho if isinstance(rho, DmseDensity) else np.asarray(rho, dtype=complex)
        for s in self.stages:
            rho = s.apply(rho)
        return rho

    def block_map(self, a: np.ndarray) -> np.ndarray:
        for s in self.stages:
            a = s.block_map(a)
        return a

    def __add__(self, other: "CompiledChannel") -> "CompiledChannel":
        if other.n != self.n:
            raise ValidationError("cannot compose channels of different sizes")
        return CompiledChannel(self.n, self.stages + other.stages)


def local_channel(n: int, upper: np.ndarray | None = None,
                  lower: np.ndarray | None = None, label: str = "") -> VecChannel:
    """Deterministic pair for a gate ``upper (x) lower`` that does not cross the cut.

    The stored L is the conjugate of the lower-half gate, so the action is exact.
    """
    d = 1 << n
    k = np.eye(d, dtype=complex) if upper is None else np.asarray(upper, dtype=complex)
    l = np.eye(d, dtype=complex) if lower is None else np.conj(lower)
    return VecChannel(n, ((k, l, 1.0),), 1.0, 0.0, label)


def cbe_pauli_sum(n: int, terms, label: str = "") -> VecChannel:
    """Optimal mixture for ``O = sum_i g_i P_i (x) Q_i`` with unitary P_i, Q_i.

    The phase of ``g_i`` is absorbed into ``K_i``; weights are ``|g_i| / sum|g|``
    and the efficiency is ``1 / sum|g|``.
    """
    kept = [(complex(g), p, q) for g, p, q in terms if abs(g) > DROP_TOL]
    if not kept:
        raise ValidationError("operator has no non-zero terms")
    total = sum(abs(g) for g, _, _ in kept)
    pairs = tuple(
        (g / abs(g) * np.asarray(p, dtype=complex), np.conj(q), abs(g) / total)
        for g, p, q in kept
    )
    return VecChannel(n, pairs, float(1.0 / total), 0.0, label)


def cbe_canonical_gate(g: CanonicalGate, n: int = 1, upper: int = 0, lower: int = 0,
                       with_locals: bool = True) -> VecChannel:
    """Channel for a canonical-form gate between upper qubit ``upper`` and lower qubit ``lower``.

    With ``with_locals`` the gate's local factors are folded into each pair so
    the action is ``eta_G * G``; otherwise only the interaction part is encoded.
    The pairs for the interaction alone are ``(e^{i phi} P, conj(P))``, which gives
    ``-Y`` on the lower side for the YY term.
    """
    if with_locals:
        a0, a1 = g.pre_locals
        b0, b1 = g.post_locals
    else:
        a0 = a1 = b0 = b1 = I2
    terms = []
    for s, phi, p in zip(g.schmidt_s, g.schmidt_phases, _PAULI_TERMS):
        if s <= DROP_TOL:
            continue
        k = embed(a0 @ p @ b0, [upper], n)
        q = embed(a1 @ p @ b1, [lower], n)
        terms.append((s * np.exp(1j * phi), k, q))
    return cbe_pauli_sum(n, terms, label="canonical")


def _gate_channel(circ: CircuitIR, gate) -> VecChannel:
    n = circ.n
    qs = gate.qubits
    if all(q < n for q in qs):
        return local_channel(n, upper=embed(gate.matrix, qs, n), label=gate.name)
    if all(q >= n for q in qs):
        lower = embed(gate.matrix, [q - n for q in qs], n)
        return local_channel(n, lower=lower, label=gate.name)
    mat = gate.matrix
    if qs[0] >= n:
        # reorder to (upper qubit, lower qubit)
        sw = np.eye(4)[[0, 2, 1, 3]]
        mat = sw @ mat @ sw
        qs = (qs[1], qs[0])
    ch = cbe_canonical_gate(canonical_decompose(mat), n, qs[0], qs[1] - n)
    return VecChannel(n, ch.pairs, ch.eta, 0.0, gate.name)


def cbe_compile_circuit(c: CircuitIR, gamma0: float = 0.5):
    """Compile a circuit gate by gate.

    Returns:
        ``(channel, gamma_total)`` where ``gamma_total = gamma0 * prod(eta_gate)``.
    """
    stages = tuple(_gate_channel(c, g) for g in c.gates)
    ch = CompiledChannel(c.n, stages)
    return ch, gamma0 * ch.eta


def cbe_compile_trotter(h: PauliHamiltonian):
    """Compile ``r`` first-order Trotter steps; term 0 is applied first in each step.

    Interaction factors ``exp(-i tau P_u (x) P_l)`` are the two-term sums
    ``cos(tau) I - i sin(tau) P_u (x) P_l`` and cost ``1/(|cos tau| + |sin tau|)`` each.

    Returns:
        ``(channel, eta_total)``.

    Raises:
        ValidationError: if some interaction step ``|h_i| t / r`` reaches pi/2.
    """
    n, r = h.n, h.r
    d = 1 << n
    eye = np.eye(d, dtype=complex)
    step = []
    for coeff, label in h.terms:
        tau = coeff * h.t / r
        pu, pl = pauli_string(label[:n]), pauli_string(label[n:])
        if h.is_interaction(label):
            if abs(tau) >= np.pi / 2:
                raise ValidationError(
                    f"Trotter step |h|t/r = {abs(tau):.4g} must stay below pi/2; raise r"
                )
            step.append(cbe_pauli_sum(
                n, [(math.cos(tau), eye, eye), (-1j * math.sin(tau), pu, pl)], label
            ))
        elif set(label[n:]) <= {"I"}:
            # the lower string is the identity; pl carries no sign
            step.append(local_channel(n, upper=math.cos(tau) * eye - 1j * math.sin(tau) * pu,
                                      label=label))
        else:
            step.append(local_channel(n, lower=math.cos(tau) * eye - 1j * math.sin(tau) * pl,
                                      label=label))
    ch = CompiledChannel(n, tuple(step) * r)
    return ch, ch.eta


def trotter_eta_estimate(h: PauliHamiltonian) -> float:
    """Closed-form approximation ``exp(-||H||_Inter t)`` of the compiled efficiency."""
    return float(math.exp(-h.interaction_norm * h.t))


def apply_to_dmse(ch: CompiledChannel, rho: DmseDensity, target=None) -> DmseDensity:
    """Run a compiled channel on an encoding and return the new encoding."""
    out = ch.apply(rho.rho)
    return DmseDensity(rho.n, out, rho.gamma * ch.eta, target)


def check_action(ch: VecChannel | CompiledChannel, target: np.ndarray,
                 tol: float = TOL_NORM) -> float:
    """Max deviation between the channel action and ``eta * target``."""
    err = float(np.abs(ch.action() - ch.eta * target).max())
    if err > tol:
        raise ValidationError(f"channel action deviates by {err:.3g}")
    return err
