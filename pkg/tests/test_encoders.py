import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import apply_gate, haar, rand_state, rng_of, seeds
from matramp.encoders import (
    CircuitIR, Gate, PauliHamiltonian, canonical_decompose, cbe_canonical_gate,
    cbe_compile_circuit, cbe_compile_trotter, cbe_pauli_sum, dmse_initial_product,
    dmse_optimal, entangling_power_schmidt, ubse_from_bell_label, ubse_from_decomposition,
    verify_ubse,
)
from matramp.encoders.cbe import apply_to_dmse, trotter_eta_estimate
from matramp.encoders.programs import FIXED_GATES
from matramp.errors import ValidationError
from matramp.matrixize import BipartiteState, entropy_report, matrixize
from matramp.qcore import X, Y, Z, pauli_string

CNOT = FIXED_GATES["cnot"]
SWAP = FIXED_GATES["swap"]


# UBSE -------------------------------------------------------------------------

def block_oracle(u):
    """Top-left block by explicit index selection on (system, ancilla) ordering."""
    d, a = 2**u.n, 2**u.k
    rows = [i * a for i in range(d)]
    return u.unitary[np.ix_(rows, rows)]


def test_ubse_single_pauli():
    u = ubse_from_decomposition([(1.0, np.kron(X, X))])
    assert u.k == 0 and u.lam == pytest.approx(2)
    assert np.allclose(u.unitary, np.kron(X, X))


def test_ubse_two_components():
    u = ubse_from_decomposition([(2**-0.5, np.eye(2)), (2**-0.5, X)])
    assert u.lam == pytest.approx(1, abs=1e-10)
    assert np.allclose(block_oracle(u), u.lam * u.b.matrix, atol=1e-10)


def test_ubse_negative_coefficient():
    u = ubse_from_decomposition([(0.6, np.eye(2)), (-0.8, Z)])
    assert np.allclose(block_oracle(u), u.lam * u.b.matrix, atol=1e-10)
    assert u.lam == pytest.approx(math.sqrt(2) / 1.4)


def test_ubse_errors():
    with pytest.raises(ValidationError):
        ubse_from_decomposition([(0.0, np.eye(2)), (0.0, X)])
    with pytest.raises(ValidationError):
        ubse_from_decomposition([(1.0, np.diag([1.0, 0.5]))])
    with pytest.raises(ValidationError):
        ubse_from_decomposition([(1.0, X), (1.0, Z)])  # norm sqrt(2)


def pauli_lcu(n, labels, coeffs):
    c = np.asarray(coeffs, dtype=complex)
    c = c / np.linalg.norm(c)
    return [(ci, pauli_string(lab)) for ci, lab in zip(c, labels)]


@settings(max_examples=40)
@given(seeds, st.integers(1, 3), st.integers(1, 5))
def test_ubse_certified(seed, n, terms):
    rng = rng_of(seed)
    labels = sorted({"".join(rng.choice(list("IXYZ"), n)) for _ in range(terms)})
    comps = pauli_lcu(n, labels, rng.standard_normal(len(labels)) + 1j * rng.standard_normal(len(labels)))
    u = ubse_from_decomposition(comps)
    assert np.allclose(u.unitary.conj().T @ u.unitary, np.eye(len(u.unitary)), atol=1e-10)
    assert verify_ubse(u) < 1e-10
    assert u.lam <= entropy_report(u.b).lambda_max + 1e-10
    assert u.lam == pytest.approx(2 ** (n / 2) / np.abs([c for c, _ in comps]).sum(), abs=1e-10)


def test_verify_ubse_examples():
    n = 2
    ident = ubse_from_bell_label(["phi+"] * n)
    assert verify_ubse(ident, BipartiteState(np.eye(4).reshape(-1) / 2)) == pytest.approx(0)
    wrong = ident.with_lambda(ident.lam + 0.3)
    assert verify_ubse(wrong) == pytest.approx(0.3 * np.linalg.norm(ident.b.matrix))


def test_bell_labels():
    assert np.allclose(ubse_from_bell_label(["phi+"] * 3).unitary, np.eye(8))
    assert ubse_from_bell_label(["phi+"] * 3).lam == pytest.approx(2**1.5)
    assert np.allclose(ubse_from_bell_label(["psi-"]).unitary, 1j * Y)
    assert np.allclose(ubse_from_bell_label(["phi+", "psi+"]).unitary, np.kron(np.eye(2), X))
    with pytest.raises(ValidationError):
        ubse_from_bell_label(["chi"])


# DMSE -------------------------------------------------------------------------

def test_dmse_product_form():
    u, l = np.array([0.6, 0.8j]), np.array([1j, 1]) / math.sqrt(2)
    d = dmse_initial_product(u, l)
    psi = np.concatenate([u, l.conj()]) / math.sqrt(2)
    assert np.allclose(d.rho, np.outer(psi, psi.conj()))
    assert d.gamma == 0.5
    assert np.allclose(d.block(), 0.5 * np.outer(u, l))  # |u><l*| = u l^T
    d.check()
    zero = dmse_initial_product([1, 0], [1, 0])
    assert np.allclose(zero.rho, 0.5 * np.array([[1, 0, 1, 0], [0] * 4, [1, 0, 1, 0], [0] * 4]))


def test_dmse_optimal_examples():
    d = dmse_optimal(BipartiteState.product([1, 0], [0.6, 0.8]))
    assert d.gamma == pytest.approx(0.5)
    for n in (1, 2):
        maxent = BipartiteState(np.eye(2**n).reshape(-1) / 2 ** (n / 2))
        dm = dmse_optimal(maxent)
        plus = np.full((2, 2), 0.5)
        assert dm.gamma == pytest.approx(2 ** (-n / 2 - 1))
        assert np.allclose(dm.rho, 2.0**-n * np.kron(plus, np.eye(2**n)), atol=1e-12)


@settings(max_examples=30)
@given(seeds, st.integers(1, 3))
def test_dmse_optimal_certified(seed, n):
    a = BipartiteState(rand_state(2 * n, rng_of(seed)))
    d = dmse_optimal(a)
    ev = np.linalg.eigvalsh(d.rho)
    assert ev.min() > -1e-10 and np.trace(d.rho).real == pytest.approx(1)
    assert d.residual() < 1e-10
    s = np.linalg.svd(a.matrix, compute_uv=False)
    assert d.gamma * s.sum() == pytest.approx(0.5, abs=1e-10)
    assert d.gamma <= entropy_report(a).gamma_max + 1e-10


# canonical form ---------------------------------------------------------------

def in_chamber(theta):
    tx, ty, tz = theta
    return math.pi / 4 + 1e-9 >= tx >= ty - 1e-9 and ty >= abs(tz) - 1e-9


def test_canonical_examples():
    c = canonical_decompose(CNOT)
    assert np.allclose(c.theta, (math.pi / 4, 0, 0), atol=1e-10)
    assert np.abs(c.reconstruct() - CNOT).max() < 1e-10
    assert c.eta == pytest.approx(2**-0.5, abs=1e-10)
    s = canonical_decompose(SWAP)
    assert np.allclose(s.theta, (math.pi / 4,) * 3, atol=1e-10)
    assert s.eta == pytest.approx(0.5, abs=1e-10)
    e = canonical_decompose(np.eye(4))
    assert np.allclose(e.theta, 0, atol=1e-12) and e.eta == pytest.approx(1)
    locals_ = np.kron(*e.pre_locals) @ np.kron(*e.post_locals)
    assert np.allclose(locals_ / locals_[0, 0], np.eye(4), atol=1e-10)
    with pytest.raises(ValidationError):
        canonical_decompose(np.ones((4, 4)))


@settings(max_examples=100)
@given(seeds)
def test_canonical_haar_property(seed):
    g = haar(2, rng_of(seed))
    c = canonical_decompose(g)
    assert np.abs(c.reconstruct() - g).max() < 1e-9
    assert in_chamber(c.theta)
    assert np.sum(c.schmidt_s**2) == pytest.approx(1)
    assert -2 * math.log2(c.eta) == pytest.approx(entangling_power_schmidt(g), abs=1e-9)


@given(seeds, st.sampled_from(["cz", "cnot", "swap"]))
def test_canonical_invariant_under_locals(seed, name):
    rng = rng_of(seed)
    g = FIXED_GATES[name]
    dressed = np.kron(haar(1, rng), haar(1, rng)) @ g @ np.kron(haar(1, rng), haar(1, rng))
    assert np.allclose(canonical_decompose(dressed).theta, canonical_decompose(g).theta, atol=1e-9)


def test_entangling_power_examples():
    assert entangling_power_schmidt(np.eye(4)) == pytest.approx(0, abs=1e-12)
    assert entangling_power_schmidt(CNOT) == pytest.approx(1)
    assert entangling_power_schmidt(SWAP) == pytest.approx(2)


def renyi_half(psi, cut):
    s = np.linalg.svd(psi.reshape(2**cut, -1), compute_uv=False)
    return 2 * math.log2(s[s > 1e-12].sum())


@settings(max_examples=20)
@given(seeds)
def test_efficiency_optimality(seed):
    rng = rng_of(seed)
    g = haar(2, rng)
    bound = -2 * math.log2(canonical_decompose(g).eta)
    # register [u, a_u, l, a_l]; G acts on u and l
    for _ in range(50):
        psi = rand_state(4, rng)
        out = apply_gate(psi, g, [0, 2], 4)
        assert renyi_half(out, 2) - renyi_half(psi, 2) <= bound + 1e-8
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    probe = np.kron(phi, phi)
    assert renyi_half(apply_gate(probe, g, [0, 2], 4), 2) == pytest.approx(bound, abs=1e-8)


# CBE --------------------------------------------------------------------------

def induced_action(ch):
    return sum(p * np.kron(k, l.conj()) for k, l, p in ch.pairs)


def test_cbe_gate_examples():
    for g, eta in ((CNOT, 2**-0.5), (SWAP, 0.5)):
        ch = cbe_canonical_gate(canonical_decompose(g))
        assert ch.eta == pytest.approx(eta, abs=1e-10)
        assert np.allclose(induced_action(ch), eta * g, atol=1e-10)
        assert ch.trace_preservation_error() < 1e-10
    ident = cbe_canonical_gate(canonical_decompose(np.eye(4)))
    assert ident.eta == pytest.approx(1) and len(ident.pairs) == 1


@settings(max_examples=30)
@given(seeds)
def test_cbe_gate_action_property(seed):
    g = haar(2, rng_of(seed))
    ch = cbe_canonical_gate(canonical_decompose(g))
    assert np.allclose(induced_action(ch), ch.eta * g, atol=1e-9)
    assert math.isclose(sum(p for _, _, p in ch.pairs), 1)


def test_cbe_pauli_sum():
    ch = cbe_pauli_sum(1, [(0.5j, X, Z), (-1.5, Y, Y)])
    assert ch.eta == pytest.approx(0.5)
    target = 0.5j * np.kron(X, Z) - 1.5 * np.kron(Y, Y)
    assert np.allclose(ch.action(), ch.eta * target)
    with pytest.raises(ValidationError):
        cbe_pauli_sum(1, [(0.0, X, X)])


def circuit_oracle(circ, state):
    for g in circ.gates:
        state = apply_gate(state, g.matrix, list(g.qubits), 2 * circ.n)
    return state


def test_circuit_examples():
    local = CircuitIR(2, [Gate.make("h", [0]), Gate.make("cnot", [2, 3])])
    ch, gamma = cbe_compile_circuit(local)
    assert ch.eta == 1 and gamma == 0.5
    one = CircuitIR(2, [Gate.make("cnot", [0, 2])])
    assert cbe_compile_circuit(one)[1] == pytest.approx(2**-1.5, abs=1e-10)
    with pytest.raises(ValidationError):
        Gate.make("cnot", [0, 0])
    with pytest.raises(ValidationError):
        Gate.make("toffoli", [0, 1, 2])


@pytest.mark.parametrize("k", range(1, 7))
def test_cnot_gamma_law(k):
    n = 3
    gates = []
    for i in range(k):
        gates.append(Gate.make("cnot", [i % n, n + (i * 2) % n]))
        gates.append(Gate.make("h", [i % n]))
    _, gamma = cbe_compile_circuit(CircuitIR(n, gates))
    assert gamma == pytest.approx(2 ** (-1 - k / 2), abs=1e-10)


def random_circuit(n, rng, crossings):
    gates = []
    for _ in range(crossings):
        gates.append(Gate.make("matrix", [int(rng.integers(n)), n + int(rng.integers(n))],
                               matrix=haar(2, rng)))
        gates.append(Gate.make("ry", [int(rng.integers(2 * n))], params=[rng.uniform(0, 6)]))
    gates.append(Gate.make("matrix", [n + 1, n], matrix=haar(2, rng)))
    gates.append(Gate.make("swap", [1, n]))  # crossing with reversed order
    return CircuitIR(n, gates)


@settings(max_examples=10)
@given(seeds, st.integers(0, 2))
def test_circuit_end_to_end(seed, crossings):
    rng = rng_of(seed)
    n = 2
    circ = random_circuit(n, rng, crossings)
    upper, lower = rand_state(n, rng), rand_state(n, rng)
    d0 = dmse_initial_product(upper, lower)
    ch, gamma = cbe_compile_circuit(circ)
    final = circuit_oracle(circ, np.kron(upper, lower))
    out = apply_to_dmse(ch, d0, BipartiteState(final))
    assert out.gamma == pytest.approx(gamma)
    assert np.abs(out.block() - gamma * matrixize(final)).max() < 1e-8
    for stage in ch.stages:
        assert stage.trace_preservation_error() < 1e-10


def test_trotter_single_term():
    h = PauliHamiltonian(1, [(1.0, "XX")], 0.5, 200)
    _, eta = cbe_compile_trotter(h)
    assert eta == pytest.approx(0.607288035057218, rel=1e-12)  # (cos + sin)^-200 at 0.0025
    assert abs(eta / math.exp(-0.5) - 1) < 0.01
    assert trotter_eta_estimate(h) == pytest.approx(math.exp(-0.5))


def test_trotter_no_interaction():
    h = PauliHamiltonian(2, [(0.7, "XZII"), (0.2, "IIYY")], 1.0, 10)
    assert cbe_compile_trotter(h)[1] == 1.0


def test_trotter_precondition():
    with pytest.raises(ValidationError):
        cbe_compile_trotter(PauliHamiltonian(1, [(4.0, "XX")], 1.0, 2))


def test_trotter_end_to_end():
    n = 2
    terms = [(0.3, "XIXI"), (0.3, "YIYI"), (0.3, "ZIZI"), (0.2, "IXIX"), (0.5, "ZZII"),
             (-0.4, "IIXY")]
    h = PauliHamiltonian(n, terms, 0.7, 25)
    ch, eta = cbe_compile_trotter(h)
    tau = h.t / h.r
    step = np.eye(16, dtype=complex)
    for c, p in terms:
        step = expm(-1j * c * tau * pauli_string(p)) @ step
    u = np.linalg.matrix_power(step, h.r)
    rng = rng_of(4)
    upper, lower = rand_state(n, rng), rand_state(n, rng)
    out = ch.apply(dmse_initial_product(upper, lower).rho)[:4, 4:]
    assert np.abs(out - 0.5 * eta * matrixize(u @ np.kron(upper, lower))).max() < 1e-10


def test_default_trotter_steps():
    h = PauliHamiltonian(1, [(0.5, "XX"), (0.25, "ZI")], 2.0)
    assert h.r == math.ceil(100 * 0.75 * 2.0)
    assert h.interaction_norm == 0.5


def test_composition_multiplies():
    rng = rng_of(8)
    g1, g2 = haar(2, rng), haar(2, rng)
    circ = CircuitIR(1, [Gate.make("matrix", [0, 1], matrix=g1),
                         Gate.make("matrix", [1, 0], matrix=g2)])
    ch, _ = cbe_compile_circuit(circ)
    e1, e2 = canonical_decompose(g1).eta, canonical_decompose(g2).eta
    assert ch.eta == pytest.approx(e1 * e2, abs=1e-12)
