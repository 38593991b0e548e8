"""Shared oracles and hypothesis strategies.

Oracles here avoid the library on purpose: explicit loops, direct sums and
dense statevector evolution.
"""

import numpy as np
from hypothesis import strategies as st

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed):
    return np.random.default_rng(seed)


def loop_kron(a, b):
    """Element-wise Kronecker product."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def loop_partial_trace_keep0(rho):
    """Reduced state of qubit 0 of a 3-qubit density matrix by explicit summation."""
    out = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for rest in range(4):
                out[a, b] += rho[a * 4 + rest, b * 4 + rest]
    return out


def direct_inner(b, a):
    return sum(np.conj(x) * y for x, y in zip(b, a))


def bell(label):
    amps = {"phi+": [1, 0, 0, 1], "phi-": [1, 0, 0, -1],
            "psi+": [0, 1, 1, 0], "psi-": [0, 1, -1, 0]}
    return np.array(amps[label], dtype=complex) / np.sqrt(2)


def haar(q, rng):
    d = 2**q
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    u, r = np.linalg.qr(g)
    return u * (np.diag(r) / np.abs(np.diag(r)))


def rand_state(q, rng):
    v = rng.standard_normal(2**q) + 1j * rng.standard_normal(2**q)
    return v / np.linalg.norm(v)


def apply_gate(state, gate, qubits, total):
    """Dense statevector update of ``gate`` on ``qubits`` by tensor contraction."""
    k = len(qubits)
    psi = np.moveaxis(state.reshape([2] * total), qubits, range(k))
    psi = (gate @ psi.reshape(2**k, -1)).reshape([2] * total)
    return np.moveaxis(psi, range(k), qubits).reshape(-1)


# acceptance summary ------------------------------------------------------------

ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str, part: str = "") -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name + ': ' if name else ''}{d}{'' if good else ' [FAIL]'}"
                           for name, good, d in parts)
        terminalreporter.write_line(f"criterion {crit:2d} {'PASS' if ok else 'FAIL'}  {detail}")
