"""JSON schemas for circuits, Hamiltonians and state specifications.

Complex numbers are written as ``[re, im]`` pairs; plain reals are accepted on input.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .encoders.cbe import apply_to_dmse, cbe_compile_circuit, cbe_compile_trotter
from .encoders.dmse import dmse_initial_product
from .encoders.programs import ROTATIONS, CircuitIR, Gate, PauliHamiltonian
from .encoders.ubse import ubse_from_bell_label, ubse_from_decomposition
from .errors import ValidationError
from .matrixize import BipartiteState
from .qcore import pauli_string


def load_json(source) -> dict:
    """Parse a path or an already-decoded object."""
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc.msg})") from None


def to_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValidationError(f"complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, dict):
        return complex(float(x.get("re", 0.0)), float(x.get("im", 0.0)))
    if isinstance(x, (int, float)):
        return complex(x)
    raise ValidationError(f"cannot read {x!r} as a number")


def from_complex(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def to_matrix(rows) -> np.ndarray:
    try:
        return np.array([[to_complex(v) for v in row] for row in rows], dtype=complex)
    except TypeError:
        raise ValidationError("matrix must be a list of rows") from None


def from_matrix(m: np.ndarray) -> list:
    return [[from_complex(v) for v in row] for row in np.asarray(m)]


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def circuit_from_json(obj) -> CircuitIR:
    n = int(_require(obj, "n", "circuit"))
    gates = []
    for i, g in enumerate(_require(obj, "gates", "circuit")):
        name = str(_require(g, "name", f"gate {i}")).lower()
        qubits = _require(g, "qubits", f"gate {i}")
        if any(int(q) < 0 or int(q) >= 2 * n for q in qubits):
            raise ValidationError(f"gate {i}: qubit index out of range for 2n={2 * n}")
        matrix = to_matrix(g["matrix"]) if "matrix" in g else None
        gates.append(Gate.make(name, qubits, g.get("params", ()), matrix))
    return CircuitIR(n, gates)


def circuit_to_json(c: CircuitIR) -> dict:
    gates = []
    for g in c.gates:
        entry = {"name": g.name, "qubits": list(g.qubits)}
        if g.name in ROTATIONS:
            entry["params"] = list(g.params)
        if g.name == "matrix":
            entry["matrix"] = from_matrix(g.matrix)
        gates.append(entry)
    return {"n": c.n, "gates": gates}


def parse_circuit(path) -> CircuitIR:
    return circuit_from_json(load_json(path))


def hamiltonian_from_json(obj) -> PauliHamiltonian:
    terms = obj["terms"] if isinstance(obj, dict) and "terms" in obj else obj
    if not isinstance(terms, list) or not terms:
        raise ValidationError("hamiltonian needs a non-empty list of terms")
    parsed = []
    for i, term in enumerate(terms):
        coeff = _require(term, "coeff", f"term {i}")
        label = str(_require(term, "pauli", f"term {i}")).upper()
        if not isinstance(coeff, (int, float)):
            raise ValidationError(f"term {i}: coefficient must be real")
        parsed.append((float(coeff), label))
    length = len(parsed[0][1])
    if length % 2 or any(len(p) != length for _, p in parsed):
        raise ValidationError("Pauli strings must share one even length 2n")
    t = float(obj.get("t", 1.0)) if isinstance(obj, dict) else 1.0
    r = obj.get("r") if isinstance(obj, dict) else None
    return PauliHamiltonian(length // 2, parsed, t, None if r is None else int(r))


def hamiltonian_to_json(h: PauliHamiltonian) -> dict:
    return {"terms": [{"coeff": c, "pauli": p} for c, p in h.terms], "t": h.t, "r": h.r}


def parse_hamiltonian(path) -> PauliHamiltonian:
    return hamiltonian_from_json(load_json(path))


def state_from_spec(spec, n: int | None = None) -> np.ndarray:
    """A basis label such as ``"01"`` or an amplitude list (normalized here)."""
    if isinstance(spec, str):
        if not spec or set(spec) - {"0", "1"}:
            raise ValidationError(f"bad basis label {spec!r}")
        vec = np.zeros(1 << len(spec), dtype=complex)
        vec[int(spec, 2)] = 1
    else:
        vec = np.array([to_complex(v) for v in spec], dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValidationError("zero amplitude vector")
        vec = vec / norm
    if n is not None and vec.size != 1 << n:
        raise ValidationError(f"state has {vec.size} amplitudes, expected {1 << n}")
    return vec


def ubse_from_spec(spec: dict):
    """``{"bell": "phi+,psi-"}`` or ``{"decomposition": [{"coeff": c, "pauli": "XZ"}, ...]}``."""
    if "bell" in spec:
        labels = spec["bell"]
        if isinstance(labels, str):
            labels = [s for s in labels.replace(" ", "").split(",") if s]
        return ubse_from_bell_label(labels)
    if "decomposition" in spec:
        comps = [(to_complex(_require(c, "coeff", "component")),
                  pauli_string(str(_require(c, "pauli", "component"))))
                 for c in spec["decomposition"]]
        return ubse_from_decomposition(comps)
    raise ValidationError("B spec needs 'bell' or 'decomposition'")


def dmse_from_spec(spec: dict):
    """Product initial state, optionally evolved by a circuit or a Hamiltonian.

    Returns ``(dmse, channel_or_None)``.
    """
    upper = state_from_spec(_require(spec, "upper", "A spec"))
    lower = state_from_spec(_require(spec, "lower", "A spec"))
    dm = dmse_initial_product(upper, lower)
    if "circuit" in spec:
        circ = circuit_from_json(spec["circuit"])
        if circ.n != dm.n:
            raise ValidationError(f"circuit has n={circ.n} but the initial state n={dm.n}")
        ch, _ = cbe_compile_circuit(circ)
        target = BipartiteState(circ.unitary() @ dm.a.state)
        return apply_to_dmse(ch, dm, target), ch
    if "hamiltonian" in spec:
        ham = hamiltonian_from_json(spec["hamiltonian"])
        if ham.n != dm.n:
            raise ValidationError(f"Hamiltonian has n={ham.n} but the initial state n={dm.n}")
        ch, _ = cbe_compile_trotter(ham)
        evolved = ham.trotter_unitary() @ dm.a.state
        return apply_to_dmse(ch, dm, BipartiteState(evolved)), ch
    return dm, None


__all__ = [
    "circuit_from_json",
    "circuit_to_json",
    "dmse_from_spec",
    "hamiltonian_from_json",
    "hamiltonian_to_json",
    "load_json",
    "parse_circuit",
    "parse_hamiltonian",
    "state_from_spec",
    "ubse_from_spec",
]
