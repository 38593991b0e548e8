import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import haar
from matramp.cli import RunConfig, dispatch, main
from matramp.encoders import canonical_decompose
from matramp.errors import ValidationError
from matramp.experiments.tables import CSV_COLUMNS
from matramp.parsing import (
    circuit_from_json, circuit_to_json, dmse_from_spec, hamiltonian_from_json,
    hamiltonian_to_json, parse_circuit, parse_hamiltonian, state_from_spec, ubse_from_spec,
)

SAMPLE = {
    "a": {"upper": "00", "lower": [1, 0, 0, 1],
          "circuit": {"n": 2, "gates": [{"name": "h", "qubits": [0]},
                                        {"name": "cnot", "qubits": [0, 2]},
                                        {"name": "ry", "qubits": [3], "params": [0.4]}]}},
    "b": {"decomposition": [{"coeff": 0.6, "pauli": "IX"}, {"coeff": [0, 0.8], "pauli": "ZZ"}]},
    "target": "real",
}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_parse_circuit_examples(tmp_path):
    c = parse_circuit(write(tmp_path, "c.json", {"n": 2, "gates": [{"name": "cnot", "qubits": [0, 2]}]}))
    assert c.interaction_flags == [True]
    c = circuit_from_json({"n": 2, "gates": [{"name": "h", "qubits": [1]}]})
    assert c.interaction_flags == [False]
    u = haar(2, np.random.default_rng(0))
    entry = {"name": "matrix", "qubits": [0, 2], "matrix": [[[z.real, z.imag] for z in row] for row in u]}
    c = circuit_from_json({"n": 2, "gates": [entry]})
    assert np.abs(canonical_decompose(c.gates[0].matrix).reconstruct() - u).max() < 1e-10


@pytest.mark.parametrize("gate", [
    {"name": "foo", "qubits": [0]},
    {"name": "h", "qubits": [4]},
    {"name": "matrix", "qubits": [0], "matrix": [[1, 1], [0, 1]]},
])
def test_parse_circuit_errors(gate):
    with pytest.raises(ValidationError):
        circuit_from_json({"n": 2, "gates": [gate]})


def test_parse_hamiltonian_examples(tmp_path):
    spec = {"terms": [{"coeff": 0.5, "pauli": "XXII"}, {"coeff": -0.25, "pauli": "XIXI"},
                      {"coeff": 1.0, "pauli": "IZIZ"}], "t": 0.3, "r": 12}
    h = parse_hamiltonian(write(tmp_path, "h.json", spec))
    assert not h.is_interaction("XXII") and h.is_interaction("XIXI")
    assert h.norm == 1.75 and h.interaction_norm == 1.25
    assert h.r == 12 and h.t == 0.3
    with pytest.raises(ValidationError):
        hamiltonian_from_json([{"coeff": 1.0, "pauli": "XIX"}])
    with pytest.raises(ValidationError):
        hamiltonian_from_json([{"coeff": 1.0, "pauli": "XIQI"}])


pauli_strings = st.integers(1, 2).flatmap(
    lambda n: st.lists(st.text("IXYZ", min_size=2 * n, max_size=2 * n), min_size=1, max_size=5))


@settings(max_examples=50)
@given(pauli_strings, st.lists(st.floats(-3, 3), min_size=5, max_size=5), st.floats(0.01, 2))
def test_hamiltonian_round_trip(labels, coeffs, t):
    obj = {"terms": [{"coeff": c, "pauli": p} for c, p in zip(coeffs, labels)], "t": t}
    h = hamiltonian_from_json(obj)
    normal = hamiltonian_to_json(h)
    assert hamiltonian_to_json(hamiltonian_from_json(normal)) == normal
    assert json.loads(json.dumps(normal)) == normal


gates = st.one_of(
    st.tuples(st.sampled_from(["h", "x", "y", "z", "s", "t"]), st.integers(0, 3)).map(
        lambda g: {"name": g[0], "qubits": [g[1]]}),
    st.tuples(st.sampled_from(["rx", "ry", "rz"]), st.integers(0, 3), st.floats(-6, 6)).map(
        lambda g: {"name": g[0].upper(), "qubits": [g[1]], "params": [g[2]]}),
    st.tuples(st.sampled_from(["cnot", "cz", "swap"]), st.permutations(range(4))).map(
        lambda g: {"name": g[0], "qubits": list(g[1][:2])}),
)


@given(st.lists(gates, max_size=8))
def test_circuit_round_trip(glist):
    obj = {"n": 2, "gates": glist}
    normal = circuit_to_json(circuit_from_json(obj))
    assert circuit_to_json(circuit_from_json(normal)) == normal
    assert [g["name"] for g in normal["gates"]] == [g["name"].lower() for g in glist]


def test_state_and_b_specs():
    assert np.array_equal(state_from_spec("10"), [0, 0, 1, 0])
    assert np.allclose(state_from_spec([3, [0, 4]]), [0.6, 0.8j])
    with pytest.raises(ValidationError):
        state_from_spec("012")
    u = ubse_from_spec({"bell": "phi+, psi-"})
    assert u.n == 2 and u.lam == pytest.approx(2)
    u = ubse_from_spec(SAMPLE["b"])
    assert u.k == 1 and u.lam == pytest.approx(2 / 1.4)
    with pytest.raises(ValidationError):
        ubse_from_spec({"nothing": 1})


def test_a_spec_mismatch():
    spec = dict(SAMPLE["a"], circuit={"n": 1, "gates": []})
    with pytest.raises(ValidationError):
        dmse_from_spec(spec)
    dm, ch = dmse_from_spec(SAMPLE["a"])
    assert dm.gamma == pytest.approx(2**-1.5) and dm.residual() < 1e-10


def test_verify_exit_zero(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "invariants hold" in out


def test_malformed_json_exit_one(tmp_path, capsys):
    path = write(tmp_path, "bad.json", '{"a": ')
    assert main(["estimate", "--config", path]) == 1
    assert main(["estimate", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["encode-b", "--config", write(tmp_path, "b.json", {"bell": "xyz"})]) == 1


def test_estimate_json(tmp_path):
    cfg = write(tmp_path, "s.json", SAMPLE)
    out = tmp_path / "est.json"
    assert main(["estimate", "--config", cfg, "--method", "indirect-hl", "--out", str(out)]) == 0
    record = json.loads(out.read_text())
    assert record["queries_used"] > 0 and record["method"] == "indirect-hl"


def test_estimate_csv_columns(tmp_path):
    cfg = write(tmp_path, "s.json", SAMPLE)
    out = tmp_path / "est.csv"
    code = main(["estimate", "--config", cfg, "--method", "direct-sql", "--format", "csv",
                 "--out", str(out), "--epsilon", "0.2"])
    assert code == 0
    assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)


@pytest.mark.parametrize("argv", [
    ["bench-extreme", "--n", "2"],
    ["regime-sweep", "--format", "csv"],
    ["two-design", "--n", "1", "--shots", "200"],
    ["gibbs-demo", "--n", "2"],
    ["encode-a", "--config", None],
    ["encode-b", "--config", None, "--format", "csv"],
])
def test_byte_identical(tmp_path, argv):
    cfg = write(tmp_path, "s.json", SAMPLE)
    argv = [cfg if a is None else a for a in argv]
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.txt"
        assert main(argv + ["--seed", "5", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig("estimate", epsilon=1.5)
    with pytest.raises(ValidationError):
        RunConfig("dance")
    assert dispatch(RunConfig("estimate")) == 1  # no a/b specs


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "matramp.cli", "gibbs-demo", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 2
