"""Invariant suite run by ``matramp verify``.

Every check recomputes a known identity from scratch with fixed seeds and
reports a pass/fail line; nothing here depends on test fixtures.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .encoders.canonical import canonical_decompose, entangling_power_schmidt
from .encoders.cbe import cbe_compile_circuit, cbe_compile_trotter, cbe_pauli_sum
from .encoders.dmse import DmseDensity, dmse_optimal
from .encoders.programs import CircuitIR, Gate
from .encoders.ubse import ubse_from_bell_label, ubse_from_decomposition, verify_ubse
from .estimators.composites import (
    GroverOperator,
    build_U1,
    build_U2,
    build_W,
    exact_hl_amplitude,
    exact_sql_expectation,
)
from .estimators.sampling import hadamard_estimate
from .estimators.tasks import EstimationTask
from .experiments.design import distance_bound, exact_trace_distance
from .experiments.extreme import run_extreme_case
from .experiments.gibbs import gibbs_demo, random_two_local
from .experiments.regimes import cut_coupling_hamiltonian
from .matrixize import (
    BipartiteState,
    entropy_report,
    matrixize,
    overlap_via_trace,
    vectorize,
)
from .parsing import circuit_from_json, circuit_to_json, hamiltonian_from_json, hamiltonian_to_json
from .qcore import (
    KrausChannel,
    apply_channel,
    schmidt,
    spectral_norm,
    tensor,
    trace_norm,
    haar_random_unitary,
    is_unitary,
    partial_trace,
    pauli_string,
    purify,
    random_density,
    random_state,
    singular_values,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def random_pauli_lcu(n: int, terms: int, rng):
    """Random normalized combination of distinct Pauli strings, as UBSE components."""
    labels = set()
    while len(labels) < terms:
        labels.add("".join(rng.choice(list("IXYZ"), n)))
    c = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    c /= np.linalg.norm(c)
    # distinct Paulis are orthogonal, so sum |c|^2 = 1 gives a unit-norm |B>
    return [(ci, pauli_string(lab)) for ci, lab in zip(c, sorted(labels))]


def random_circuit(n: int, crossings: int, locals_: int, rng) -> CircuitIR:
    gates = []
    for _ in range(crossings):
        u = int(rng.integers(n))
        lo = n + int(rng.integers(n))
        gates.append(Gate.make("matrix", [u, lo], matrix=haar_random_unitary(2, rng)))
        for _ in range(locals_):
            q = int(rng.integers(2 * n))
            gates.append(Gate.make("matrix", [q], matrix=haar_random_unitary(1, rng)))
    if n > 1:
        gates.append(Gate.make("cnot", [0, 1]))
        gates.append(Gate.make("cz", [n, n + 1]))
    return CircuitIR(n, gates)


def renyi_half(state: np.ndarray, cut: int) -> float:
    s = singular_values(state.reshape(1 << cut, -1))
    s = s[s > 1e-12]
    return float(2 * np.log2(np.sum(s)))


def _max_err(a, b) -> float:
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


# qcore ------------------------------------------------------------------------

def check_partial_trace(rng):
    a, b = random_density(2, rng), random_density(1, rng)
    err = max(_max_err(partial_trace(np.kron(a, b), [0, 1]), a),
              _max_err(partial_trace(np.kron(a, b), [2]), b))
    return err < 1e-12, f"max error {err:.1e}"


def check_kraus(rng):
    us = [haar_random_unitary(2, rng) for _ in range(3)]
    p = rng.dirichlet(np.ones(3))
    ch = KrausChannel(tuple(math.sqrt(pi) * u for pi, u in zip(p, us)))
    choi_tr = abs(np.trace(ch.choi()) - 4)
    return ch.is_trace_preserving() and choi_tr < 1e-10, f"Choi trace error {choi_tr:.1e}"


def check_purify(rng):
    rho = random_density(2, rng, rank=3)
    psi = purify(rho)
    m = int(math.log2(psi.size)) - 2
    err = _max_err(partial_trace(np.outer(psi, psi.conj()), [0, 1]), rho)
    return err < 1e-10 and m == 2, f"m={m}, error {err:.1e}"


def check_schmidt(rng):
    worst = 0.0
    for q in (2, 3, 4):
        s = random_state(q, rng)
        for cut in range(1, q):
            worst = max(worst, _max_err(schmidt(s, cut).reconstruct(), s))
    return worst < 1e-10, f"max error {worst:.1e}"


def check_channel_trace(rng):
    ops = [haar_random_unitary(2, rng) for _ in range(4)]
    p = rng.dirichlet(np.ones(4))
    ch = KrausChannel(tuple(math.sqrt(pi) * u for pi, u in zip(p, ops)))
    worst = max(abs(np.trace(apply_channel(ch, random_density(2, rng))) - 1) for _ in range(20))
    return worst < 1e-10, f"max trace error {worst:.1e}"


def check_norms_and_tensor(rng):
    ok = True
    for _ in range(20):
        m = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        ok &= trace_norm(m) >= spectral_norm(m) - 1e-12
        # integer entries: float products are only exactly associative when exact
        a, b, c = (rng.integers(-9, 10, (2, 2)).astype(float) for _ in range(3))
        ok &= np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))
    x = np.array([[-2.5 + 0j]])
    ok &= trace_norm(x) == spectral_norm(x) == 2.5
    return bool(ok), "trace >= spectral, 1x1 equality, exact associativity"


# matrixize --------------------------------------------------------------------

def check_round_trip(rng):
    ok = True
    for n in (1, 2, 3):
        m = rng.standard_normal((1 << n, 1 << n)) + 1j * rng.standard_normal((1 << n, 1 << n))
        v = vectorize(m)
        ok &= np.array_equal(matrixize(v), m) and np.array_equal(vectorize(matrixize(v)), v)
    return bool(ok), "exact on entries"


def check_overlaps(rng):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        a = BipartiteState(random_state(2 * n, rng))
        b = BipartiteState(random_state(2 * n, rng))
        worst = max(worst, abs(overlap_via_trace(a, b) - np.vdot(b.state, a.state)))
    return worst < 1e-10, f"max error {worst:.1e} over 100 pairs"


def check_entropy_chain(rng):
    ok = True
    for _ in range(50):
        n = int(rng.integers(1, 4))
        r = entropy_report(BipartiteState(random_state(2 * n, rng)))
        ok &= -1e-12 <= r.h_inf <= r.h_half + 1e-12 <= n + 2e-12
    return bool(ok), "0 <= h_inf <= h_half <= n on 50 states"


def check_bell_paulis(rng):
    worst = 0.0
    for labels in (["phi+"], ["phi-"], ["psi+"], ["psi-"], ["psi-", "phi+", "psi+"]):
        u = ubse_from_bell_label(labels)
        n = len(labels)
        # build the Bell state directly from pair amplitudes
        pair = {"phi+": [1, 0, 0, 1], "phi-": [1, 0, 0, -1],
                "psi+": [0, 1, 1, 0], "psi-": [0, 1, -1, 0]}
        state = np.ones(1, dtype=complex)
        for lab in labels:
            state = np.kron(state, np.array(pair[lab]) / math.sqrt(2))
        # reorder (u0 l0 u1 l1 ...) -> (u0 u1 ... l0 l1 ...)
        order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        state = state.reshape([2] * (2 * n)).transpose(order).reshape(-1)
        worst = max(worst, _max_err(matrixize(state), u.unitary / 2 ** (n / 2)))
    return worst < 1e-12, f"max error {worst:.1e}"


# encoders ---------------------------------------------------------------------

def check_ubse(rng):
    worst, lam_ok = 0.0, True
    for n in (1, 2, 3):
        for terms in (1, 2, 3, 5):
            u = ubse_from_decomposition(random_pauli_lcu(n, min(terms, 4**n), rng))
            worst = max(worst, verify_ubse(u))
            lam_ok &= u.lam <= entropy_report(u.b).lambda_max + 1e-10
            lam_ok &= is_unitary(u.unitary)
    return worst < 1e-10 and bool(lam_ok), f"max residual {worst:.1e}"


def check_dmse(rng):
    worst = 0.0
    for n in (1, 2, 3):
        a = BipartiteState(random_state(2 * n, rng))
        d = dmse_optimal(a)
        d.check()
        bound = entropy_report(a).gamma_max
        worst = max(worst, d.residual(), abs(d.gamma - bound))
    return worst < 1e-10, f"max residual/bound gap {worst:.1e}"


def _dmse_action_error(ch, eta, target, n, rng) -> float:
    worst = _max_err(ch.action(), eta * target)
    for _ in range(20):
        a = BipartiteState(random_state(2 * n, rng))
        d = dmse_optimal(a)
        out = ch.apply(d.rho)[: 1 << n, 1 << n:]
        worst = max(worst, _max_err(out, d.gamma * eta * matrixize(target @ a.state)))
    return worst


def check_cbe_action(rng):
    n = 2
    circ = random_circuit(n, 2, 2, rng)
    ch, _ = cbe_compile_circuit(circ)
    worst = _dmse_action_error(ch, ch.eta, circ.unitary(), n, rng)
    tp = max(s.trace_preservation_error() for s in ch.stages)
    terms = [(0.3, "XI", "ZI"), (-0.5j, "IY", "IY"), (0.2, "ZZ", "II")]
    pauli = cbe_pauli_sum(n, [(g, pauli_string(p), pauli_string(q)) for g, p, q in terms])
    target = sum(g * pauli_string(p + q) for g, p, q in terms)
    worst = max(worst, _dmse_action_error(pauli, pauli.eta, target, n, rng))
    tp = max(tp, pauli.trace_preservation_error())
    return worst < 1e-9 and tp < 1e-10, f"action error {worst:.1e}, TP error {tp:.1e}"


def check_trotter_action(rng):
    h = cut_coupling_hamiltonian(2, 0.3, 40)
    ch, eta = cbe_compile_trotter(h)
    err = _dmse_action_error(ch, eta, h.trotter_unitary(), 2, rng)
    tp = max(s.trace_preservation_error() for s in ch.stages)
    return err < 1e-9 and tp < 1e-10, f"action error {err:.1e}, eta={eta:.6f}"


def check_efficiency_optimality(rng):
    worst_gap, probe_gap = -np.inf, 0.0
    for _ in range(5):
        g = haar_random_unitary(2, rng)
        eta = canonical_decompose(g).eta
        bound = -2 * math.log2(eta)
        # register [u, a_u, l, a_l]; the gate couples u and l
        for _ in range(10):
            psi = random_state(4, rng)
            out = np.einsum("abcd,cxdy->axby", g.reshape(2, 2, 2, 2),
                            psi.reshape(2, 2, 2, 2)).reshape(-1)
            worst_gap = max(worst_gap, renyi_half(out, 2) - renyi_half(psi, 2) - bound)
        phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
        probe = np.kron(phi, phi).reshape(2, 2, 2, 2).transpose(0, 1, 2, 3).reshape(-1)
        out = np.einsum("abcd,cxdy->axby", g.reshape(2, 2, 2, 2),
                        probe.reshape(2, 2, 2, 2)).reshape(-1)
        probe_gap = max(probe_gap, abs(renyi_half(out, 2) - bound),
                        abs(entangling_power_schmidt(g) - bound))
    return worst_gap <= 1e-8 and probe_gap < 1e-8, (
        f"max excess {worst_gap:.2e}, probe equality error {probe_gap:.1e}")


def check_composition(rng):
    g1, g2 = haar_random_unitary(2, rng), haar_random_unitary(2, rng)
    circ = CircuitIR(1, [Gate.make("matrix", [0, 1], matrix=g1),
                         Gate.make("matrix", [0, 1], matrix=g2)])
    ch, _ = cbe_compile_circuit(circ)
    err = abs(ch.eta - canonical_decompose(g1).eta * canonical_decompose(g2).eta)
    return err < 1e-12, f"eta product error {err:.1e}"


def check_canonical(rng):
    worst = 0.0
    chamber = True
    for _ in range(200):
        g = haar_random_unitary(2, rng)
        c = canonical_decompose(g)
        tx, ty, tz = c.theta
        chamber &= math.pi / 4 + 1e-9 >= tx >= ty - 1e-9 and ty >= abs(tz) - 1e-9
        worst = max(worst, _max_err(c.reconstruct(), g), abs(np.sum(c.schmidt_s**2) - 1))
    return worst < 1e-9 and bool(chamber), f"max reconstruction error {worst:.1e}"


# estimators -------------------------------------------------------------------

def random_task(n: int, part: str, rng, mixed: bool = False) -> EstimationTask:
    u = ubse_from_decomposition(random_pauli_lcu(n, min(3, 4**n), rng))
    d = dmse_optimal(BipartiteState(random_state(2 * n, rng)))
    if mixed:
        # mix in the lower-right block: still a valid encoding of the same A
        extra = np.zeros_like(d.rho)
        extra[1 << n:, 1 << n:] = random_density(n, rng)
        w = 0.3
        d = DmseDensity(n, (1 - w) * d.rho + w * extra, (1 - w) * d.gamma, d.a)
    return EstimationTask(part, u, d)


def check_exact_identities(rng):
    worst = 0.0
    for i in range(50):
        n = (1, 2, 3)[i % 3]
        t = random_task(n, ("real", "imag")[i % 2], rng, mixed=i % 5 == 0)
        worst = max(worst, abs(exact_sql_expectation(t) / t.scale - t.mu),
                    abs((2 * exact_hl_amplitude(t) - 1) / t.scale - t.mu))
    return worst < 1e-9, f"max error {worst:.1e} over 50 instances"


def check_consistency(rng):
    t = random_task(2, "real", rng)
    value = exact_sql_expectation(t)
    errs = []
    for shots in (10**3, 10**5, 10**7):
        runs = [hadamard_estimate(value, t.scale, t.mu, 0.1, 0.05, rng, shots)["estimate"]
                for _ in range(20)]
        errs.append(float(np.sqrt(np.mean((np.array(runs) - t.mu) ** 2))))
    ok = errs[0] > errs[1] > errs[2]
    return ok, "rms errors " + ", ".join(f"{e:.1e}" for e in errs)


def check_grover(rng):
    worst = 0.0
    for n in (1, 2):
        t = random_task(n, "real", rng, mixed=n == 1)
        g = GroverOperator(t)
        q = g.matrix()
        v = g.phi
        for j in range(5):
            worst = max(worst, abs(abs(np.vdot(g.psi, v)) ** 2 - math.sin((2 * j + 1) * g.theta) ** 2))
            v = q @ v
        worst = max(worst, _max_err(q.conj().T @ q, np.eye(len(q))))
    return worst < 1e-9, f"max deviation {worst:.1e}"


def check_unitarity(rng):
    worst = 0.0
    for n in (1, 2):
        u = ubse_from_decomposition(random_pauli_lcu(n, 2, rng))
        for part in ("real", "imag"):
            for m in (build_W(u, part), build_U1(u, part), build_U2(u, part, 1)):
                worst = max(worst, _max_err(m.conj().T @ m, np.eye(len(m))))
    return worst < 1e-10, f"max error {worst:.1e}"


def check_query_accounting(rng):
    s = run_extreme_case(4, seeds=range(50), targets=("sqrt",)).summary["sqrt"]
    ok = s["ratio_sql_within_2x"] and s["ratio_hl_within_2x"]
    return ok, (f"sql ratio {s['ratio_sql']:.3f} (pred {s['predicted_sql']:.3f}), "
                f"hl ratio {s['ratio_hl']:.3f} (pred {s['predicted_hl']:.3f})")


# experiments and cli ----------------------------------------------------------

def check_determinism(rng):
    a = run_extreme_case(2, seeds=range(3)).to_csv()
    b = run_extreme_case(2, seeds=range(3)).to_csv()
    return a == b, "identical CSV on re-run"


def check_extreme_rows(rng):
    flags = []
    for n in (2, 3, 4):
        summary = run_extreme_case(n, seeds=range(50)).summary
        flags += [v for label in ("sqrt", "full") for k, v in summary[label].items()
                  if k.endswith("_within_2x")]
    return all(flags), f"{sum(flags)}/{len(flags)} ratios within 2x for n = 2, 3, 4"


def check_two_design(rng):
    d = [exact_trace_distance(n) for n in (1, 2, 3)]
    ok = d[0] > d[1] > d[2] and all(x <= distance_bound(n) for x, n in zip(d, (1, 2, 3)))
    return ok, "distances " + ", ".join(f"{x:.4f}" for x in d)


def check_gibbs(rng):
    worst = 0.0
    for n in (2, 3, 4):
        r = gibbs_demo(random_two_local(n, rng), 1.0)
        worst = max(worst, abs(r.gamma - r.gamma_formula), r.purification_error,
                    abs(r.spectral_gamma_lambda - r.spectral_closed_form))
    return worst < 1e-10, f"max error {worst:.1e}"


def check_cli_round_trip(rng):
    circ = random_circuit(2, 1, 1, rng)
    j = circuit_to_json(circ)
    ok = circuit_to_json(circuit_from_json(j)) == j
    h = cut_coupling_hamiltonian(2, 0.5)
    hj = hamiltonian_to_json(h)
    ok &= hamiltonian_to_json(hamiltonian_from_json(hj)) == hj
    return ok, "serialize(parse(x)) is stable"


def check_cli_determinism(rng):
    # imported here: the cli module itself imports this suite
    from .cli import RunConfig, dispatch

    with tempfile.TemporaryDirectory() as tmp:
        texts = []
        for i in range(2):
            out = Path(tmp) / f"run{i}.csv"
            code = dispatch(RunConfig("bench-extreme", n=2, seed=7, out=str(out), fmt="csv"))
            texts.append(out.read_bytes() if code == 0 else None)
    return texts[0] is not None and texts[0] == texts[1], "byte-identical bench-extreme output"


CHECKS: dict[str, Callable] = {
    "qcore.partial_trace": check_partial_trace,
    "qcore.kraus_trace_preserving": check_kraus,
    "qcore.purify": check_purify,
    "qcore.schmidt_reconstruct": check_schmidt,
    "qcore.channel_trace": check_channel_trace,
    "qcore.norms_and_tensor": check_norms_and_tensor,
    "matrixize.round_trip": check_round_trip,
    "matrixize.overlap_via_trace": check_overlaps,
    "matrixize.entropy_chain": check_entropy_chain,
    "matrixize.bell_pauli": check_bell_paulis,
    "encoders.ubse_certification": check_ubse,
    "encoders.dmse_certification": check_dmse,
    "encoders.cbe_action_identity": check_cbe_action,
    "encoders.trotter_action": check_trotter_action,
    "encoders.efficiency_optimality": check_efficiency_optimality,
    "encoders.composition": check_composition,
    "encoders.canonical_form": check_canonical,
    "estimators.exact_identities": check_exact_identities,
    "estimators.consistency": check_consistency,
    "estimators.grover_geometry": check_grover,
    "estimators.unitarity": check_unitarity,
    "estimators.query_accounting": check_query_accounting,
    "experiments.determinism": check_determinism,
    "experiments.extreme_ratios": check_extreme_rows,
    "experiments.two_design": check_two_design,
    "experiments.gibbs": check_gibbs,
    "cli.round_trip": check_cli_round_trip,
    "cli.determinism": check_cli_determinism,
}


def run_invariant_suite(seed: int = 2024, only=None) -> list:
    results = []
    names = list(CHECKS) if only is None else [n for n in CHECKS if n in set(only)]
    for i, name in enumerate(names):
        rng = np.random.default_rng([seed, i])
        start = time.perf_counter()
        try:
            passed, detail = CHECKS[name](rng)
        except Exception as exc:  # a crash counts as a failed invariant
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
