"""Query-count comparison of indirect and direct estimation on a product/Bell instance.

``|A>`` is a product state (gamma = 1/2) and ``|B>`` a Bell-basis state
(lambda = 2^{n/2}), so ``gamma * lambda = 2^{n/2 - 1}`` is as large as it gets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ..encoders.dmse import dmse_initial_product
from ..encoders.programs import rotation
from ..encoders.ubse import ubse_from_bell_label
from ..errors import ResourceLimitError, ValidationError
from ..estimators.baselines import direct_ae_baseline, direct_hadamard_baseline
from ..estimators.sampling import (
    AE_SCHEDULE,
    HOEFFDING_C,
    amplitude_estimation_run,
    hadamard_test_run,
)
from ..estimators.tasks import EstimationTask
from ..matrixize import overlap_via_trace
from ..qcore import Y, apply_to_state, max_qubits
from .tables import ResultTable

METHODS = ("indirect-sql", "indirect-hl", "direct-sql", "direct-hl")


@dataclass(frozen=True)
class BenchScenario:
    name: str
    n: int
    a_family: str = "product"
    b_family: str = "bell-label"
    epsilon: float = 0.25
    delta: float = 0.05
    seeds: tuple = tuple(range(50))
    methods: tuple = METHODS

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValidationError(f"unknown methods {sorted(unknown)}")
        # widest layout: the h.l. register [c, a1, a2, flag, n] with a pure |A>
        if 4 + self.n > max_qubits() or 2 * self.n > max_qubits():
            raise ResourceLimitError(f"n={self.n} exceeds the register budget")


def _product_pair(n: int, alpha: float):
    upper = np.zeros(1 << n, dtype=complex)
    upper[0] = 1
    lower = apply_to_state(rotation(Y, alpha), [0], upper.conj())
    return upper, lower


def engineered_instance(n: int, mu_target: float):
    """UBSE of ``|Phi+>^n``, product DMSE and the angle giving ``Re<B|A> ~ mu_target``.

    The lower factor is rotated by ``R_y(alpha)`` on its first qubit and alpha is
    found by bisection.
    """
    ubse = ubse_from_bell_label(["phi+"] * n)

    def mu_of(alpha):
        upper, lower = _product_pair(n, alpha)
        return overlap_via_trace(dmse_initial_product(upper, lower).a, ubse.b).real

    top = mu_of(0.0)
    if not 0 < mu_target <= top + 1e-12:
        raise ValidationError(f"target mu={mu_target} outside (0, {top}]")
    alpha = 0.0 if abs(mu_target - top) < 1e-12 else bisect(
        lambda x: mu_of(x) - mu_target, 0.0, np.pi, xtol=1e-13)
    upper, lower = _product_pair(n, alpha)
    return ubse, dmse_initial_product(upper, lower), alpha


def _run_method(method: str, task: EstimationTask, rng):
    if method == "indirect-sql":
        return hadamard_test_run(task, rng)
    if method == "indirect-hl":
        return amplitude_estimation_run(task, rng)
    if method == "direct-sql":
        return direct_hadamard_baseline(task.dmse.a, task.ubse.b, task.epsilon, task.delta,
                                        rng, seed=task.seed)
    return direct_ae_baseline(task.dmse.a, task.ubse.b, task.epsilon, task.delta, rng,
                              seed=task.seed)


def run_scenario(scenario: BenchScenario, mu_targets: dict) -> ResultTable:
    table = ResultTable(scenario.name, scenario.n, list(scenario.seeds))
    for t_idx, (label, target) in enumerate(mu_targets.items()):
        ubse, dmse, alpha = engineered_instance(scenario.n, target)
        scale = dmse.gamma * ubse.lam
        medians = {}
        for m_idx, method in enumerate(scenario.methods):
            queries = []
            for seed in scenario.seeds:
                task = EstimationTask("real", ubse, dmse, scenario.epsilon, scenario.delta,
                                      seed=seed)
                # one independent stream per (seed, method, target) cell
                rng = np.random.default_rng([seed, m_idx, t_idx])
                res = _run_method(method, task, rng)
                queries.append(res.queries_used)
                table.rows.append({
                    "scenario": f"{scenario.name}:{label}",
                    "method": method,
                    "n": scenario.n,
                    "mu_exact": res.exact_value,
                    "estimate": res.estimate,
                    "epsilon": scenario.epsilon,
                    "delta": scenario.delta,
                    "shots": res.shots,
                    "queries": res.queries_used,
                    "seed": seed,
                })
            medians[method] = float(np.median(queries))
        entry = {"mu_target": target, "mu_exact": task.mu, "alpha": alpha,
                 "gamma_lambda": scale, "median_queries": medians}
        for kind, power in (("sql", 2), ("hl", 1)):
            ind, dire = medians.get(f"indirect-{kind}"), medians.get(f"direct-{kind}")
            if ind is not None and dire is not None:
                ratio = ind / dire
                predicted = scale ** -power
                entry[f"ratio_{kind}"] = ratio
                entry[f"predicted_{kind}"] = predicted
                entry[f"ratio_{kind}_within_2x"] = predicted / 2 <= ratio <= 2 * predicted
        table.summary[label] = entry
    table.summary["metadata"] = {"hoeffding_c": HOEFFDING_C, "ae_schedule": AE_SCHEDULE,
                                 "methods": list(scenario.methods)}
    return table


def run_extreme_case(n: int, epsilon: float = 0.25, delta: float = 0.05, seeds=range(50),
                     methods=METHODS, targets=("sqrt", "full")) -> ResultTable:
    """Median queries per method at ``|mu| ~ 2^{-n/2}`` ("sqrt") and ``2^{-n}`` ("full")."""
    if n > 4:
        raise ResourceLimitError("the extreme-case benchmark is limited to n <= 4")
    scenario = BenchScenario("extreme", n, epsilon=epsilon, delta=delta, seeds=tuple(seeds),
                             methods=tuple(methods))
    all_targets = {"sqrt": 2 ** (-n / 2), "full": 2.0 ** -n}
    return run_scenario(scenario, {k: all_targets[k] for k in targets})


def predicted_gamma_lambda(n: int) -> float:
    return 2 ** (n / 2 - 1)

