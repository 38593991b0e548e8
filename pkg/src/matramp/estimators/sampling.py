"""Measurement-statistics simulation of the Hadamard test and iterative amplitude estimation.

Both samplers draw outcomes from the exact probabilities of the circuit instead of
collapsing a statevector shot by shot; the statistics are identical.
"""

from __future__ import annotations

import math

from scipy.stats import beta

from ..qcore import make_rng
from .composites import exact_hl_amplitude, exact_sql_expectation
from .protocols import error_budget_split, measure_scale
from .tasks import EstimationResult, EstimationTask

HOEFFDING_C = 2.0
AE_SHOTS_CONSTANT = 50
MU_FLOOR = 1e-6
AE_SCHEDULE = "powers 0,1,2,4,8,...; Clopper-Pearson interval tracking"


def hoeffding_shots(scale: float, mu: float, epsilon: float, delta: float,
                    additive: bool = False) -> int:
    """``ceil(C (scale |mu| eps)^-2 ln(2/delta))``; additive mode drops ``|mu|``."""
    width = scale * epsilon * (1.0 if additive else abs(mu))
    return math.ceil(HOEFFDING_C * math.log(2 / delta) / width**2)


def hadamard_estimate(value: float, scale: float, mu: float, epsilon: float, delta: float,
                      rng, shots: int | None = None) -> dict:
    """Sample the Hadamard test with ``P(0) = (1 + value)/2`` and rescale by ``1/scale``."""
    additive = abs(mu) < MU_FLOOR
    if shots is None:
        shots = hoeffding_shots(scale, mu, epsilon, delta, additive)
    p = min(max((1 + value) / 2, 0.0), 1.0)
    zeros = int(rng.binomial(shots, p))
    mean = 2 * zeros / shots - 1
    return {
        "estimate": mean / scale,
        "shots": shots,
        "mode": "additive" if additive else "relative",
        "flags": ("mu_below_floor",) if additive else (),
    }


def clopper_pearson(successes: int, trials: int, alpha: float) -> tuple:
    """Exact two-sided binomial confidence interval at level ``1 - alpha``."""
    lo = 0.0 if successes == 0 else beta.ppf(alpha / 2, successes, trials - successes + 1)
    hi = 1.0 if successes == trials else beta.ppf(1 - alpha / 2, successes + 1,
                                                  trials - successes)
    return float(lo), float(hi)


def _preimage(intervals, power: int, p_lo: float, p_hi: float) -> list:
    """Points theta of the tracked intervals with ``sin^2(power theta)`` in [p_lo, p_hi]."""
    a_lo = math.asin(math.sqrt(p_lo))
    a_hi = math.asin(math.sqrt(p_hi))
    out = []
    for lo, hi in intervals:
        k_first = math.floor(power * lo / math.pi)
        k_last = math.floor(power * hi / math.pi)
        for k in range(k_first, k_last + 1):
            base = k * math.pi
            for x0, x1 in ((base + a_lo, base + a_hi),
                           (base + math.pi - a_hi, base + math.pi - a_lo)):
                s, e = max(lo, x0 / power), min(hi, x1 / power)
                if s <= e:
                    out.append((s, e))
    return _merge(out)


def _merge(intervals) -> list:
    merged = []
    for s, e in sorted(intervals):
        if merged and s <= merged[-1][1] + 1e-15:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return merged


def planned_rounds(scale: float, mu: float, epsilon: float, additive: bool) -> int:
    """Rounds needed for the schedule to reach the target amplitude resolution."""
    width = scale * epsilon * (1.0 if additive else abs(mu)) / 2
    return max(2, math.ceil(math.log2(1.0 / width)) + 3)


def _powers(rounds: int) -> list:
    return [0] + [1 << i for i in range(rounds - 1)]


def iterative_ae(amplitude: float, scale: float, mu: float, epsilon: float, delta: float,
                 rng) -> dict:
    """Estimate ``mu = (2a - 1)/scale`` from Grover-amplified Bernoulli samples.

    The feasible set for ``theta = asin(a)`` starts as ``[0, pi/2]``; each round
    intersects it with the Clopper-Pearson preimage of its sample mean. The run
    stops once every feasible ``mu`` lies within ``epsilon`` relative error of the
    midpoint of the feasible range.
    """
    additive = abs(mu) < MU_FLOOR
    rounds = planned_rounds(scale, mu, epsilon, additive)
    shots = math.ceil(AE_SHOTS_CONSTANT * math.log(2 * rounds / delta))
    alpha = delta / rounds
    theta = math.asin(min(max(amplitude, 0.0), 1.0))
    feasible = [(0.0, math.pi / 2)]
    queries = used_shots = 0
    flags = ["mu_below_floor"] if additive else []
    done = False
    executed = 0
    for j in _powers(rounds):
        power = 2 * j + 1
        p = math.sin(power * theta) ** 2
        hits = int(rng.binomial(shots, min(max(p, 0.0), 1.0)))
        p_lo, p_hi = clopper_pearson(hits, shots, alpha)
        new = _preimage(feasible, power, p_lo, p_hi)
        if new:
            feasible = new
        else:
            flags.append("inconsistent_round")
        queries += shots * power * 2
        used_shots += shots
        executed += 1
        mu_lo = (2 * math.sin(feasible[0][0]) - 1) / scale
        mu_hi = (2 * math.sin(feasible[-1][1]) - 1) / scale
        half = (mu_hi - mu_lo) / 2
        if additive:
            done = half <= epsilon
        else:
            done = mu_lo * mu_hi > 0 and half <= epsilon * min(abs(mu_lo), abs(mu_hi))
        if done:
            break
    if not done:
        flags.append("schedule_exhausted")
    return {
        "estimate": (mu_lo + mu_hi) / 2,
        "interval": (mu_lo, mu_hi),
        "queries": queries,
        "shots": used_shots,
        "rounds": executed,
        "shots_per_round": shots,
        "mode": "additive" if additive else "relative",
        "flags": tuple(flags),
    }


def _normalization(task: EstimationTask, rng) -> tuple:
    """Per-factor epsilon, the ``gamma * lambda`` used to rescale, extra queries, metadata."""
    if not task.self_measure:
        return task.epsilon, task.scale, 0, {}
    eps = error_budget_split(task.epsilon)
    scale, cost, meta = measure_scale(task, eps, rng)
    return eps, scale, cost, meta


def hadamard_test_run(task: EstimationTask, rng=None) -> EstimationResult:
    """Simulated s.q.l. estimation; one U_B (or U_B^dag) query per shot."""
    rng = make_rng(task.seed if rng is None else rng)
    value = exact_sql_expectation(task)
    eps, scale, extra, meta = _normalization(task, rng)
    run = hadamard_estimate(value, task.scale, task.mu, eps, task.delta, rng)
    return EstimationResult(
        estimate=float(run["estimate"] * task.scale / scale),
        queries_used=run["shots"],
        shots=run["shots"],
        exact_value=task.mu,
        seed=task.seed,
        method="indirect-sql",
        mode=run["mode"],
        flags=run["flags"],
        prep_queries=run["shots"] + extra,
        metadata={"hoeffding_c": HOEFFDING_C, "scale": task.scale, **meta},
    )


def amplitude_estimation_run(task: EstimationTask, rng=None) -> EstimationResult:
    """Simulated h.l. estimation with iterative amplitude estimation.

    ``queries_used`` counts U_B and U_B^dag calls; ``prep_queries`` counts the
    matching U_SA and U_SA^dag calls (plus protocol copies when gamma and lambda
    are measured).
    """
    rng = make_rng(task.seed if rng is None else rng)
    a = exact_hl_amplitude(task)
    eps, scale, extra, meta = _normalization(task, rng)
    run = iterative_ae(a, task.scale, task.mu, eps, task.delta, rng)
    return EstimationResult(
        estimate=float(run["estimate"] * task.scale / scale),
        queries_used=run["queries"],
        shots=run["shots"],
        exact_value=task.mu,
        seed=task.seed,
        method="indirect-hl",
        mode=run["mode"],
        flags=run["flags"],
        prep_queries=run["queries"] + extra,
        rounds=run["rounds"],
        metadata={
            "ae_schedule": AE_SCHEDULE,
            "shots_per_round": run["shots_per_round"],
            "amplitude": a,
            "scale": task.scale,
            **meta,
        },
    )
