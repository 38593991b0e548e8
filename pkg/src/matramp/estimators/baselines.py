"""Direct overlap estimation without state matrixization (``gamma lambda = 1``)."""

from __future__ import annotations

from ..matrixize import BipartiteState, overlap_via_trace
from ..qcore import make_rng
from .sampling import AE_SCHEDULE, HOEFFDING_C, hadamard_estimate, iterative_ae
from .tasks import EstimationResult, check_part


def _direct_mu(a: BipartiteState, b: BipartiteState, part: str) -> float:
    z = overlap_via_trace(a, b)
    return float(z.real if check_part(part) == "real" else z.imag)


def direct_hadamard_baseline(a: BipartiteState, b: BipartiteState, epsilon: float,
                             delta: float, rng=None, part: str = "real",
                             seed=None) -> EstimationResult:
    """Hadamard test on ``<B|A>`` itself: ``P(0) = (1 + mu)/2``, one query per shot."""
    rng = make_rng(seed if rng is None else rng)
    mu = _direct_mu(a, b, part)
    run = hadamard_estimate(mu, 1.0, mu, epsilon, delta, rng)
    return EstimationResult(
        estimate=float(run["estimate"]),
        queries_used=run["shots"],
        shots=run["shots"],
        exact_value=mu,
        seed=seed,
        method="direct-sql",
        mode=run["mode"],
        flags=run["flags"],
        prep_queries=run["shots"],
        metadata={"hoeffding_c": HOEFFDING_C, "scale": 1.0},
    )


def direct_ae_baseline(a: BipartiteState, b: BipartiteState, epsilon: float, delta: float,
                       rng=None, part: str = "real", seed=None) -> EstimationResult:
    """Iterative AE on the amplitude ``1/2 + mu/2`` of a direct real-part oracle."""
    rng = make_rng(seed if rng is None else rng)
    mu = _direct_mu(a, b, part)
    amp = 0.5 + mu / 2
    run = iterative_ae(amp, 1.0, mu, epsilon, delta, rng)
    return EstimationResult(
        estimate=float(run["estimate"]),
        queries_used=run["queries"],
        shots=run["shots"],
        exact_value=mu,
        seed=seed,
        method="direct-hl",
        mode=run["mode"],
        flags=run["flags"],
        prep_queries=run["queries"],
        rounds=run["rounds"],
        metadata={"ae_schedule": AE_SCHEDULE, "shots_per_round": run["shots_per_round"],
                  "amplitude": amp, "scale": 1.0},
    )
