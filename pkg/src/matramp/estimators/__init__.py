"""Overlap estimators built on state matrixization, plus direct baselines."""

from .baselines import direct_ae_baseline, direct_hadamard_baseline
from .composites import (
    GroverOperator,
    apply_U2,
    build_U1,
    build_U2,
    build_W,
    exact_hl_amplitude,
    exact_sql_expectation,
    grover_operator,
)
from .protocols import (
    ProtocolEstimate,
    error_budget_split,
    estimate_gamma_protocol,
    estimate_lambda_protocol,
)
from .sampling import amplitude_estimation_run, hadamard_test_run, iterative_ae
from .tasks import EstimationResult, EstimationTask

__all__ = [
    "EstimationResult",
    "EstimationTask",
    "GroverOperator",
    "ProtocolEstimate",
    "amplitude_estimation_run",
    "apply_U2",
    "build_U1",
    "build_U2",
    "build_W",
    "direct_ae_baseline",
    "direct_hadamard_baseline",
    "error_budget_split",
    "estimate_gamma_protocol",
    "estimate_lambda_protocol",
    "exact_hl_amplitude",
    "exact_sql_expectation",
    "grover_operator",
    "hadamard_test_run",
    "iterative_ae",
]
