"""Scenario runners for query counts, efficiencies, the 2-design check and the Gibbs example."""

from .design import DesignReport, distance_bound, exact_trace_distance, two_design_check
from .extreme import BenchScenario, engineered_instance, run_extreme_case, run_scenario
from .gibbs import GibbsReport, gibbs_demo, random_two_local
from .regimes import cut_coupling_hamiltonian, run_regime_sweep
from .tables import ResultTable

__all__ = [
    "BenchScenario",
    "DesignReport",
    "GibbsReport",
    "ResultTable",
    "cut_coupling_hamiltonian",
    "distance_bound",
    "engineered_instance",
    "exact_trace_distance",
    "gibbs_demo",
    "random_two_local",
    "run_extreme_case",
    "run_regime_sweep",
    "run_scenario",
    "two_design_check",
]
