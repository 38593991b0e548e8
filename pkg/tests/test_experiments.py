import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matramp.errors import ResourceLimitError, ValidationError
from matramp.experiments import (
    BenchScenario, ResultTable, distance_bound, engineered_instance, exact_trace_distance,
    gibbs_demo, random_two_local, run_extreme_case, run_regime_sweep, two_design_check,
)
from matramp.experiments.design import dense_operator, moment_coefficients, target_coefficients
from matramp.experiments.gibbs import spectral_family_closed_form, spectral_family_gamma_lambda
from matramp.experiments.tables import fmt_float

# exact rational trace distances, frozen from a dense eigenvalue oracle
FROZEN_DISTANCE = {1: Fraction(3, 20), 2: Fraction(15, 136), 3: Fraction(63, 1040)}


def test_extreme_instance():
    ub, dm, _ = engineered_instance(4, 0.25)
    assert dm.gamma * ub.lam == pytest.approx(2)
    table = run_extreme_case(4, seeds=range(5), targets=("sqrt",))
    assert table.summary["sqrt"]["gamma_lambda"] == pytest.approx(2)
    assert table.summary["sqrt"]["mu_exact"] == pytest.approx(0.25, abs=1e-10)
    assert len(table.rows) == 4 * 5


def test_extreme_ratios_track_prediction():
    for n in (2, 3, 4):
        s = run_extreme_case(n, seeds=range(50)).summary
        for label in ("sqrt", "full"):
            for kind in ("sql", "hl"):
                assert s[label][f"ratio_{kind}_within_2x"], (n, label, kind)


def test_extreme_deterministic():
    a = run_extreme_case(3, seeds=range(4))
    b = run_extreme_case(3, seeds=range(4))
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_scenario_guards():
    with pytest.raises(ResourceLimitError):
        run_extreme_case(5)
    with pytest.raises(ValidationError):
        BenchScenario("x", 2, methods=("magic",))
    with pytest.raises(ValidationError):
        engineered_instance(2, 0.9)


def test_regime_sweep_examples():
    n = 4
    t = run_regime_sweep(depths=[0, n], b_norms=[1.0, 2.0], n=n)
    rows = {(r["parameter"], r["b_norm1"]): r for r in t.rows}
    assert rows[(0, 1.0)]["gamma_lambda"] == pytest.approx(2 ** (n / 2 - 1))
    assert rows[(n, 1.0)]["gamma_lambda"] == pytest.approx(0.5)
    k = 2
    assert rows[(0, 2.0)]["lam"] >= 2 ** ((n - k) / 2) - 1e-12
    with pytest.raises(ValidationError):
        run_regime_sweep(depths=[1], b_norms=[0.5])


def test_regime_sweep_trotter():
    t = run_regime_sweep(times=[0.25, 0.5], n=2)
    for row in t.rows:
        assert row["kind"] == "trotter"
        assert row["gamma"] == pytest.approx(row["eta_closed_form"] / 2, rel=0.01)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_design_frozen(n):
    assert exact_trace_distance(n) == pytest.approx(float(FROZEN_DISTANCE[n]), rel=1e-12)
    assert exact_trace_distance(n) <= distance_bound(n)


@pytest.mark.parametrize("n", [1, 2])
def test_two_design_dense_spectrum(n):
    diff = {k: moment_coefficients(n)[k] - target_coefficients(n)[k] for k in moment_coefficients(n)}
    ev = np.linalg.eigvalsh(dense_operator(diff, n))
    assert 0.5 * np.abs(ev).sum() == pytest.approx(exact_trace_distance(n), rel=1e-10)


def test_two_design_average_is_a_state():
    for n in (1, 2):
        avg = dense_operator(moment_coefficients(n), n)
        assert np.trace(avg) == pytest.approx(1)
        assert np.linalg.eigvalsh(avg).min() > -1e-12


def test_two_design_monotone():
    d = [exact_trace_distance(n) for n in (1, 2, 3)]
    assert d[0] > d[1] > d[2]


def test_two_design_mc_small():
    rep = two_design_check(1, 10_000, np.random.default_rng(0))
    assert max(rep.mc_z_scores) < 3
    assert rep.mc_distance < 0.2
    with pytest.raises(ResourceLimitError):
        two_design_check(4)


def test_gibbs_beta_zero():
    for n in (1, 2, 3):
        rep = gibbs_demo(random_two_local(n, np.random.default_rng(n)), 0.0)
        assert rep.gamma == pytest.approx(2 ** (-n / 2))
        assert rep.gamma * 2 ** (n / 2) == pytest.approx(1)


def test_gibbs_spectral_family():
    assert spectral_family_closed_form(4) == pytest.approx(math.sqrt(1.6), abs=1e-12)
    for n in range(1, 6):
        assert abs(spectral_family_gamma_lambda(n) - spectral_family_closed_form(n)) < 1e-10


@given(st.integers(0, 10_000), st.integers(2, 4), st.floats(0.1, 2.0))
def test_gibbs_identity(seed, n, beta):
    rep = gibbs_demo(random_two_local(n, np.random.default_rng(seed)), beta)
    assert abs(rep.gamma - rep.gamma_formula) < 1e-10
    assert rep.purification_error < 1e-10


def test_table_output():
    t = ResultTable("demo", 2, [0, 1, 2])
    t.rows.append({"scenario": "demo", "method": "m", "n": 2, "mu_exact": 0.1, "estimate": 1 / 3,
                   "epsilon": 0.25, "delta": 0.05, "shots": 10, "queries": 10, "seed": 0})
    assert t.filename == "demo_2_0-2"
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows[0][:3] == ["scenario", "method", "n"]
    assert float(rows[1][4]) == 1 / 3 and rows[1][4] == "0.33333333333333331"
    assert json.loads(t.to_json())["rows"][0]["estimate"] == 1 / 3
    assert fmt_float(0.1) == "0.10000000000000001"


def test_table_write(tmp_path):
    t = run_regime_sweep(depths=[1, 2], n=2)
    path = t.write(tmp_path, "csv")
    assert path.name == "regime_2_none.csv"
    assert path.read_text() == t.to_csv()
