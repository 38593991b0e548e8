"""gamma * lambda across circuit depths, evolution times and B-norms (no sampling)."""

from __future__ import annotations

import math

from ..encoders.cbe import cbe_compile_trotter
from ..encoders.programs import PauliHamiltonian
from ..errors import ValidationError
from .tables import ResultTable

SWEEP_COLUMNS = ("kind", "parameter", "b_norm1", "n", "gamma", "lam", "gamma_lambda",
                 "speedup_sql", "speedup_hl")


def cut_coupling_hamiltonian(n: int, t: float, r: int | None = None) -> PauliHamiltonian:
    """Heisenberg couplings between upper qubit i and lower qubit n+i, plus upper-half ZZ chains."""
    terms = []
    for i in range(n):
        for p in "XYZ":
            label = ["I"] * (2 * n)
            label[i] = label[n + i] = p
            terms.append((1.0 / (3 * n), "".join(label)))
    for i in range(n - 1):
        label = ["I"] * (2 * n)
        label[i] = label[i + 1] = "Z"
        terms.append((0.5, "".join(label)))
    return PauliHamiltonian(n, terms, t, r)


def _row(kind, param, b_norm, n, gamma):
    if b_norm < 1 - 1e-12:
        raise ValidationError(f"||B||_1 = {b_norm} is below 1")
    lam = 2 ** (n / 2) / b_norm
    gl = gamma * lam
    return {"kind": kind, "parameter": param, "b_norm1": b_norm, "n": n, "gamma": gamma,
            "lam": lam, "gamma_lambda": gl, "speedup_sql": gl**2, "speedup_hl": gl}


def run_regime_sweep(depths=(), times=(), b_norms=(1.0,), n: int = 2,
                     hamiltonian=None, steps_per_time: int = 200) -> ResultTable:
    """Tabulate ``gamma * lambda`` for K cut-crossing CNOTs and for Trotterized evolution.

    Circuit rows use ``gamma = 2^{-1-K/2}``. Trotter rows compile the Hamiltonian
    (``hamiltonian(t)`` or the default cut-coupling model) and use
    ``gamma = eta / 2``.
    """
    table = ResultTable("regime", n, [], columns=SWEEP_COLUMNS)
    for k in depths:
        gamma = 2 ** (-1 - k / 2)
        for b in b_norms:
            table.rows.append(_row("circuit", k, b, n, gamma))
    for t in times:
        if hamiltonian is None:
            h = cut_coupling_hamiltonian(n, t, max(1, math.ceil(steps_per_time * t)))
        else:
            h = hamiltonian(t)
        _, eta = cbe_compile_trotter(h)
        for b in b_norms:
            row = _row("trotter", t, b, n, eta / 2)
            row["eta_closed_form"] = math.exp(-h.interaction_norm * t)
            table.rows.append(row)
    table.summary = {"rows": len(table.rows)}
    return table
