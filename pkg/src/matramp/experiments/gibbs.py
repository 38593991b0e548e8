"""A Gibbs state read as a density-matrix encoding of its own vectorization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..encoders.programs import PauliHamiltonian
from ..errors import ResourceLimitError
from ..qcore import make_rng, partial_trace, pauli_string


@dataclass(frozen=True)
class GibbsReport:
    n: int
    beta: float
    gamma: float
    gamma_formula: float
    purification_error: float
    spectral_gamma_lambda: float
    spectral_closed_form: float


def random_two_local(n: int, rng) -> list:
    """Random fields on every qubit plus random XX/YY/ZZ couplings on neighbours."""
    rng = make_rng(rng)
    terms = []
    for i in range(n):
        for p in "XZ":
            label = ["I"] * n
            label[i] = p
            terms.append((float(rng.normal()), "".join(label)))
    for i in range(n - 1):
        for p in "XYZ":
            label = ["I"] * n
            label[i] = label[i + 1] = p
            terms.append((float(rng.normal()), "".join(label)))
    return terms


def spectral_family_gamma_lambda(n: int) -> float:
    """gamma * lambda for eigenvalues ``p0 = 2^{-n/2}`` and the rest uniform, with lambda = 2^{n/2}."""
    d = 2**n
    p0 = 2 ** (-n / 2)
    p1 = (1 - p0) / (d - 1)
    gamma = math.sqrt(p0**2 + (d - 1) * p1**2)
    return 2 ** (n / 2) * gamma


def spectral_family_closed_form(n: int) -> float:
    d = 2**n
    return math.sqrt((d - 1) + d * (1 - 2 ** (-n / 2)) ** 2) / math.sqrt(d - 1)


def gibbs_demo(h, beta: float) -> GibbsReport:
    """Check the encoding efficiency and purification identity of ``rho_beta``.

    ``h`` is a PauliHamiltonian or a list of ``(coefficient, pauli_string)``
    terms on n qubits. ``vec(rho_beta)`` normalized is a purification of
    ``rho_{2 beta}``, and ``rho_beta`` encodes it with ``gamma = ||rho_beta||_F``.
    """
    terms = h.terms if isinstance(h, PauliHamiltonian) else list(h)
    n = len(terms[0][1])
    if n > 5:
        raise ResourceLimitError("gibbs_demo uses dense exponentials; n <= 5")
    ham = sum(c * pauli_string(p) for c, p in terms)
    w = expm(-beta * ham)
    rho = w / np.trace(w).real
    w2 = expm(-2 * beta * ham)
    rho2 = w2 / np.trace(w2).real

    gamma = float(np.linalg.norm(rho))
    gamma_formula = math.sqrt(np.trace(w2).real) / np.trace(w).real
    vec = rho.reshape(-1) / gamma
    reduced = partial_trace(np.outer(vec, vec.conj()), range(n))
    return GibbsReport(
        n=n,
        beta=beta,
        gamma=gamma,
        gamma_formula=float(gamma_formula),
        purification_error=float(np.abs(reduced - rho2).max()),
        spectral_gamma_lambda=spectral_family_gamma_lambda(n),
        spectral_closed_form=spectral_family_closed_form(n),
    )
