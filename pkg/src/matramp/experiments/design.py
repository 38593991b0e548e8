"""How close ``{2^{-n/2} vec(U) : U Haar}`` comes to a 2n-qubit state 2-design.

Label the four n-qubit systems of ``|B>|B>`` as 1, 2, 3, 4. The second-moment
operator and the Haar state average are both combinations of ``I`` and ``SWAP``
on the pairs (1,3) and (2,4), so their difference is diagonal in the joint
symmetric/antisymmetric decomposition of those pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ResourceLimitError
from ..qcore import check_budget, haar_random_unitary, make_rng


@dataclass(frozen=True)
class DesignReport:
    n: int
    exact_distance: float
    mc_distance: float
    bound: float
    mc_samples: int
    mc_z_scores: tuple


def moment_coefficients(n: int) -> dict:
    """Coefficients ``c[(a, b)]`` of ``SWAP_13^a SWAP_24^b`` in the averaged two-copy operator."""
    d = 2**n
    c = 1 / (d * d - 1)
    return {(0, 0): c * d**-2, (0, 1): -c * d**-3, (1, 1): c * d**-2, (1, 0): -c * d**-3}


def target_coefficients(n: int) -> dict:
    """Haar 2n-qubit state average ``(I + SWAP_13 SWAP_24) / (D (D + 1))``, ``D = 4^n``."""
    big = 4**n
    c = 1 / (big * (big + 1))
    return {(0, 0): c, (0, 1): 0.0, (1, 0): 0.0, (1, 1): c}


def _combination_trace_norm(coeffs: dict, d: int) -> float:
    total = 0.0
    mult = {1: d * (d + 1) // 2, -1: d * (d - 1) // 2}
    for s1 in (1, -1):
        for s2 in (1, -1):
            ev = sum(c * s1**a * s2**b for (a, b), c in coeffs.items())
            total += abs(ev) * mult[s1] * mult[s2]
    return total


def exact_trace_distance(n: int) -> float:
    """``1/2 ||avg - haar||_1`` from the closed-form spectrum."""
    diff = {k: moment_coefficients(n)[k] - target_coefficients(n)[k] for k in moment_coefficients(n)}
    return 0.5 * _combination_trace_norm(diff, 2**n)


def distance_bound(n: int) -> float:
    q = 2 ** (2 * n)
    return 2 * q / (q * q - 1) + 2 * q / (q**3 - q) + 2 / (q - 1)


def permutation_operator(n: int, a: int, b: int) -> np.ndarray:
    """Dense ``SWAP_13^a SWAP_24^b`` on four n-qubit systems."""
    d = 2**n
    dim = d**4
    check_budget(4 * n)
    perm = [0, 1, 2, 3]
    if a:
        perm[0], perm[2] = perm[2], perm[0]
    if b:
        perm[1], perm[3] = perm[3], perm[1]
    return np.eye(dim).reshape([d] * 8).transpose(perm + [4, 5, 6, 7]).reshape(dim, dim)


def dense_operator(coeffs: dict, n: int) -> np.ndarray:
    return sum(c * permutation_operator(n, a, b) for (a, b), c in coeffs.items() if c)


def _pair_trace(o1, o3, swapped: bool) -> complex:
    return np.trace(o1 @ o3) if swapped else np.trace(o1) * np.trace(o3)


def observable_expectation(coeffs: dict, ops) -> float:
    """``Tr((O1 (x) O2 (x) O3 (x) O4) sum_ab c_ab SWAP_13^a SWAP_24^b)``."""
    o1, o2, o3, o4 = ops
    val = sum(c * _pair_trace(o1, o3, a) * _pair_trace(o2, o4, b)
              for (a, b), c in coeffs.items())
    return float(np.real(val))


def _random_hermitian(d: int, rng) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def two_design_check(n: int, mc_samples: int = 10_000, rng=None, observables: int = 4,
                     chunk: int = 500) -> DesignReport:
    """Exact distance, Monte-Carlo distance and per-observable agreement z-scores.

    The Monte-Carlo average of ``|B><B|^{(x)2}`` is compared with the closed form
    on random product observables ``O1 (x) O2 (x) O3 (x) O4``; each z-score is the
    deviation in units of the sample standard error.
    """
    if n not in (1, 2, 3):
        raise ResourceLimitError("two_design_check supports n in {1, 2, 3}")
    check_budget(4 * n)
    rng = make_rng(rng)
    d = 2**n
    coeffs = moment_coefficients(n)
    obs = [[_random_hermitian(d, rng) for _ in range(4)] for _ in range(observables)]
    samples = np.zeros((observables, mc_samples))
    dim = d**4
    mc_avg = np.zeros((dim, dim), dtype=complex)
    done = 0
    while done < mc_samples:
        batch = min(chunk, mc_samples - done)
        vecs = np.empty((batch, dim), dtype=complex)
        for i in range(batch):
            u = haar_random_unitary(n, rng)
            b = u.reshape(-1) / math.sqrt(d)
            vecs[i] = np.kron(b, b)
            for j, (o1, o2, o3, o4) in enumerate(obs):
                # <B|O1 (x) O2|B> = Tr(U^dag O1 U O2^T) / d
                first = np.trace(u.conj().T @ o1 @ u @ o2.T) / d
                second = np.trace(u.conj().T @ o3 @ u @ o4.T) / d
                samples[j, done + i] = np.real(first * second)
        mc_avg += vecs.T @ vecs.conj()
        done += batch
    mc_avg /= mc_samples
    haar = dense_operator(target_coefficients(n), n)
    mc_distance = 0.5 * float(np.abs(np.linalg.eigvalsh(mc_avg - haar)).sum())
    z = []
    for j, ops in enumerate(obs):
        exact = observable_expectation(coeffs, ops)
        se = samples[j].std(ddof=1) / math.sqrt(mc_samples)
        z.append(float(abs(samples[j].mean() - exact) / se))
    return DesignReport(n, exact_trace_distance(n), mc_distance, distance_bound(n),
                        mc_samples, tuple(z))
