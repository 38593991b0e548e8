"""Two-copy protocols that measure gamma and lambda from the encodings themselves."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..encoders.dmse import DmseDensity
from ..encoders.ubse import UbseOperator
from ..qcore import check_budget, dagger, make_rng


@dataclass(frozen=True)
class ProtocolEstimate:
    value: float
    stderr: float
    exact: float
    shots: int | None
    flagged: bool = False


def _swap_registers(q: int) -> np.ndarray:
    """SWAP of two q-qubit registers."""
    d = 1 << q
    return np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)


def _reorder(op: np.ndarray, dims: list, order: list) -> np.ndarray:
    """Permute the tensor factors of an operator: new factor i is old factor order[i]."""
    t = op.reshape(dims + dims)
    r = len(dims)
    t = t.transpose(order + [r + o for o in order])
    d = op.shape[0]
    return t.reshape(d, d)


def gamma_observable(n: int) -> np.ndarray:
    """``(|01><10| + |10><01|) (x) SWAP_{n+n}`` written in the two-copy order (1, n, 1, n)."""
    flip = np.zeros((4, 4))
    flip[1, 2] = flip[2, 1] = 1
    op = np.kron(flip, _swap_registers(n))
    d = 1 << n
    return _reorder(op, [2, 2, d, d], [0, 2, 1, 3])


def lambda_observable(u: UbseOperator) -> np.ndarray:
    """``(U_B (x) U_B^dag)(SWAP_{n+n} (x) I_k (x) I_k)`` in the two-copy order (n, k, n, k)."""
    d, a = 1 << u.n, 1 << u.k
    swap = _reorder(np.kron(_swap_registers(u.n), np.eye(a * a)), [d, d, a, a], [0, 2, 1, 3])
    return np.kron(u.unitary, dagger(u.unitary)) @ swap


def _sample_observable(op: np.ndarray, state: np.ndarray, shots: int, rng) -> tuple:
    """Multinomial sampling of a Hermitian observable in its eigenbasis; returns (mean, stderr)."""
    w, v = np.linalg.eigh(op)
    levels = np.round(w, 8)
    probs = {}
    for lev, col in zip(levels, v.T):
        probs[lev] = probs.get(lev, 0.0) + float(np.real(np.vdot(col, state @ col)))
    values = np.array(list(probs))
    p = np.clip(np.array(list(probs.values())), 0, None)
    counts = rng.multinomial(shots, p / p.sum())
    mean = float(counts @ values / shots)
    var = float(counts @ values**2 / shots - mean**2)
    return mean, math.sqrt(max(var, 0.0) / shots)


def estimate_gamma_protocol(rho: DmseDensity, shots: int | None, rng=None) -> ProtocolEstimate:
    """``gamma = sqrt(Tr(O rho (x) rho) / 2)``; ``shots=None`` returns the exact value."""
    check_budget(2 * (rho.n + 1))
    op = gamma_observable(rho.n)
    two = np.kron(rho.rho, rho.rho)
    exact_mean = float(np.real(np.trace(op @ two)))
    exact = math.sqrt(max(exact_mean, 0.0) / 2)
    if shots is None:
        return ProtocolEstimate(exact, 0.0, exact, None)
    if shots < 1:
        raise ValueError("shots must be positive")
    mean, se = _sample_observable(op, two, shots, make_rng(rng))
    if mean <= 0:
        return ProtocolEstimate(0.0, float("inf"), exact, shots, True)
    value = math.sqrt(mean / 2)
    return ProtocolEstimate(value, se / (4 * value), exact, shots)


def estimate_lambda_protocol(u: UbseOperator, shots: int | None, rng=None) -> ProtocolEstimate:
    """``lambda = sqrt(4^n Re Tr(W rho_I0 (x) rho_I0))`` with ``rho_I0 = I/2^n (x) |0><0|_k``."""
    check_budget(2 * (u.n + u.k))
    w = lambda_observable(u)
    d, a = 1 << u.n, 1 << u.k
    r0 = np.zeros((a, a))
    r0[0, 0] = 1
    rho_i0 = np.kron(np.eye(d) / d, r0)
    exact_mean = float(np.real(np.trace(w @ np.kron(rho_i0, rho_i0))))
    factor = float(d * d)
    exact = math.sqrt(max(factor * exact_mean, 0.0))
    if shots is None:
        return ProtocolEstimate(exact, 0.0, exact, None)
    if shots < 1:
        raise ValueError("shots must be positive")
    rng = make_rng(rng)
    # Hadamard test on W: outcome +1 with probability (1 + Re<W>)/2
    p = min(max((1 + exact_mean) / 2, 0.0), 1.0)
    mean = 2 * rng.binomial(shots, p) / shots - 1
    se = math.sqrt(max(1 - mean**2, 0.0) / shots)
    if mean <= 0:
        return ProtocolEstimate(0.0, float("inf"), exact, shots, True)
    value = math.sqrt(factor * mean)
    return ProtocolEstimate(value, factor * se / (2 * value), exact, shots)


def error_budget_split(epsilon: float) -> float:
    """Relative error allotted to each factor of ``X/(YZ)`` so the ratio stays within epsilon."""
    if not 0 < epsilon < 0.3:
        warnings.warn(f"epsilon={epsilon} outside the small-error regime (0, 0.3)", stacklevel=2)
    return epsilon / math.sqrt(3)


def protocol_shots(mean: float, relative: float, delta: float, slope: float) -> int:
    """Hoeffding shots so that ``sqrt(mean)``-type estimates reach ``relative`` error.

    ``slope`` converts a relative error on the estimated factor into one on the
    sampled mean (2 for square roots).
    """
    width = slope * relative * abs(mean)
    return math.ceil(2 * math.log(2 / delta) / width**2)


def measure_scale(task, eps: float, rng) -> tuple:
    """Measure gamma and lambda to relative error ``eps`` each; return (scale, queries, metadata)."""
    rng = make_rng(rng)
    g_mean = 2 * task.dmse.gamma**2
    l_mean = task.ubse.lam**2 / 4**task.n
    g_shots = protocol_shots(g_mean, eps, task.delta, 2)
    l_shots = protocol_shots(l_mean, eps, task.delta, 2)
    g = estimate_gamma_protocol(task.dmse, g_shots, rng)
    lam = estimate_lambda_protocol(task.ubse, l_shots, rng)
    scale = g.value * lam.value
    meta = {"gamma_measured": g.value, "lambda_measured": lam.value,
            "gamma_shots": g_shots, "lambda_shots": l_shots}
    # each gamma shot consumes two copies of rho_A; each lambda shot one U_B and one U_B^dag
    return scale, 2 * g_shots + 2 * l_shots, meta
