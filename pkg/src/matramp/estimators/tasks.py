"""Task and result records shared by the estimators."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from ..encoders.dmse import DmseDensity
from ..encoders.ubse import UbseOperator
from ..errors import ValidationError
from ..matrixize import overlap_via_trace
from ..qcore import num_qubits, purify

PARTS = ("real", "imag")


def check_part(part: str) -> str:
    if part not in PARTS:
        raise ValidationError(f"part must be 'real' or 'imag', got {part!r}")
    return part


@dataclass(frozen=True)
class EstimationTask:
    """Estimate ``Re<B|A>`` or ``Im<B|A>`` from a UBSE of B and a DMSE of A.

    ``purification`` is the h.l. input state on ``(m, flag, n)``; when omitted it
    is built from ``dmse.rho`` with the minimal rank-based ancilla count.
    ``self_measure`` replaces the declared gamma and lambda by protocol estimates.
    """

    target: str
    ubse: UbseOperator
    dmse: DmseDensity
    epsilon: float = 0.1
    delta: float = 0.05
    seed: int | None = None
    purification: np.ndarray | None = None
    self_measure: bool = False

    def __post_init__(self):
        check_part(self.target)
        if not 0 < self.epsilon < 1:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.ubse.n != self.dmse.n:
            raise ValidationError(f"UBSE on n={self.ubse.n} but DMSE on n={self.dmse.n}")

    @property
    def n(self) -> int:
        return self.ubse.n

    @property
    def scale(self) -> float:
        """Declared ``gamma * lambda``."""
        return self.dmse.gamma * self.ubse.lam

    @cached_property
    def mu(self) -> float:
        """Exact target value from the encoded states (direct inner product)."""
        if self.dmse.a is None or self.ubse.b is None:
            raise ValidationError("task lacks explicit states for the exact target")
        z = overlap_via_trace(self.dmse.a, self.ubse.b)
        return float(z.real if self.target == "real" else z.imag)

    @cached_property
    def state_sa(self) -> np.ndarray:
        """``|S_A>`` ordered as (m ancillas, flag, n system qubits)."""
        if self.purification is not None:
            return np.asarray(self.purification, dtype=complex).reshape(-1)
        psi = purify(self.dmse.rho)
        d = self.dmse.rho.shape[0]
        mdim = psi.size // d
        return psi.reshape(d, mdim).T.reshape(-1)

    @property
    def m(self) -> int:
        return num_qubits(self.state_sa.size) - 1 - self.n


@dataclass
class EstimationResult:
    estimate: float
    queries_used: int
    shots: int
    exact_value: float
    seed: int | None
    method: str = ""
    mode: str = "relative"
    flags: tuple = ()
    prep_queries: int = 0
    rounds: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def relative_error(self) -> float:
        if self.exact_value == 0:
            return float("inf") if self.estimate else 0.0
        return abs(self.estimate - self.exact_value) / abs(self.exact_value)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["flags"] = list(self.flags)
        return out
