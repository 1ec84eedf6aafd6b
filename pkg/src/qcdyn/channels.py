"""One-sided local dephasing channel and its time-to-coherence schedule.

The channel multiplies element (i, j) by ``lam ** |m_i - m_j|`` where ``m``
is the level index of the dephased subsystem on the composite row/column.
It is a mixture of diagonal phase unitaries, hence completely positive, and
forms an exact semigroup under ``lam1 * lam2`` composition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix


@dataclass(frozen=True)
class DephasingSchedule:
    """Stretched-exponential coherence decay: lam(t) = exp[-(t/t2_star_us)**stretch_n]."""

    t2_star_us: float
    stretch_n: float = 2.0

    def __post_init__(self):
        if not (self.t2_star_us > 0.0 and math.isfinite(self.t2_star_us)):
            raise ValueError(f"t2_star_us must be positive, got {self.t2_star_us}")
        if not (self.stretch_n > 0.0 and math.isfinite(self.stretch_n)):
            raise ValueError(f"stretch_n must be positive, got {self.stretch_n}")


def lambda_of_time(t_us: float, schedule: DephasingSchedule) -> float:
    """Coherence factor lam at time ``t_us`` (microseconds)."""
    if t_us < 0.0:
        raise ValueError(f"time must be nonnegative, got {t_us}")
    return float(math.exp(-((t_us / schedule.t2_star_us) ** schedule.stretch_n)))


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"coherence factor must lie in [0, 1], got {lam}")
    return lam


def _level_indices(dims, side: int) -> np.ndarray:
    """Level index of subsystem ``side`` for each composite basis index."""
    stride = math.prod(dims[side + 1 :])
    idx = np.arange(math.prod(dims))
    return (idx // stride) % dims[side]


def dephase_local(rho: DensityMatrix, side: int, lam: float) -> DensityMatrix:
    """Apply local dephasing of strength ``lam`` to one subsystem."""
    lam = _check_lambda(lam)
    if not 0 <= side < len(rho.dims):
        raise ValueError(f"subsystem index {side} out of range for dims {rho.dims}")
    m = _level_indices(rho.dims, side)
    expo = np.abs(m[:, None] - m[None, :])
    weights = lam ** expo
    return DensityMatrix(rho.matrix * weights, rho.dims)


def dephase_qubit_local(rho: DensityMatrix, lam: float) -> DensityMatrix:
    """Local dephasing of the first qubit of a two-qubit state."""
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")
    return dephase_local(rho, 0, lam)
