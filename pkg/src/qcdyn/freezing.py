"""Dynamics sweeps, freezing-interval detection and the freezing index.

The freezing index F = (Qbar * integral of Q dgamma)^(1/4) quantifies the
trade-off between plateau height and plateau length in the parametrized
time gamma = 1 - lam.  Qutrits and qubits are compared by pairing the qubit
weight b0 with the qutrit weight c0 (c1 = 0, c2 = 1 - c0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import DephasingSchedule, dephase_local, lambda_of_time
from .correlations import (
    CorrelationReport,
    d1_analytic,
    discord_geo_analytic,
    discord_mi,
    discord_trace_norm_numeric,
    negativity,
    qubit_geo_analytic,
    qubit_transition_lambda,
    transition_lambda,
)
from .linalg import DensityMatrix
from .states import (
    BellParams2,
    BellParams3,
    bell_diagonal_qubit,
    bell_diagonal_qutrit,
)

MEASURES = ("geo", "geo-numeric", "mi", "neg")


@dataclass(frozen=True)
class DynamicsTrace:
    """Correlation measures sampled along a dephasing trajectory."""

    schedule: DephasingSchedule
    samples: tuple[CorrelationReport, ...]


@dataclass(frozen=True)
class FreezingReport:
    """Detected freezing interval in parametrized time gamma = 1 - lam."""

    gamma_ini: float
    gamma_fin: float
    plateau_mean: float
    transition_lambda: float
    index: float


@dataclass(frozen=True)
class FreezingComparison:
    """One row of the qubit-versus-qutrit freezing comparison."""

    param: float
    q_qubit: float
    q_qutrit: float
    interval_qubit: float
    interval_qutrit: float
    f_qubit: float
    f_qutrit: float


def sweep_dynamics(
    params,
    schedule: DephasingSchedule,
    t_grid,
    measures=("geo", "neg"),
    seed: int = 42,
    initial_state: DensityMatrix | None = None,
    measured_side: int = 1,
    geo_numeric_budget: int = 6,
    geo_numeric_refine: int = 0,
    mi_budget: int = 8,
) -> DynamicsTrace:
    """Evaluate selected correlation measures along a dephasing trajectory.

    ``params`` picks the family (BellParams3 or BellParams2).  The analytic
    "geo" entries always refer to the ideal family trajectory; the numeric
    measures act on the actual dephased state, which may be overridden with
    ``initial_state`` (e.g. the output of the preparation circuit).
    """
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("time grid must not be empty")
    if any(t < 0.0 for t in t_grid) or any(
        b <= a for a, b in zip(t_grid, t_grid[1:])
    ):
        raise ValueError("time grid must be sorted, strictly increasing and nonnegative")
    unknown = set(measures) - set(MEASURES)
    if unknown:
        raise ValueError(f"unknown measures {sorted(unknown)}; available: {MEASURES}")

    qutrit = isinstance(params, BellParams3)
    if not qutrit and not isinstance(params, BellParams2):
        raise ValueError(f"params must be BellParams3 or BellParams2, got {type(params)}")
    if initial_state is not None:
        base = initial_state
    else:
        base = bell_diagonal_qutrit(params) if qutrit else bell_diagonal_qubit(params)

    samples = []
    for idx, t in enumerate(t_grid):
        lam = lambda_of_time(t, schedule)
        state = dephase_local(base, 0, lam)
        geo = geo_numeric = mi = neg = None
        if "geo" in measures:
            geo = (
                discord_geo_analytic(params, lam)
                if qutrit
                else qubit_geo_analytic(params, lam)
            )
        if "geo-numeric" in measures:
            geo_numeric = discord_trace_norm_numeric(
                state,
                measured_side=measured_side,
                budget=geo_numeric_budget,
                seed=seed + 7919 * idx,
                refine_maxfev=geo_numeric_refine,
            )
        if "mi" in measures:
            mi = discord_mi(
                state, measured_side=measured_side, budget=mi_budget, seed=seed + 7919 * idx
            )
        if "neg" in measures:
            neg = negativity(state)
        samples.append(
            CorrelationReport(
                lam=lam, time_us=t, geo=geo, geo_numeric=geo_numeric,
                mi_discord=mi, negativity=neg,
            )
        )
    return DynamicsTrace(schedule=schedule, samples=tuple(samples))


def freezing_index(gammas, q_values, gamma_ini: float, gamma_fin: float) -> float:
    """Freezing index (Qbar * trapezoidal integral of Q)^(1/4) over an interval."""
    gammas = np.asarray(gammas, dtype=float)
    q_values = np.asarray(q_values, dtype=float)
    if gammas.shape != q_values.shape or gammas.ndim != 1:
        raise ValueError("gammas and q_values must be matching 1-d arrays")
    if np.any(q_values < -1e-12):
        raise ValueError(f"discord samples must be nonnegative, min {q_values.min()}")
    if gamma_fin <= gamma_ini:
        raise ValueError(f"empty interval [{gamma_ini}, {gamma_fin}]")
    if gammas.min() > gamma_ini + 1e-12 or gammas.max() < gamma_fin - 1e-12:
        raise ValueError("samples do not cover the requested interval")
    mask = (gammas >= gamma_ini - 1e-12) & (gammas <= gamma_fin + 1e-12)
    if mask.sum() < 2:
        raise ValueError("need at least two samples inside the interval")
    g = gammas[mask]
    q = np.clip(q_values[mask], 0.0, None)
    q_bar = float(np.mean(q))
    integral = float(np.trapezoid(q, g))
    return (q_bar * integral) ** 0.25


def _measure_values(trace: DynamicsTrace, measure: str) -> np.ndarray:
    def pick(report: CorrelationReport):
        if measure == "geo":
            return None if report.geo is None else report.geo.discord
        if measure == "geo-numeric":
            return report.geo_numeric
        if measure == "mi":
            return report.mi_discord
        if measure == "neg":
            return report.negativity
        raise ValueError(f"unknown measure {measure!r}")

    values = [pick(r) for r in trace.samples]
    if any(v is None for v in values):
        raise ValueError(f"measure {measure!r} missing from some trace samples")
    return np.asarray(values, dtype=float)


def detect_freezing_interval(
    trace: DynamicsTrace, measure: str = "geo", rel_tol: float = 0.01
) -> FreezingReport:
    """Locate the initial plateau of a sampled discord curve.

    The plateau extends to the largest sampled gamma at which every earlier
    value stays within ``rel_tol`` (relative) of the initial value.  A zero
    initial value is reported as the degenerate interval [0, 0] with zero
    index: an identically vanishing discord does not freeze.
    """
    values = _measure_values(trace, measure)
    gammas = np.array([1.0 - r.lam for r in trace.samples])
    q0 = values[0]
    if q0 <= 1e-12:
        return FreezingReport(
            gamma_ini=gammas[0], gamma_fin=gammas[0], plateau_mean=0.0,
            transition_lambda=1.0 - gammas[0], index=0.0,
        )
    within = np.abs(values - q0) <= rel_tol * abs(q0)
    end = int(np.argmin(within)) - 1 if not within.all() else len(values) - 1
    end = max(end, 0)
    gamma_fin = float(gammas[end])
    plateau = values[: end + 1]
    if end == 0 or gamma_fin <= gammas[0]:
        index = 0.0
    else:
        index = freezing_index(gammas[: end + 1], plateau, gammas[0], gamma_fin)
    return FreezingReport(
        gamma_ini=float(gammas[0]),
        gamma_fin=gamma_fin,
        plateau_mean=float(np.mean(plateau)),
        transition_lambda=1.0 - gamma_fin,
        index=index,
    )


def compare_freezing(param_grid) -> list[FreezingComparison]:
    """Qubit-versus-qutrit freezing comparison over a shared weight grid.

    For each weight w the qubit family uses b0 = w and the qutrit family
    (c0, c1, c2) = (w, 0, 1 - w).  Both curves have an exactly constant
    plateau, so the index reduces to (plateau^2 * interval)^(1/4) with the
    interval ending at the transition point.
    """
    params = [float(p) for p in param_grid]
    if not params:
        raise ValueError("parameter grid must not be empty")
    if any(not 0.0 < p < 0.5 for p in params):
        raise ValueError("parameters must lie in (0, 0.5) for nondegenerate freezing")

    rows = []
    for w in params:
        p3 = BellParams3(w, 0.0, 1.0 - w)
        q3 = d1_analytic(p3)
        lam3 = transition_lambda(p3)
        interval3 = 1.0 - lam3
        p2 = BellParams2(w, 1.0 - w)
        q2 = abs(p2.b0 - p2.b1)
        lam2 = qubit_transition_lambda(p2)
        interval2 = 1.0 - lam2
        rows.append(
            FreezingComparison(
                param=w,
                q_qubit=q2,
                q_qutrit=q3,
                interval_qubit=interval2,
                interval_qutrit=interval3,
                f_qubit=(q2 * q2 * interval2) ** 0.25,
                f_qutrit=(q3 * q3 * interval3) ** 0.25,
            )
        )
    return rows
