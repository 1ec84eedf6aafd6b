"""Desk-scale state tomography: simulated counting statistics plus MLE.

The measurement set is a functional stand-in for the experimental pulse
sequences: the nine populations are read out directly and every coherence
that is nonzero in the dephased Bell-diagonal family is probed by a pair of
selective pi/2 rotations (one along X, one along Y) followed by a
population readout.  Counts follow Poisson statistics; the reconstruction
maximizes the Poisson log-likelihood over a Cholesky-parametrized density
matrix, which is positive semidefinite with unit trace by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky as scipy_cholesky

from .linalg import ConvergenceError, DensityMatrix, fidelity
from .states import SelectiveRotation, rotation_unitary

# Level pairs carrying coherences in the dephased Bell-diagonal family,
# grouped by mixing weight: {0,4,8}, {1,5,6} and {2,3,7} triangles.
COHERENCE_PAIRS = (
    (0, 4), (0, 8), (4, 8),
    (1, 5), (1, 6), (5, 6),
    (2, 3), (2, 7), (3, 7),
)

_COUNT_CAP_FACTOR = 10


class InsufficientDataError(ValueError):
    """Measurement records cannot identify the targeted matrix elements."""


@dataclass(frozen=True)
class MeasurementSetting:
    """Pre-rotation pulses followed by a population readout of one level."""

    pre_rotations: tuple[SelectiveRotation, ...]
    projector_level: int


@dataclass(frozen=True)
class MeasurementRecord:
    """Simulated outcome of one measurement setting."""

    setting: MeasurementSetting
    expected_probability: float
    counts: int
    shots: int

    def __post_init__(self):
        if not 0.0 <= self.expected_probability <= 1.0:
            raise ValueError(f"probability {self.expected_probability} outside [0, 1]")
        if self.shots < 0 or self.counts < 0:
            raise ValueError("counts and shots must be nonnegative")
        if self.shots > 0 and self.counts > _COUNT_CAP_FACTOR * self.shots:
            raise ValueError("counts exceed the sampler cap")


@dataclass(frozen=True)
class ReconstructionResult:
    rho_mle: DensityMatrix
    log_likelihood: float
    iterations: int
    fidelity_vs_truth: float | None = None
    loglik_history: tuple[float, ...] = ()


def default_settings(dims=(3, 3)) -> list[MeasurementSetting]:
    """Population readouts plus X/Y pi/2 probes of every family coherence."""
    if tuple(dims) != (3, 3):
        raise ValueError(f"only two-qutrit tomography is supported, got dims {dims}")
    settings = [MeasurementSetting((), level) for level in range(9)]
    for a, b in COHERENCE_PAIRS:
        for axis in ("X", "Y"):
            rot = SelectiveRotation(a, b, math.pi / 2.0, axis)
            settings.append(MeasurementSetting((rot,), a))
    return settings


def _setting_effect(setting: MeasurementSetting, dim: int) -> np.ndarray:
    """POVM element of a setting: U^d |level><level| U for the pulse product U."""
    u = np.eye(dim, dtype=complex)
    for rot in setting.pre_rotations:
        u = rotation_unitary(rot, dim) @ u
    v = u.conj().T[:, setting.projector_level]
    return np.outer(v, v.conj())


def expected_probabilities(rho: DensityMatrix, settings) -> np.ndarray:
    """Ideal readout probabilities Tr(E_j rho) for each setting."""
    dim = rho.side
    probs = np.empty(len(settings))
    for j, setting in enumerate(settings):
        effect = _setting_effect(setting, dim)
        probs[j] = float(np.real(np.sum(effect.conj() * rho.matrix)))
    return np.clip(probs, 0.0, 1.0)


def simulate_counts(rho: DensityMatrix, settings, shots: int, seed: int) -> list[MeasurementRecord]:
    """Draw Poisson counts with mean shots * p for each setting.

    ``shots == 0`` is the noiseless sentinel: records then carry only the
    exact expected probabilities and zero counts.
    """
    if shots < 0:
        raise ValueError(f"shots must be nonnegative, got {shots}")
    rng = np.random.default_rng(seed)
    probs = expected_probabilities(rho, settings)
    records = []
    for setting, p in zip(settings, probs):
        if shots == 0:
            counts = 0
        else:
            counts = int(min(rng.poisson(shots * p), _COUNT_CAP_FACTOR * shots))
        records.append(
            MeasurementRecord(
                setting=setting, expected_probability=float(p), counts=counts, shots=shots
            )
        )
    return records


def _params_to_t(x: np.ndarray, dim: int) -> np.ndarray:
    t = np.zeros((dim, dim), dtype=complex)
    t[np.diag_indices(dim)] = x[:dim]
    lower = np.tril_indices(dim, k=-1)
    n_off = lower[0].size
    t[lower] = x[dim : dim + n_off] + 1j * x[dim + n_off :]
    return t


def _t_to_params(t: np.ndarray) -> np.ndarray:
    dim = t.shape[0]
    lower = np.tril_indices(dim, k=-1)
    return np.concatenate([np.real(np.diag(t)), np.real(t[lower]), np.imag(t[lower])])


def _rho_of_params(x: np.ndarray, dim: int) -> np.ndarray:
    t = _params_to_t(x, dim)
    rho = t.conj().T @ t
    return rho / np.trace(rho).real


def _initial_params(records, effects, dim: int, init: DensityMatrix | None) -> np.ndarray:
    if init is not None:
        rho0 = init.matrix
    else:
        # least-squares inversion of the measured functionals, then a
        # projection onto the physical set
        design = np.stack([e.conj().ravel() for e in effects])
        freqs = np.array([
            r.counts / r.shots if r.shots > 0 else r.expected_probability for r in records
        ])
        design_real = np.concatenate([design.real, -design.imag], axis=1)
        sol, *_ = np.linalg.lstsq(design_real, freqs, rcond=None)
        rho0 = (sol[: dim * dim] + 1j * sol[dim * dim :]).reshape(dim, dim)
        rho0 = (rho0 + rho0.conj().T) / 2.0
        w, v = np.linalg.eigh(rho0)
        w = np.clip(w, 0.0, None)
        if w.sum() <= 0.0:
            rho0 = np.eye(dim) / dim
        else:
            rho0 = (v * w) @ v.conj().T / w.sum()
    jitter = 1e-6
    rho0 = (1.0 - jitter) * rho0 + jitter * np.eye(dim) / dim
    # lower-triangular T with T^d T = rho0, via the index-reversal trick
    flip = np.eye(dim)[::-1]
    upper = scipy_cholesky(flip @ rho0 @ flip, lower=False)
    return _t_to_params(flip @ upper @ flip)


def mle_reconstruct(
    records,
    dims=(3, 3),
    init: DensityMatrix | None = None,
    truth: DensityMatrix | None = None,
    max_iterations: int = 5000,
    gain_tol: float = 1e-10,
) -> ReconstructionResult:
    """Maximum-likelihood reconstruction from measurement records.

    The density matrix is parametrized as T^d T / Tr(T^d T) with T lower
    triangular, and the Poisson log-likelihood
    sum_j w_j [f_j log p_j - p_j] (w_j = shots, f_j = counts / shots;
    noiseless records use the exact probabilities with unit weight) is
    maximized by gradient ascent with central-difference gradients and
    backtracking step control.  Raises :class:`InsufficientDataError` when
    the settings cannot identify the populations and
    :class:`ConvergenceError` when the iteration cap is exhausted.
    """
    records = list(records)
    if not records:
        raise InsufficientDataError("no measurement records")
    dims = tuple(int(d) for d in dims)
    dim = math.prod(dims)
    effects = [_setting_effect(r.setting, dim) for r in records]

    diag_design = np.stack([np.real(np.diag(e)) for e in effects])
    if np.linalg.matrix_rank(diag_design, tol=1e-9) < dim:
        raise InsufficientDataError(
            "settings do not span the populations; reconstruction is not identifiable"
        )

    weights = np.array([float(r.shots) if r.shots > 0 else 1.0 for r in records])
    freqs = np.array([
        r.counts / r.shots if r.shots > 0 else r.expected_probability for r in records
    ])
    effect_rows = np.stack([e.T.ravel() for e in effects])

    def log_likelihood(x: np.ndarray) -> float:
        rho = _rho_of_params(x, dim)
        p = np.clip(np.real(effect_rows @ rho.ravel()), 1e-12, None)
        return float(np.sum(weights * (freqs * np.log(p) - p)))

    def numeric_grad(x: np.ndarray) -> np.ndarray:
        grad = np.empty_like(x)
        for k in range(x.size):
            h = 1e-6 * max(1.0, abs(x[k]))
            forward = x.copy()
            backward = x.copy()
            forward[k] += h
            backward[k] -= h
            grad[k] = (log_likelihood(forward) - log_likelihood(backward)) / (2.0 * h)
        return grad

    x = _initial_params(records, effects, dim, init)
    ll = log_likelihood(x)
    history = [ll]
    step = 1.0
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        grad = numeric_grad(x)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-12:
            converged = True
            break
        direction = grad / gnorm
        accepted = False
        while step > 1e-14:
            x_new = x + step * direction
            ll_new = log_likelihood(x_new)
            if ll_new > ll:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        gain = ll_new - ll
        x, ll = x_new, ll_new
        history.append(ll)
        step *= 2.0
        if gain < gain_tol * max(1.0, abs(ll)):
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"MLE did not converge within {max_iterations} iterations"
        )

    rho = DensityMatrix(_rho_of_params(x, dim), dims)
    fid = fidelity(rho, truth) if truth is not None else None
    return ReconstructionResult(
        rho_mle=rho,
        log_likelihood=ll,
        iterations=iterations,
        fidelity_vs_truth=fid,
        loglik_history=tuple(history),
    )
