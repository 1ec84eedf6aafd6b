"""Correlation measures of bipartite states.

Analytic pieces for the dephased Bell-diagonal families:

* ``d1``: distance from a family state to the zero-discord line (the
  isotropic mixture c0 = c1 = c2 = 1/3), independent of the dephasing level.
* ``d2``: distance to the zero-discord plane of fully dephased states,
  independent of the mixing weights.  The geometric discord is min(d1, d2),
  so a dephasing trajectory shows a frozen plateau followed by a sudden
  transition to decay whenever it crosses the d1 = d2 surface.

Numeric pieces for arbitrary bipartite states: an upper-bound minimizer of
the Schatten 1-norm distance to the quantum-classical set, a
mutual-information discord optimizer, and negativity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .linalg import DensityMatrix, partial_transpose, trace_norm
from .states import BellParams2, BellParams3

FROZEN_D1 = "FROZEN_D1"
DECAYING_D2 = "DECAYING_D2"
TIE = "TIE"

CHI1 = "CHI1"
CHI2 = "CHI2"
BOTH = "BOTH"
NEITHER = "NEITHER"

_BRANCH_TIE_TOL = 1e-12
_MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class GeometricDiscordBreakdown:
    """Geometric discord of a family state split into its two distances."""

    d1: float
    d2: float
    discord: float
    branch: str


@dataclass(frozen=True)
class QuantumClassicalState:
    """Zero-discord candidate: sum_k A_k (x) |phi_k><phi_k|.

    ``block_states`` are PSD matrices on the unmeasured side with traces
    summing to one; ``basis`` holds the orthonormal |phi_k> as columns.
    """

    block_states: tuple[np.ndarray, ...]
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex)
        gram_dev = np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1])))
        if gram_dev > 1e-10:
            raise ValueError(f"basis is not orthonormal: deviation {gram_dev:.3e}")
        total = 0.0
        for block in self.block_states:
            w = np.linalg.eigvalsh(np.asarray(block))
            if w[0] < -1e-10:
                raise ValueError(f"block state has negative eigenvalue {w[0]:.3e}")
            total += float(np.sum(w))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"block traces must sum to 1, got {total!r}")

    def to_matrix(self) -> np.ndarray:
        basis = np.asarray(self.basis, dtype=complex)
        d_b = basis.shape[0]
        d_a = self.block_states[0].shape[0]
        out = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
        for k, block in enumerate(self.block_states):
            proj = np.outer(basis[:, k], basis[:, k].conj())
            out += np.kron(np.asarray(block), proj)
        return out


@dataclass(frozen=True)
class CorrelationReport:
    """Per-state bundle of correlation measures; unevaluated entries are None."""

    lam: float
    time_us: float | None = None
    geo: GeometricDiscordBreakdown | None = None
    geo_numeric: float | None = None
    mi_discord: float | None = None
    negativity: float | None = None


# ---------------------------------------------------------------------------
# Analytic geometry of the dephased Bell-diagonal families
# ---------------------------------------------------------------------------

def d1_analytic(params: BellParams3) -> float:
    """Distance to the zero-discord line: sum_i |c_i - 1/3|."""
    return abs(params.c0 - 1.0 / 3.0) + abs(params.c1 - 1.0 / 3.0) + abs(params.c2 - 1.0 / 3.0)


def d2_analytic(lam: float, uncorrected: bool = False) -> float:
    """Distance to the zero-discord plane.

    Canonical form [lam^2 + sqrt(lam^4 + 8 lam^2)] / 3; this normalization
    makes the d1 = d2 surface equation an exact identity and lets the
    vertex-state trajectory start on the surface instead of above it.  The
    ``uncorrected`` flag drops the 1/3 for side-by-side comparison.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"coherence factor must lie in [0, 1], got {lam}")
    value = lam * lam + math.sqrt(lam ** 4 + 8.0 * lam * lam)
    return value if uncorrected else value / 3.0


def _branch(d1: float, d2: float) -> tuple[float, str]:
    if abs(d1 - d2) < _BRANCH_TIE_TOL:
        return min(d1, d2), TIE
    if d1 < d2:
        return d1, FROZEN_D1
    return d2, DECAYING_D2


def discord_geo_analytic(
    params: BellParams3, lam: float, uncorrected: bool = False
) -> GeometricDiscordBreakdown:
    """Geometric (trace-norm) discord of a dephased qutrit family state."""
    d1 = d1_analytic(params)
    d2 = d2_analytic(lam, uncorrected=uncorrected)
    discord, branch = _branch(d1, d2)
    return GeometricDiscordBreakdown(d1=d1, d2=d2, discord=discord, branch=branch)


def transition_lambda(params: BellParams3, uncorrected: bool = False) -> float:
    """Coherence level at which the family trajectory crosses the d1 = d2 surface.

    Solves g(lam) = lam^2 + lam * sqrt(lam^2 + 8) = 3 * d1 by bisection
    (g is strictly increasing with g(0) = 0, g(1) = 4 >= 3 * d1).  Returns 0
    for zero-discord parameters and 1 when the trajectory starts on the
    surface.
    """
    target = d1_analytic(params) * (1.0 if uncorrected else 3.0)
    if target <= 0.0:
        return 0.0

    def g(lam: float) -> float:
        return lam * lam + lam * math.sqrt(lam * lam + 8.0)

    if g(1.0) <= target:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def qubit_geo_analytic(params: BellParams2, lam: float) -> GeometricDiscordBreakdown:
    """Geometric discord of the dephased qubit family.

    The dephased state has correlation components (lam, (b1-b0)*lam, b0-b1)
    in the Pauli product basis; its trace-norm discord is the intermediate
    absolute component, i.e. min(|b0 - b1|, lam): a frozen part |b0 - b1|
    and a decaying part lam.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"coherence factor must lie in [0, 1], got {lam}")
    d1 = abs(params.b0 - params.b1)
    d2 = lam
    discord, branch = _branch(d1, d2)
    return GeometricDiscordBreakdown(d1=d1, d2=d2, discord=discord, branch=branch)


def qubit_transition_lambda(params: BellParams2) -> float:
    """Kink position of the dephased qubit family: lam* = |b0 - b1|."""
    return abs(params.b0 - params.b1)


def classify_zero_discord(params: BellParams3, lam: float) -> str:
    """Membership of a family point in the two zero-discord components."""
    on_line = (
        abs(params.c0 - 1.0 / 3.0) <= _MEMBERSHIP_TOL
        and abs(params.c2 - 1.0 / 3.0) <= _MEMBERSHIP_TOL
    )
    on_plane = abs(lam) <= _MEMBERSHIP_TOL
    if on_line and on_plane:
        return BOTH
    if on_line:
        return CHI1
    if on_plane:
        return CHI2
    return NEITHER


# ---------------------------------------------------------------------------
# Negativity
# ---------------------------------------------------------------------------

def negativity(rho: DensityMatrix) -> float:
    """Entanglement negativity (||rho^PT||_1 - 1) / 2, clipped at zero."""
    if len(rho.dims) != 2:
        raise ValueError(f"negativity requires a bipartite state, got dims {rho.dims}")
    pt = partial_transpose(rho, 1)
    return max(0.0, (trace_norm(pt, hermitian_hint=True) - 1.0) / 2.0)


# ---------------------------------------------------------------------------
# Measurement-basis parametrization shared by the numeric optimizers
# ---------------------------------------------------------------------------

def _n_basis_params(dim: int) -> int:
    return dim * dim - 1


def _basis_unitary(params: np.ndarray, dim: int) -> np.ndarray:
    """Unitary from left phases composed with complex Givens rotations."""
    u = np.diag(np.exp(1j * np.concatenate(([0.0], params[: dim - 1]))))
    k = dim - 1
    for p in range(dim):
        for q in range(p + 1, dim):
            theta, phi = params[k], params[k + 1]
            k += 2
            g = np.eye(dim, dtype=complex)
            c, s = math.cos(theta), math.sin(theta)
            e = np.exp(1j * phi)
            g[p, p] = c
            g[q, q] = c
            g[p, q] = -s * np.conj(e)
            g[q, p] = s * e
            u = u @ g
    return u


def _canonical_bases(dim: int) -> list[np.ndarray]:
    """Measurement bases known to be optimal for the family states."""
    bases = [np.eye(dim, dtype=complex)]
    if dim == 3:
        j = np.arange(3)
        fourier = np.exp(-2j * np.pi * np.outer(j, j) / 3.0) / math.sqrt(3.0)
        bases.append(fourier)
        bases.append(fourier.conj())
    elif dim == 2:
        bases.append(np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0))
        bases.append(np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2.0))
    return bases


def _joint_diagonalize(slices: np.ndarray, init: np.ndarray, sweeps: int = 50) -> np.ndarray:
    """Jacobi-style joint approximate diagonalization of a stack of matrices.

    Returns a unitary whose columns nearly diagonalize every slice at once
    (Cardoso-Souloumiac plane rotations).  Quantum-classical states have
    exactly jointly diagonalizable conditional operators, so this basis is
    an equivariant, state-adapted starting point for the discord searches.
    """
    dim = init.shape[0]
    u = init.astype(complex).copy()
    a = np.einsum("ip,mij,jq->mpq", u.conj(), slices, u)
    for _ in range(sweeps):
        biggest = 0.0
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                h = np.stack(
                    [
                        a[:, p, p] - a[:, q, q],
                        a[:, p, q] + a[:, q, p],
                        1j * (a[:, q, p] - a[:, p, q]),
                    ]
                )
                g = np.real(h @ h.conj().T)
                w, v = np.linalg.eigh(g)
                angles = v[:, -1]
                if angles[0] < 0.0:
                    angles = -angles
                c = math.sqrt(0.5 + angles[0] / 2.0)
                s = 0.5 * (angles[1] - 1j * angles[2]) / c
                biggest = max(biggest, abs(s))
                if abs(s) < 1e-14:
                    continue
                col_p = c * a[:, :, p] + s * a[:, :, q]
                col_q = -np.conj(s) * a[:, :, p] + c * a[:, :, q]
                a[:, :, p], a[:, :, q] = col_p, col_q
                row_p = c * a[:, p, :] + np.conj(s) * a[:, q, :]
                row_q = -s * a[:, p, :] + c * a[:, q, :]
                a[:, p, :], a[:, q, :] = row_p, row_q
                u_p = c * u[:, p] + s * u[:, q]
                u_q = -np.conj(s) * u[:, p] + c * u[:, q]
                u[:, p], u[:, q] = u_p, u_q
        if biggest < 1e-12:
            break
    return u


def _adapted_bases(rho4: np.ndarray) -> list[np.ndarray]:
    """Joint-diagonalization bases of the measured-side conditional operators."""
    d_a, d_b = rho4.shape[0], rho4.shape[1]
    slices = rho4.transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b, d_b)
    return [_joint_diagonalize(slices, start) for start in _canonical_bases(d_b)[:2]]


def _oriented_rho4(rho: DensityMatrix, measured_side: int):
    """Reshape to (A, B, A, B) with the measured subsystem second."""
    if len(rho.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    if measured_side not in (0, 1):
        raise ValueError(f"measured_side must be 0 or 1, got {measured_side}")
    d0, d1 = rho.dims
    rho4 = rho.matrix.reshape(d0, d1, d0, d1)
    if measured_side == 0:
        rho4 = rho4.transpose(1, 0, 3, 2)
        return np.ascontiguousarray(rho4), d1, d0
    return rho4, d0, d1


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    # each restart derives its own stream so results do not depend on order
    return np.random.default_rng([int(seed), int(restart)])


# ---------------------------------------------------------------------------
# Trace-norm discord: upper-bound minimizer over quantum-classical states
# ---------------------------------------------------------------------------

def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto {x >= 0, sum x = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0.0
    rho = idx[cond][-1]
    tau = css[cond][-1] / rho
    return np.clip(v - tau, 0.0, None)


def _project_blocks(blocks: np.ndarray) -> np.ndarray:
    """Project a stack of Hermitian blocks onto PSD with unit total trace."""
    blocks = (blocks + blocks.conj().transpose(0, 2, 1)) / 2.0
    w, v = np.linalg.eigh(blocks)
    w_proj = _project_simplex(w.ravel()).reshape(w.shape)
    return v @ (w_proj[..., None] * v.conj().transpose(0, 2, 1))


def _pinch_blocks(rho4: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("aibj,ik,jk->kab", rho4, basis.conj(), basis)


def _qc_matrix4(blocks: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("kab,ik,jk->aibj", blocks, basis, basis.conj())


def _inner_distance_min(
    rho4: np.ndarray,
    basis: np.ndarray,
    blocks: np.ndarray | None = None,
    max_iter: int = 2000,
    tol: float = 1e-10,
):
    """Minimize ||rho - sigma||_1 over block states for a fixed basis.

    Projected gradient descent on the convex objective, started from the
    pinched blocks <phi_k| rho |phi_k>, with doubling/halving step control.
    Returns (best value, best blocks).
    """
    d_a = rho4.shape[0]
    dim_full = d_a * rho4.shape[1]
    rho_flat = rho4.reshape(dim_full, dim_full)

    if blocks is None:
        blocks = _pinch_blocks(rho4, basis)
        blocks = _project_blocks(blocks)

    def value(bl):
        delta = rho_flat - _qc_matrix4(bl, basis).reshape(dim_full, dim_full)
        return float(np.sum(np.abs(np.linalg.eigvalsh(delta))))

    def value_and_grad(bl):
        delta = rho_flat - _qc_matrix4(bl, basis).reshape(dim_full, dim_full)
        w, v = np.linalg.eigh(delta)
        val = float(np.sum(np.abs(w)))
        sign = (v * np.sign(w)) @ v.conj().T
        grad = -_pinch_blocks(sign.reshape(rho4.shape), basis)
        return val, grad

    f_cur, grad = value_and_grad(blocks)
    step = 0.5
    for _ in range(max_iter):
        accepted = False
        while step > 1e-14:
            candidate = _project_blocks(blocks - step * grad)
            f_new = value(candidate)
            if f_new < f_cur:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gain = f_cur - f_new
        blocks = candidate
        f_cur, grad = value_and_grad(blocks)
        step *= 2.0
        if gain < tol:
            break
    return f_cur, blocks


def discord_trace_norm_numeric(
    rho: DensityMatrix,
    measured_side: int = 1,
    budget: int = 32,
    seed: int = 0,
    refine_maxfev: int = 120,
    inner_max_iter: int = 2000,
    inner_tol: float = 1e-10,
) -> float:
    """Upper bound on the trace-norm discord by explicit minimization.

    Outer search over the measured-side orthonormal basis (canonical bases
    first, then random Givens-rotation parameters, one per restart) with an
    inner projected-gradient minimization over the block states.  When
    ``refine_maxfev`` > 0 each restart additionally polishes the basis with
    a Nelder-Mead pass on a correction unitary.  Deterministic for a given
    seed; restart r draws from an independent stream keyed by (seed, r).
    """
    if budget < 1:
        raise ValueError(f"restart budget must be >= 1, got {budget}")
    rho4, d_a, d_b = _oriented_rho4(rho, measured_side)
    n_par = _n_basis_params(d_b)

    candidates = _canonical_bases(d_b) + _adapted_bases(rho4)
    scored = []
    for restart in range(budget):
        if restart < len(candidates):
            base = candidates[restart]
        else:
            rng = _restart_rng(seed, restart)
            base = _basis_unitary(rng.uniform(0.0, 2.0 * np.pi, size=n_par), d_b)
        f_base, _ = _inner_distance_min(rho4, base, max_iter=inner_max_iter, tol=inner_tol)
        scored.append((f_base, base))

    best = min(f for f, _ in scored)
    if refine_maxfev > 0:
        # polish the two most promising bases with a correction unitary
        scored.sort(key=lambda item: item[0])
        for _, base in scored[:2]:

            def objective(p):
                basis = _basis_unitary(p, d_b) @ base
                val, _ = _inner_distance_min(
                    rho4, basis, max_iter=max(200, inner_max_iter // 5), tol=1e-9
                )
                return val

            res = optimize.minimize(
                objective,
                np.zeros(n_par),
                method="Nelder-Mead",
                options={"maxfev": refine_maxfev, "xatol": 1e-8, "fatol": 1e-12},
            )
            final_basis = _basis_unitary(res.x, d_b) @ base
            f_ref, _ = _inner_distance_min(
                rho4, final_basis, max_iter=inner_max_iter, tol=inner_tol
            )
            best = min(best, f_ref)
    return best


# ---------------------------------------------------------------------------
# Mutual-information discord
# ---------------------------------------------------------------------------

def _entropy_bits(eigenvalues: np.ndarray) -> float:
    p = np.clip(eigenvalues, 0.0, 1.0)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def discord_mi(
    rho: DensityMatrix,
    measured_side: int = 1,
    budget: int = 64,
    seed: int = 0,
    maxfev: int = 400,
) -> float:
    """Mutual-information discord with a projective measurement on one side.

    D = I(A:B) - max over rank-1 projective measurements on the measured
    side of [S(rho_A) - sum_k p_k S(rho_A|k)].  The maximization runs
    Nelder-Mead refinements of the measurement basis from canonical and
    random starting points; the result is clipped at zero.
    """
    if budget < 1:
        raise ValueError(f"restart budget must be >= 1, got {budget}")
    rho4, d_a, d_b = _oriented_rho4(rho, measured_side)
    n_par = _n_basis_params(d_b)

    rho_a = np.trace(rho4, axis1=1, axis2=3)
    rho_b = np.trace(rho4, axis1=0, axis2=2)
    s_a = _entropy_bits(np.linalg.eigvalsh(rho_a))
    s_b = _entropy_bits(np.linalg.eigvalsh(rho_b))
    s_ab = _entropy_bits(np.linalg.eigvalsh(rho.matrix))
    mutual_information = s_a + s_b - s_ab

    def conditional_entropy(basis):
        blocks = _pinch_blocks(rho4, basis)
        total = 0.0
        for k in range(d_b):
            p_k = float(np.trace(blocks[k]).real)
            if p_k <= 1e-14:
                continue
            total += p_k * _entropy_bits(np.linalg.eigvalsh(blocks[k] / p_k))
        return total

    best_classical = -math.inf
    candidates = _canonical_bases(d_b) + _adapted_bases(rho4)
    for restart in range(budget):
        if restart < len(candidates):
            base = candidates[restart]
        else:
            rng = _restart_rng(seed, restart)
            base = _basis_unitary(rng.uniform(0.0, 2.0 * np.pi, size=n_par), d_b)

        def neg_classical(p):
            return conditional_entropy(_basis_unitary(p, d_b) @ base) - s_a

        res = optimize.minimize(
            neg_classical,
            np.zeros(n_par),
            method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": 1e-8, "fatol": 1e-12},
        )
        best_classical = max(best_classical, -float(res.fun))

    return max(0.0, mutual_information - best_classical)
