"""Dense complex linear algebra for small Hermitian problems (side <= 64).

Everything here operates on plain numpy arrays or on :class:`DensityMatrix`,
a validated square complex matrix with subsystem-dimension metadata.  The
eigensolver is a cyclic complex Jacobi iteration: at these sizes robustness
matters more than asymptotics, and the rotation count is tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10

_JACOBI_MAX_SWEEPS = 100
_JACOBI_OFF_TOL = 1e-14
_MAX_SIDE = 64


class NotHermitianError(ValueError):
    """Matrix deviates from Hermitian symmetry beyond tolerance."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration budget."""


def _as_square_complex(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermiticity_deviation(a: np.ndarray) -> float:
    """Max element deviation of a from its own conjugate transpose."""
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (real, descending) and eigenvectors (columns) of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix with subsystem dimensions.

    Construction checks squareness against ``dims``, Hermiticity to
    ``HERMITICITY_TOL``, unit trace to 1e-12 and positivity to ``PSD_TOL``.
    Small negative eigenvalues (within ``PSD_TOL``) are clipped to zero and
    the matrix is renormalized, so the stored matrix is numerically PSD.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = _as_square_complex(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise ValueError(f"invalid subsystem dims {dims}")
        if math.prod(dims) != mat.shape[0]:
            raise ValueError(
                f"product of dims {dims} does not match matrix side {mat.shape[0]}"
            )
        dev = hermiticity_deviation(mat)
        if dev > HERMITICITY_TOL:
            raise NotHermitianError(f"Hermiticity deviation {dev:.3e} > {HERMITICITY_TOL}")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace {tr!r} deviates from 1 by more than 1e-12")
        mat = (mat + mat.conj().T) / 2.0
        w, v = np.linalg.eigh(mat)
        if w[0] < -PSD_TOL:
            raise ValueError(f"matrix is not PSD: min eigenvalue {w[0]:.3e} < -{PSD_TOL}")
        if w[0] < 0.0:
            w = np.clip(w, 0.0, None)
            mat = (v * w) @ v.conj().T
            mat = (mat + mat.conj().T) / 2.0
            mat /= np.trace(mat).real
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]


def hermitian_eig(a) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns eigenvalues sorted in descending order with matching orthonormal
    eigenvector columns.  Raises :class:`NotHermitianError` if the input is
    not Hermitian within ``HERMITICITY_TOL`` and :class:`ConvergenceError`
    if the off-diagonal mass has not dropped below tolerance after
    ``_JACOBI_MAX_SWEEPS`` cyclic sweeps.
    """
    a = _as_square_complex(a)
    n = a.shape[0]
    if n > _MAX_SIDE:
        raise ValueError(f"matrix side {n} exceeds supported maximum {_MAX_SIDE}")
    dev = hermiticity_deviation(a)
    if dev > HERMITICITY_TOL:
        raise NotHermitianError(f"Hermiticity deviation {dev:.3e} > {HERMITICITY_TOL}")

    A = ((a + a.conj().T) / 2.0).astype(complex)
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(A)))
    tol = _JACOBI_OFF_TOL * scale

    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= tol / n:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                if tau > 0.0:
                    t = -1.0 / (tau + math.sqrt(1.0 + tau * tau))
                elif tau < 0.0:
                    t = 1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- G' A G with G the complex plane rotation on (p, q)
                row_p = c * A[p, :] + s * phase * A[q, :]
                row_q = -s * np.conj(phase) * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = row_p, row_q
                col_p = c * A[:, p] + s * np.conj(phase) * A[:, q]
                col_q = -s * phase * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = col_p, col_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                vec_p = c * V[:, p] + s * np.conj(phase) * V[:, q]
                vec_q = -s * phase * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = vec_p, vec_q
    else:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {_JACOBI_MAX_SWEEPS} sweeps"
        )

    w = np.diag(A).real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(eigenvalues=w[order], eigenvectors=V[:, order])


def trace_norm(a, hermitian_hint: bool = False) -> float:
    """Schatten 1-norm (sum of singular values) of a square matrix.

    With ``hermitian_hint`` the norm is computed as the sum of absolute
    eigenvalues; otherwise singular values are obtained from the Hermitian
    eigenproblem of ``a^d a``.
    """
    a = _as_square_complex(a)
    if hermitian_hint:
        spec = hermitian_eig(a)
        return float(np.sum(np.abs(spec.eigenvalues)))
    gram = a.conj().T @ a
    spec = hermitian_eig((gram + gram.conj().T) / 2.0)
    return float(np.sum(np.sqrt(np.clip(spec.eigenvalues, 0.0, None))))


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product of two matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(a, b)


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Trace out every subsystem except ``keep``."""
    dims = rho.dims
    if len(dims) < 2:
        raise ValueError("partial_trace requires at least two subsystems")
    if not 0 <= keep < len(dims):
        raise ValueError(f"subsystem index {keep} out of range for dims {dims}")
    n = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    row_axes = [ax for ax in range(n) if ax != keep]
    for ax in reversed(row_axes):
        half = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=ax, axis2=ax + half)
    return DensityMatrix(tensor, (dims[keep],))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose one subsystem of a multipartite density matrix."""
    dims = rho.dims
    if len(dims) < 2:
        raise ValueError("partial_transpose requires at least two subsystems")
    if not 0 <= subsystem < len(dims):
        raise ValueError(f"subsystem index {subsystem} out of range for dims {dims}")
    n = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    tensor = np.swapaxes(tensor, subsystem, subsystem + n)
    return tensor.reshape(rho.side, rho.side)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits, with eigenvalues clipped to [0, 1]."""
    spec = hermitian_eig(rho.matrix)
    p = np.clip(spec.eigenvalues, 0.0, 1.0)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)) between density matrices, in [0, 1]."""
    wa, va = np.linalg.eigh(a.matrix)
    sqrt_a = (va * np.sqrt(np.clip(wa, 0.0, None))) @ va.conj().T
    m = sqrt_a @ b.matrix @ sqrt_a
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return float(min(1.0, np.sum(np.sqrt(np.clip(w, 0.0, None)))))
