"""Bell-diagonal state families and the pulse-level preparation circuit.

Composite basis convention for the two-qutrit system: index = 3 * (first
subsystem level) + (second subsystem level).  The first subsystem is the one
subject to dephasing; the second hosts the classical basis of
quantum-classical states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import dephase_local
from .linalg import DensityMatrix

ROTATION_AXES = ("X", "Y", "-Y")


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class BellParams3:
    """Mixing weights (c0, c1, c2) of the qutrit Bell-diagonal family."""

    c0: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            _check_probability(name, getattr(self, name))
        total = self.c0 + self.c1 + self.c2
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")


@dataclass(frozen=True)
class BellParams2:
    """Mixing weights (b0, b1) of the qubit Bell-diagonal family."""

    b0: float
    b1: float

    def __post_init__(self):
        for name in ("b0", "b1"):
            _check_probability(name, getattr(self, name))
        total = self.b0 + self.b1
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")


@dataclass(frozen=True)
class PolarizationModel:
    """Independent polarization probabilities of the two spins.

    Residual population is split uniformly over the two non-target levels
    of each spin (maximum-entropy residual).
    """

    p_e: float
    p_n: float

    def __post_init__(self):
        _check_probability("p_e", self.p_e)
        _check_probability("p_n", self.p_n)


@dataclass(frozen=True)
class SelectiveRotation:
    """Rotation on a single pair of composite levels.

    ``axis`` selects the generator: exp(-i * angle * sigma_axis / 2) acting
    on the ordered (level_a, level_b) two-level block.
    """

    level_a: int
    level_b: int
    angle: float
    axis: str = "Y"

    def __post_init__(self):
        if self.level_a == self.level_b:
            raise ValueError("rotation levels must differ")
        if not math.isfinite(self.angle):
            raise ValueError(f"angle must be finite, got {self.angle}")
        if self.axis not in ROTATION_AXES:
            raise ValueError(f"axis must be one of {ROTATION_AXES}, got {self.axis!r}")


def _ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def max_entangled_ket_qutrit(k: int) -> np.ndarray:
    """Statevector of the k-th maximally entangled two-qutrit basis state."""
    if k not in (0, 1, 2):
        raise ValueError(f"basis index must be 0, 1 or 2, got {k}")
    v = np.zeros(9, dtype=complex)
    for j in range(3):
        v[3 * j + (j + k) % 3] = 1.0
    return v / math.sqrt(3.0)


def max_entangled_qutrit(k: int) -> DensityMatrix:
    """Projector onto the k-th maximally entangled two-qutrit state."""
    v = max_entangled_ket_qutrit(k)
    return DensityMatrix(np.outer(v, v.conj()), (3, 3))


def bell_diagonal_qutrit(params: BellParams3) -> DensityMatrix:
    """Mixture of the three maximally entangled qutrit basis states."""
    mat = np.zeros((9, 9), dtype=complex)
    for k, weight in enumerate((params.c0, params.c1, params.c2)):
        v = max_entangled_ket_qutrit(k)
        mat += weight * np.outer(v, v.conj())
    return DensityMatrix(mat, (3, 3))


def bell_qubit_ket(k: int) -> np.ndarray:
    """Qubit maximally entangled states: k=0 -> (|00>+|11>)/sqrt2, k=1 -> (|01>+|10>)/sqrt2."""
    if k not in (0, 1):
        raise ValueError(f"basis index must be 0 or 1, got {k}")
    v = np.zeros(4, dtype=complex)
    if k == 0:
        v[0] = v[3] = 1.0
    else:
        v[1] = v[2] = 1.0
    return v / math.sqrt(2.0)


def bell_diagonal_qubit(params: BellParams2) -> DensityMatrix:
    """Mixture of the two maximally entangled qubit states."""
    mat = np.zeros((4, 4), dtype=complex)
    for k, weight in enumerate((params.b0, params.b1)):
        v = bell_qubit_ket(k)
        mat += weight * np.outer(v, v.conj())
    return DensityMatrix(mat, (2, 2))


def rotation_unitary(rotation: SelectiveRotation, dim: int = 9) -> np.ndarray:
    """Full-space unitary of a selective two-level rotation."""
    a, b = rotation.level_a, rotation.level_b
    if not (0 <= a < dim and 0 <= b < dim):
        raise ValueError(f"levels ({a}, {b}) out of range for dimension {dim}")
    c = math.cos(rotation.angle / 2.0)
    s = math.sin(rotation.angle / 2.0)
    u = np.eye(dim, dtype=complex)
    if rotation.axis == "X":
        block = np.array([[c, -1j * s], [-1j * s, c]])
    elif rotation.axis == "Y":
        block = np.array([[c, -s], [s, c]], dtype=complex)
    else:  # -Y
        block = np.array([[c, s], [-s, c]], dtype=complex)
    u[a, a], u[a, b] = block[0, 0], block[0, 1]
    u[b, a], u[b, b] = block[1, 0], block[1, 1]
    return u


def apply_selective_rotation(rho: DensityMatrix, rotation: SelectiveRotation) -> DensityMatrix:
    """Conjugate a two-qutrit state by a selective rotation."""
    if rho.side != 9:
        raise ValueError(f"expected a 9-dimensional state, got side {rho.side}")
    u = rotation_unitary(rotation, rho.side)
    return DensityMatrix(u @ rho.matrix @ u.conj().T, rho.dims)


def polarized_initial_state(model: PolarizationModel) -> DensityMatrix:
    """Product state of imperfectly polarized electron (level 1) and nucleus (level 0)."""
    w_e = np.array([(1 - model.p_e) / 2, model.p_e, (1 - model.p_e) / 2])
    w_n = np.array([model.p_n, (1 - model.p_n) / 2, (1 - model.p_n) / 2])
    weights = np.kron(w_e, w_n)
    return DensityMatrix(np.diag(weights.astype(complex)), (3, 3))


# Pulse list of the preparation circuit: a population-splitting rotation on
# |10>-|20>, four nuclear-spin rotations building uniform superpositions,
# then four pi pulses shuffling levels into the entangled configuration.
# Composite indices: |ij> -> 3*i + j.
_RF_PULSES = (
    SelectiveRotation(3, 4, 2.0 * math.acos(math.sqrt(1.0 / 3.0)), "Y"),  # |10>-|11>
    SelectiveRotation(6, 7, 2.0 * math.acos(math.sqrt(1.0 / 3.0)), "Y"),  # |20>-|21>
    SelectiveRotation(4, 5, 2.0 * math.acos(math.sqrt(1.0 / 2.0)), "Y"),  # |11>-|12>
    SelectiveRotation(7, 8, 2.0 * math.acos(math.sqrt(1.0 / 2.0)), "Y"),  # |21>-|22>
)
_MW_PI_PULSES = (
    SelectiveRotation(0, 3, math.pi, "-Y"),  # |00>-|10>
    SelectiveRotation(5, 8, math.pi, "Y"),   # |12>-|22>
    SelectiveRotation(3, 6, math.pi, "-Y"),  # |10>-|20>
    SelectiveRotation(2, 5, math.pi, "Y"),   # |02>-|12>
)


def prepare_bell_diagonal_circuit(
    c0: float, c2: float, model: PolarizationModel
) -> DensityMatrix:
    """Run the pulse-level preparation of the c1 = 0 Bell-diagonal family.

    The circuit polarizes both spins, splits the electron population into
    (c0, c2) with a rotation of angle 2*arccos(sqrt(c0)), lets the electron
    coherence dephase fully (the long wait between pulse blocks), builds the
    nuclear superpositions, dephases again and finishes with four selective
    pi pulses.  With a perfect polarization model the output equals the
    ideal mixture c0 |Psi00><Psi00| + c2 |Psi02><Psi02|.
    """
    c0 = _check_probability("c0", c0)
    c2 = _check_probability("c2", c2)
    if abs(c0 + c2 - 1.0) > 1e-9:
        raise ValueError(
            f"the preparation circuit covers the c1 = 0 family: need c0 + c2 = 1, got {c0 + c2!r}"
        )
    rho = polarized_initial_state(model)
    rho = apply_selective_rotation(
        rho, SelectiveRotation(3, 6, 2.0 * math.acos(math.sqrt(c0)), "Y")
    )
    rho = dephase_local(rho, 0, 0.0)
    for pulse in _RF_PULSES:
        rho = apply_selective_rotation(rho, pulse)
    rho = dephase_local(rho, 0, 0.0)
    for pulse in _MW_PI_PULSES:
        rho = apply_selective_rotation(rho, pulse)
    return rho
