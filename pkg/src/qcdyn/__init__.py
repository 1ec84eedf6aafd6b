"""Quantum-correlation dynamics of Bell-diagonal states under local dephasing."""

from .channels import DephasingSchedule, dephase_local, dephase_qubit_local, lambda_of_time
from .correlations import (
    BOTH,
    CHI1,
    CHI2,
    DECAYING_D2,
    FROZEN_D1,
    NEITHER,
    TIE,
    CorrelationReport,
    GeometricDiscordBreakdown,
    QuantumClassicalState,
    classify_zero_discord,
    d1_analytic,
    d2_analytic,
    discord_geo_analytic,
    discord_mi,
    discord_trace_norm_numeric,
    negativity,
    qubit_geo_analytic,
    qubit_transition_lambda,
    transition_lambda,
)
from .freezing import (
    MEASURES,
    DynamicsTrace,
    FreezingComparison,
    FreezingReport,
    compare_freezing,
    detect_freezing_interval,
    freezing_index,
    sweep_dynamics,
)
from .linalg import (
    ConvergenceError,
    DensityMatrix,
    NotHermitianError,
    Spectrum,
    fidelity,
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
    trace_norm,
    von_neumann_entropy,
)
from .states import (
    BellParams2,
    BellParams3,
    PolarizationModel,
    SelectiveRotation,
    apply_selective_rotation,
    bell_diagonal_qubit,
    bell_diagonal_qutrit,
    max_entangled_qutrit,
    polarized_initial_state,
    prepare_bell_diagonal_circuit,
)
from .tomography import (
    InsufficientDataError,
    MeasurementRecord,
    MeasurementSetting,
    ReconstructionResult,
    default_settings,
    mle_reconstruct,
    simulate_counts,
)

__version__ = "0.1.0"
