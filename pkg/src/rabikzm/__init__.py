"""Anisotropic quantum Rabi model: equilibrium analytics and Kibble-Zurek
quench dynamics on a position grid.

Public API re-exports; see the submodules for details:

* model      parameters, grids, spinor states, Hamiltonian action, Fock basis
* analytics  closed-form gaps, displacements, variances, scaling predictions
* propagator Strang split-step kernels (real and imaginary time)
* solver     ground-state relaxation and exact diagonalization
* dynamics   linear quench schedules and observable time series
* kzm        freeze detection, power-law fits and full scans
* cli        command-line entry point
"""

from .analytics import (
    AnalyticsError,
    EffectiveOscillator,
    KzPrediction,
    PhaseLabel,
    amplitude_factors,
    critical_coupling,
    displacement,
    effective_oscillator,
    excitation_gap,
    kz_prediction,
    normal_ground_profile,
    phase_of,
    variances,
)
from .dynamics import (
    DynamicsError,
    Observables,
    QuenchSchedule,
    TimeSeries,
    evolve,
    evolve_batch,
    evolve_static,
    observe,
)
from .kzm import (
    ExponentReport,
    FreezeEvent,
    KzmError,
    ScalingFit,
    ScanConfig,
    ScanResult,
    ScanRow,
    extract_exponents,
    freeze_time,
    frozen_length,
    loglog_fit,
    run_scan,
)
from .model import (
    Grid,
    ModelError,
    ModelParams,
    SpinorState,
    apply_hamiltonian,
    energy_expectation,
    fock_hamiltonian,
    fock_parity,
    inner,
)
from .propagator import Stepper
from .solver import (
    GroundStateResult,
    SolverError,
    SpectrumResult,
    density,
    ground_state,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticsError",
    "DynamicsError",
    "EffectiveOscillator",
    "ExponentReport",
    "FreezeEvent",
    "Grid",
    "GroundStateResult",
    "KzPrediction",
    "KzmError",
    "ModelError",
    "ModelParams",
    "Observables",
    "PhaseLabel",
    "QuenchSchedule",
    "ScalingFit",
    "ScanConfig",
    "ScanResult",
    "ScanRow",
    "SolverError",
    "SpectrumResult",
    "SpinorState",
    "Stepper",
    "TimeSeries",
    "amplitude_factors",
    "apply_hamiltonian",
    "critical_coupling",
    "density",
    "displacement",
    "effective_oscillator",
    "energy_expectation",
    "evolve",
    "evolve_batch",
    "evolve_static",
    "excitation_gap",
    "extract_exponents",
    "fock_hamiltonian",
    "fock_parity",
    "freeze_time",
    "frozen_length",
    "ground_state",
    "inner",
    "kz_prediction",
    "loglog_fit",
    "normal_ground_profile",
    "observe",
    "phase_of",
    "run_scan",
    "spectrum",
    "variances",
]
