"""Parity-measurement signals for lossless SU(1,1) interferometers.

Closed-form parity expectations and error-propagation phase sensitivities
for five input-state families, verified against an independent truncated
two-mode Fock-space oracle (including operator-level checks of the
normal-ordered interferometer and measurement operators).
"""

from .closed_form import (DEFAULT_FD_STEP, ParityValue, parity_coherent_svs,
                          parity_signal, parity_thermal_svs,
                          parity_two_mode_coherent, parity_vacuum,
                          parity_vacuum_fock, parity_vacuum_fock_printed,
                          phase_sensitivity, vacuum_optimal_sensitivity)
from .errors import (CutoffCapExceeded, DerivativeVanishes, DomainError,
                     EmptyResult, NotConverged, SimulationError,
                     TruncationLeakage)
from .fock_oracle import (FockCutoff, build_state, converged_mean_photons,
                          converged_parity_expectation, ladder_ops,
                          interferometer_unitary_direct,
                          interferometer_unitary_normal_ordered,
                          mean_photons_after_first_opa,
                          measurement_equivalence_residual,
                          mu_operator_conjugated, mu_operator_normal_ordered,
                          parity_expectation, safe_indices, squeezer_direct,
                          squeezer_factored, unitary_equivalence_residual)
from .params import (GainConfig, InterferometerCoefficients,
                     MeasurementCoefficients, interferometer_coeffs,
                     measurement_coeffs)
from .states import (CoherentSqueezed, InputState, ThermalSqueezed,
                     TwoModeCoherent, TwoModeVacuum, VacuumFock)
from .sweep import (ParityCurve, PhaseGrid, SensitivityResult,
                    VerificationReport, VerificationRow, parity_curve,
                    sensitivity_curve, verify_closed_form)

__version__ = "0.1.0"

__all__ = [
    "CoherentSqueezed", "CutoffCapExceeded", "DEFAULT_FD_STEP",
    "DerivativeVanishes", "DomainError", "EmptyResult", "FockCutoff",
    "GainConfig", "InputState", "InterferometerCoefficients",
    "MeasurementCoefficients", "NotConverged", "ParityCurve", "ParityValue",
    "PhaseGrid", "SensitivityResult", "SimulationError", "ThermalSqueezed",
    "TruncationLeakage", "TwoModeCoherent", "TwoModeVacuum", "VacuumFock",
    "VerificationReport", "VerificationRow", "build_state",
    "converged_mean_photons", "converged_parity_expectation",
    "interferometer_coeffs", "interferometer_unitary_direct",
    "interferometer_unitary_normal_ordered", "ladder_ops",
    "mean_photons_after_first_opa", "measurement_coeffs",
    "measurement_equivalence_residual", "mu_operator_conjugated",
    "mu_operator_normal_ordered", "parity_coherent_svs", "parity_curve",
    "parity_expectation", "parity_signal", "parity_thermal_svs",
    "parity_two_mode_coherent", "parity_vacuum", "parity_vacuum_fock",
    "parity_vacuum_fock_printed", "phase_sensitivity", "safe_indices",
    "sensitivity_curve", "squeezer_direct", "squeezer_factored",
    "unitary_equivalence_residual", "vacuum_optimal_sensitivity",
    "verify_closed_form",
]
