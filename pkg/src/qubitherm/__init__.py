"""Qubit-probe thermometry of a harmonic oscillator.

Closed-form probe states for two qubit-boson couplings, classical and
quantum Fisher information with optimal protocols, brute-force oracles
validating every formula, and Monte Carlo Cramer-Rao experiments.
"""

__version__ = "0.1.0"

from .estimation import (EstimationReport, InternalConsistencyError,
                         NoInformationError, Povm2, fi_deficit,
                         fisher_information, optimize_protocol,
                         outcome_probabilities, population_povm, qfi, sld,
                         tau_opt_transverse)
from .kernels import BACKEND as kernel_backend
from .mle import (CrlbReport, OutcomeCounts, crlb_experiment, mle_beta,
                  sample_population_outcomes)
from .models import (DensityMatrix2, DispersiveKernel, InverseTemperature,
                     Model, ProtocolTime, QubitPrep, dispersive_kernel,
                     probe_state_dispersive, probe_state_transverse,
                     probe_state_transverse_displaced, pure_qubit_state)
from .oracle import (FockTruncation, FullJcParams, full_jc_probe_state,
                     fisher_population_numeric, probe_state_dispersive_focksum,
                     probe_state_transverse_quadrature, qfi_numeric)
from .qmath import (QuadratureRule, eig_hermitian_2x2, finite_diff,
                    gauss_hermite_rule, lambert_w0, thermal_phase_sum,
                    trace_distance)

__all__ = [
    "__version__", "kernel_backend",
    "InverseTemperature", "QubitPrep", "ProtocolTime", "DensityMatrix2",
    "Model", "DispersiveKernel", "pure_qubit_state", "probe_state_transverse",
    "probe_state_transverse_displaced", "probe_state_dispersive",
    "dispersive_kernel",
    "Povm2", "EstimationReport", "population_povm", "outcome_probabilities",
    "fisher_information", "qfi", "sld", "tau_opt_transverse",
    "optimize_protocol", "fi_deficit", "NoInformationError",
    "InternalConsistencyError",
    "FockTruncation", "FullJcParams", "probe_state_transverse_quadrature",
    "probe_state_dispersive_focksum", "full_jc_probe_state", "qfi_numeric",
    "fisher_population_numeric",
    "OutcomeCounts", "CrlbReport", "sample_population_outcomes", "mle_beta",
    "crlb_experiment",
    "QuadratureRule", "lambert_w0", "eig_hermitian_2x2", "thermal_phase_sum",
    "gauss_hermite_rule", "finite_diff", "trace_distance",
]
