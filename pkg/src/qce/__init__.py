"""Two coupled qubits under a squeezed-cat single-mode environment.

Closed-form interaction-picture dynamics of a pair of coupled qubits whose
second member talks to one field mode prepared in a superposition of squeezed
coherent states, plus the decoherence observables (linear entropy,
concurrence, l1 coherence), brute-force validation oracles, parameter sweeps
and a deterministic CLI.
"""

from .backend import available_backends, get_backend
from .dynamics import (
    CouplingParams,
    JointState,
    ManifoldSpectrum,
    evolve_state,
    manifold_amplitudes,
    manifold_spectrum,
)
from .errors import (
    ConfigError,
    DegenerateAbscissaError,
    DegenerateStateError,
    NumericalFaultError,
    QceError,
    SqueezingDegenerateError,
    StepSizeError,
    TruncationError,
)
from .field import (
    FieldParams,
    FieldStatistics,
    FockExpansion,
    cat_expansion,
    closed_form_mean_n,
    coherent_fock_coefficients,
    field_statistics,
    fock_coefficients_closed_form,
    fock_coefficients_recurrence,
    normalization_constant,
    squeezing_factors,
)
from .metrics import (
    MetricsSample,
    QubitDensity,
    TimeSeries,
    TwoQubitDensity,
    concurrence,
    l1_coherence,
    linear_entropy,
    metrics_series,
    qubit1_density,
    two_qubit_density,
)
from .oracle import (
    ManifoldHamiltonian,
    build_manifold_hamiltonian,
    compare_states,
    propagate_numeric,
    spectral_propagate,
)
from .sweep import LinearFit, SweepPoint, c_sweep, linear_fit, theta_sweep

__version__ = "0.1.0"

__all__ = [
    "available_backends",
    "get_backend",
    "CouplingParams",
    "JointState",
    "ManifoldSpectrum",
    "evolve_state",
    "manifold_amplitudes",
    "manifold_spectrum",
    "ConfigError",
    "DegenerateAbscissaError",
    "DegenerateStateError",
    "NumericalFaultError",
    "QceError",
    "SqueezingDegenerateError",
    "StepSizeError",
    "TruncationError",
    "FieldParams",
    "FieldStatistics",
    "FockExpansion",
    "cat_expansion",
    "closed_form_mean_n",
    "coherent_fock_coefficients",
    "field_statistics",
    "fock_coefficients_closed_form",
    "fock_coefficients_recurrence",
    "normalization_constant",
    "squeezing_factors",
    "MetricsSample",
    "QubitDensity",
    "TimeSeries",
    "TwoQubitDensity",
    "concurrence",
    "l1_coherence",
    "linear_entropy",
    "metrics_series",
    "qubit1_density",
    "two_qubit_density",
    "ManifoldHamiltonian",
    "build_manifold_hamiltonian",
    "compare_states",
    "propagate_numeric",
    "spectral_propagate",
    "LinearFit",
    "SweepPoint",
    "c_sweep",
    "linear_fit",
    "theta_sweep",
    "__version__",
]
