"""Propagation of OAM photon states through a stochastically fluctuating metric.

The package models how Laguerre-Gaussian single photons and two-photon
entangled states decohere while travelling a distance through Gaussian
correlated weak metric fluctuations.  It provides the beam optics, the
fluctuation statistics, the mode-coupling integrals, the analytic and
Monte Carlo density-matrix evolutions, and the entanglement diagnostics,
plus a command-line front end for reproducing the headline curves.
"""

from .beam_optics import (
    BeamGeometry,
    BeamParameters,
    ModeIndex,
    TransverseQuadrature,
    beam_geometry,
    evaluate_lg,
    evaluate_lg_via_generating,
    generating_function_value,
    overlap,
)
from .config import ExperimentConfig, config_from_dict, load_config
from .coupling import (
    CouplingMatrix,
    MetricPoint,
    apply_fluctuation_derivative,
    apply_free_derivative,
    coupling_integral_generating,
    coupling_integral_quadrature,
    coupling_matrix,
    diagonal_coupling,
    evolution_generator,
)
from .entanglement_metrics import (
    MetricsReport,
    decay_distance,
    eigenvalues_hermitian,
    eigenvalues_symmetric,
    metrics_report,
    negativity,
    negativity_blockwise,
    partial_transpose,
    purity,
    purity_blockwise,
)
from .errors import (
    ConvergenceError,
    GridTooCoarseError,
    InsufficientSamplesError,
    InvalidParameterError,
    NoRootError,
    OamgravError,
    OracleMismatchError,
    OrderCapError,
    QuadratureError,
    RegimeError,
    SingularOmegaError,
)
from .evolution import (
    DecayModel,
    MonteCarloResult,
    TwoPhotonDensityMatrix,
    characteristic_length,
    decay_weight,
    ensemble_decay_exponent,
    evolve_analytic,
    evolve_monte_carlo,
    initial_maximally_entangled,
    monte_carlo_reference,
)
from .fluctuation_field import (
    FluctuationParameters,
    MetricTrajectory,
    covariance_factor,
    empirical_autocorrelation,
    sample_many,
    sample_trajectory,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BeamGeometry",
    "BeamParameters",
    "ModeIndex",
    "TransverseQuadrature",
    "beam_geometry",
    "evaluate_lg",
    "evaluate_lg_via_generating",
    "generating_function_value",
    "overlap",
    "ExperimentConfig",
    "config_from_dict",
    "load_config",
    "CouplingMatrix",
    "MetricPoint",
    "apply_fluctuation_derivative",
    "apply_free_derivative",
    "coupling_integral_generating",
    "coupling_integral_quadrature",
    "coupling_matrix",
    "diagonal_coupling",
    "evolution_generator",
    "MetricsReport",
    "decay_distance",
    "eigenvalues_hermitian",
    "eigenvalues_symmetric",
    "metrics_report",
    "negativity",
    "negativity_blockwise",
    "partial_transpose",
    "purity",
    "purity_blockwise",
    "ConvergenceError",
    "GridTooCoarseError",
    "InsufficientSamplesError",
    "InvalidParameterError",
    "NoRootError",
    "OamgravError",
    "OracleMismatchError",
    "OrderCapError",
    "QuadratureError",
    "RegimeError",
    "SingularOmegaError",
    "DecayModel",
    "MonteCarloResult",
    "TwoPhotonDensityMatrix",
    "characteristic_length",
    "decay_weight",
    "ensemble_decay_exponent",
    "evolve_analytic",
    "evolve_monte_carlo",
    "initial_maximally_entangled",
    "monte_carlo_reference",
    "FluctuationParameters",
    "MetricTrajectory",
    "covariance_factor",
    "empirical_autocorrelation",
    "sample_many",
    "sample_trajectory",
    "write_trajectory_csv",
    "__version__",
]
