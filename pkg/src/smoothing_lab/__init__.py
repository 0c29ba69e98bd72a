"""Numerical laboratory for averaging operators over nested surfaces.

The package models surfaces gamma: R^m -> R^n from three admitted families
together with singular product weights, computes the predicted smoothing
exponent s0 and log power d0 exactly, and checks the predictions against
three numeric experiments: sublevel-set measure growth, Fourier decay of the
surface measure, and certified van der Corput bounds.
"""

from .surfaces import (
    KernelSpec,
    SurfaceSpec,
    ValidationReport,
    evaluate_gamma,
    evaluate_kernel,
    validate_ratio_condition,
)
from .exponents import (
    ExponentReport,
    RegionSpec,
    compute_s0_d0,
    membership,
    region_of_boundedness,
)
from .sublevel import (
    GrowthFit,
    MonteCarloSampler,
    SublevelCurve,
    TensorGridSampler,
    estimate_sublevel_measure,
    fit_growth_exponent,
    singular_integral_probe,
)
from .oscillatory import (
    DecayFit,
    DecaySample,
    collect_decay_samples,
    evaluate_U,
    evaluate_sigma_hat,
    fit_decay_exponent,
)
from .vdc import (
    AmplitudeSpec,
    PhaseSpec,
    VdcBound,
    bound_oscillatory_integral,
    decompose_dyadic,
    falling_factorial_matrix,
    gap_constant,
    vdc_interval_bound,
)
from .errors import (
    BudgetExceededError,
    ConditioningError,
    InsufficientDataError,
    SingularPointError,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSpec",
    "BudgetExceededError",
    "ConditioningError",
    "DecayFit",
    "DecaySample",
    "ExponentReport",
    "GrowthFit",
    "InsufficientDataError",
    "KernelSpec",
    "MonteCarloSampler",
    "PhaseSpec",
    "RegionSpec",
    "SingularPointError",
    "SublevelCurve",
    "SurfaceSpec",
    "TensorGridSampler",
    "ValidationReport",
    "VdcBound",
    "bound_oscillatory_integral",
    "collect_decay_samples",
    "compute_s0_d0",
    "decompose_dyadic",
    "estimate_sublevel_measure",
    "evaluate_U",
    "evaluate_gamma",
    "evaluate_kernel",
    "evaluate_sigma_hat",
    "falling_factorial_matrix",
    "fit_decay_exponent",
    "fit_growth_exponent",
    "gap_constant",
    "membership",
    "region_of_boundedness",
    "singular_integral_probe",
    "validate_ratio_condition",
    "vdc_interval_bound",
    "__version__",
]
