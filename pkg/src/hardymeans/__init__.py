"""Weighted means and the sharp constants of their Hardy-type inequalities.

The package splits into a small stack:

- :mod:`~hardymeans.weights` — weight sequences and their tail profile,
- :mod:`~hardymeans.means` — power / Gini / quasiarithmetic / deviation
  means and their prefix evaluators,
- :mod:`~hardymeans.generators` — generator functions and deviation
  kernels with the analytic metadata the solvers need,
- :mod:`~hardymeans.homogenize` — scaling ladders and kernel
  normalization,
- :mod:`~hardymeans.hardy` — closed-form constants and the
  characteristic-equation solver,
- :mod:`~hardymeans.empirical` — witness traces, probe sums, and the
  randomized inequality checker,
- :mod:`~hardymeans.cli` — the ``hardymeans`` command.
"""

from .errors import (
    BracketError,
    DerivativeUnavailableError,
    DomainError,
    HardyMeansError,
    InconclusiveProfile,
    InversionError,
    LimitNotDetected,
    NoBracketError,
    NoConvergenceError,
    NotIntegrableError,
    NotNormalizableError,
    PGeqOne,
    TailBoundFailure,
    UsageError,
    ViolationFound,
    ZeroDerivativeError,
)
from .weights import WeightSequence, WeightProfile, parse_weights, profile
from .generators import (
    GeneratorFunction,
    QuasideviationKernel,
    dev_gini,
    dev_power,
    difference_kernel,
    exp_gen,
    log_gen,
    power_gap_kernel,
    power_gen,
    ratio_kernel,
    scaled_ratio_kernel,
    validate_generator,
    validate_kernel,
)
from .means import (
    Deviation,
    Gini,
    HomogeneousDeviation,
    MeanSpec,
    Power,
    QuasiArithmetic,
    canonical,
    evaluate_mean,
    gini_mean,
    homogeneous_devmean,
    is_homogeneous,
    is_symmetric_monotone,
    parse_mean,
    power_mean,
    prefix_values,
    quasiarithmetic_mean,
    quasideviation_mean,
)
from .homogenize import (
    HomogenizationEstimate,
    h_of_kernel,
    homogenize,
    normalize_kernel,
)
from .hardy import (
    C_of,
    F_eval,
    HardyConstantResult,
    LimitProbe,
    auto_constant,
    chi_f,
    classical_C,
    constant_closed,
    constant_root,
    detect_order,
    gini_constant,
    qa_constant,
    solve_cef,
)
from .empirical import (
    EmpiricalTrace,
    PowerProbe,
    VerifyReport,
    est_lower_bound,
    genA_limit,
    genA_partial,
    hardy_ratio,
    make_sequence,
    verify_inequality,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "C_of",
    "Deviation",
    "DerivativeUnavailableError",
    "DomainError",
    "EmpiricalTrace",
    "F_eval",
    "GeneratorFunction",
    "Gini",
    "HardyConstantResult",
    "HardyMeansError",
    "HomogeneousDeviation",
    "HomogenizationEstimate",
    "InconclusiveProfile",
    "InversionError",
    "LimitNotDetected",
    "LimitProbe",
    "MeanSpec",
    "NoBracketError",
    "NoConvergenceError",
    "NotIntegrableError",
    "NotNormalizableError",
    "PGeqOne",
    "Power",
    "PowerProbe",
    "QuasiArithmetic",
    "QuasideviationKernel",
    "TailBoundFailure",
    "UsageError",
    "VerifyReport",
    "ViolationFound",
    "WeightProfile",
    "WeightSequence",
    "ZeroDerivativeError",
    "auto_constant",
    "canonical",
    "chi_f",
    "classical_C",
    "constant_closed",
    "constant_root",
    "detect_order",
    "dev_gini",
    "dev_power",
    "difference_kernel",
    "est_lower_bound",
    "evaluate_mean",
    "exp_gen",
    "genA_limit",
    "genA_partial",
    "gini_constant",
    "gini_mean",
    "h_of_kernel",
    "hardy_ratio",
    "homogeneous_devmean",
    "homogenize",
    "is_homogeneous",
    "is_symmetric_monotone",
    "log_gen",
    "make_sequence",
    "normalize_kernel",
    "parse_mean",
    "parse_weights",
    "power_gap_kernel",
    "power_gen",
    "power_mean",
    "prefix_values",
    "profile",
    "qa_constant",
    "quasiarithmetic_mean",
    "quasideviation_mean",
    "ratio_kernel",
    "scaled_ratio_kernel",
    "solve_cef",
    "validate_generator",
    "validate_kernel",
    "verify_inequality",
]
