from . import (
    controller,
    estimator,
    harness,
    helpers,
    lti,
    predictor,
    signal_matrix,
    socp,
)
from .__about__ import __version__
from ._exceptions import (
    ConfigError,
    DDPCError,
    EstimatorError,
    IllConditionedError,
    InsufficientDataError,
    MissingDependencyError,
    RejectedInputError,
    SingularOracleError,
    StepError,
)

__all__ = [
    "__version__",
    "helpers",
    "lti",
    "signal_matrix",
    "predictor",
    "estimator",
    "socp",
    "controller",
    "harness",
    "DDPCError",
    "RejectedInputError",
    "InsufficientDataError",
    "SingularOracleError",
    "MissingDependencyError",
    "IllConditionedError",
    "StepError",
    "EstimatorError",
    "ConfigError",
]
