from ._config import (
    VERSION,
    ScenarioConfig,
    builtin_names,
    from_dict,
    load,
    loads,
)
from ._montecarlo import RunArtifacts, noise_digest, run_montecarlo, run_variants
from ._report import channel_bounds, report
from ._scenario import (
    Scenario,
    build_constraints,
    build_model,
    build_noise,
    build_params,
    build_reference,
    build_signal_matrix_for,
    collect_offline_data,
    control_config,
    prediction_check,
)
from .cli import main

__all__ = [
    "VERSION",
    "ScenarioConfig",
    "builtin_names",
    "load",
    "loads",
    "from_dict",
    "Scenario",
    "build_model",
    "build_noise",
    "collect_offline_data",
    "build_signal_matrix_for",
    "build_params",
    "control_config",
    "build_constraints",
    "build_reference",
    "prediction_check",
    "RunArtifacts",
    "run_montecarlo",
    "run_variants",
    "noise_digest",
    "report",
    "channel_bounds",
    "main",
]
