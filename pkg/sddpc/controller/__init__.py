from ._closed_loop import (
    ClosedLoopLog,
    OnlineNoise,
    draw_online,
    log_header,
    reference_window,
    run_closed_loop,
    window_disturbance_stats,
    write_log_csv,
)
from ._config import DISTRIBUTION_MODES, TIGHTENINGS, VARIANTS, ControlConfig
from ._constraints import InputConstraints, OutputConstraints
from ._cost import QuadraticCost, assemble_cost, evaluate_cost, regularizer_weight
from ._metrics import METRICS, metrics
from ._step import StepResult, make_query, solve_step
from ._tightening import TighteningSet, assemble_tightening, mu_factor

__all__ = [
    "VARIANTS",
    "TIGHTENINGS",
    "DISTRIBUTION_MODES",
    "ControlConfig",
    "OutputConstraints",
    "InputConstraints",
    "mu_factor",
    "QuadraticCost",
    "assemble_cost",
    "evaluate_cost",
    "regularizer_weight",
    "TighteningSet",
    "assemble_tightening",
    "StepResult",
    "make_query",
    "solve_step",
    "OnlineNoise",
    "draw_online",
    "window_disturbance_stats",
    "reference_window",
    "ClosedLoopLog",
    "run_closed_loop",
    "log_header",
    "write_log_csv",
    "METRICS",
    "metrics",
]
