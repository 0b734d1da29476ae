from ._filter import (
    MODES,
    FilterState,
    extract_initial_condition,
    init,
    predict_step,
    update_step,
)
from ._trace import TraceRecord, trace_header, trace_record, write_trace_csv

__all__ = [
    "MODES",
    "FilterState",
    "init",
    "predict_step",
    "update_step",
    "extract_initial_condition",
    "TraceRecord",
    "trace_record",
    "trace_header",
    "write_trace_csv",
]
