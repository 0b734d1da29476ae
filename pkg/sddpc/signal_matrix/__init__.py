from ._cache import read_signal_matrix, write_signal_matrix
from ._excitation import ExcitationReport, check_excitation, required_rank
from ._pinv_predict import pinv_predict
from ._query import QueryCondition, zero_query
from ._signal_matrix import (
    CONSTRUCTIONS,
    SignalMatrix,
    build_columns,
    build_hankel,
    build_page,
    build_signal_matrix,
)

__all__ = [
    "CONSTRUCTIONS",
    "SignalMatrix",
    "build_hankel",
    "build_page",
    "build_columns",
    "build_signal_matrix",
    "QueryCondition",
    "zero_query",
    "ExcitationReport",
    "check_excitation",
    "required_rank",
    "pinv_predict",
    "read_signal_matrix",
    "write_signal_matrix",
]
