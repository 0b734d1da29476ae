from .linalg import (
    PINV_RTOL,
    as_sequence,
    as_vector,
    check_psd,
    floor_psd,
    numeric_rank,
    pinv,
    psd_sqrt,
    shift_matrix,
    singular_values,
    symmetrize,
)
from .random import make_stream

__all__ = [
    "PINV_RTOL",
    "pinv",
    "singular_values",
    "numeric_rank",
    "symmetrize",
    "floor_psd",
    "check_psd",
    "psd_sqrt",
    "as_vector",
    "as_sequence",
    "shift_matrix",
    "make_stream",
]
