import numpy

from .._exceptions import RejectedInputError, SingularOracleError
from ..helpers.linalg import numeric_rank, pinv


def observability_stack(model, start, stop):
    """col(C A^start, ..., C A^(stop - 1))"""
    blocks = []
    Ak = numpy.linalg.matrix_power(model.A, start)
    for _ in range(start, stop):
        blocks.append(model.C @ Ak)
        Ak = model.A @ Ak
    if not blocks:
        return numpy.zeros((0, model.n_x))
    return numpy.vstack(blocks)


def true_gamma(model, L0, Lp):
    """Autonomous map from L0 past noise-free outputs to the next Lp outputs. Test
    oracle only.
    """
    if L0 < 1 or Lp < 1:
        raise RejectedInputError(f"L0 and Lp must be positive, got {L0}, {Lp}")
    O_past = observability_stack(model, 0, L0)
    if numeric_rank(O_past) < model.n_x:
        raise SingularOracleError(
            f"observability stack with L0={L0} has rank {numeric_rank(O_past)} "
            f"< n_x={model.n_x}"
        )
    O_future = observability_stack(model, L0, L0 + Lp)
    return O_future @ pinv(O_past)
