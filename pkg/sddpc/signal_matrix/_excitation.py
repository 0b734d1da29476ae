import collections

from ..helpers.linalg import numeric_rank, singular_values

ExcitationReport = collections.namedtuple(
    "ExcitationReport", ["numeric_rank", "required_rank", "singular_values", "ok"]
)


def required_rank(n_u, n_w, L, n_x):
    return (n_u + n_w) * L + n_x


def check_excitation(sm, n_x):
    """Rank test of Z against (n_u + n_w) L + n_x. Under output noise Z is
    generically full rank, so `ok` is informative on noise-free data only.
    """
    rank = numeric_rank(sm.Z)
    required = required_rank(sm.n_u, sm.n_w, sm.L, n_x)
    return ExcitationReport(
        rank, required, singular_values(sm.condition_matrix()), rank >= required
    )
