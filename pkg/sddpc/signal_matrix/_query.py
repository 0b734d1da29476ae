import numpy

from .._exceptions import RejectedInputError
from ..helpers.linalg import as_vector, check_psd


class QueryCondition:
    """Initial condition and disturbance statistics of one prediction query: past
    inputs `u_ini`, (filtered) past outputs `y_ini_bar` with covariance `P_t`, and
    the mean `w_bar` and covariance `Sigma_w` of the disturbance over the window.
    """

    def __init__(self, u_ini, y_ini_bar, P_t, w_bar, Sigma_w):
        self.u_ini = numpy.asarray(u_ini, dtype=float).reshape(-1)
        self.y_ini_bar = numpy.asarray(y_ini_bar, dtype=float).reshape(-1)
        n = self.y_ini_bar.shape[0]
        self.P_t = check_psd(P_t, "P_t", shape=(n, n))
        self.w_bar = numpy.asarray(w_bar, dtype=float).reshape(-1)
        k = self.w_bar.shape[0]
        self.Sigma_w = check_psd(Sigma_w, "Sigma_w", shape=(k, k))

    def check(self, sm):
        """Raise unless the dimensions match the signal matrix `sm`."""
        as_vector(self.u_ini, sm.n_u * sm.L0, "u_ini")
        as_vector(self.y_ini_bar, sm.n_y * sm.L0, "y_ini_bar")
        as_vector(self.w_bar, sm.n_w * sm.L, "w_bar")
        return self

    def replace(self, **kwargs):
        fields = {
            "u_ini": self.u_ini,
            "y_ini_bar": self.y_ini_bar,
            "P_t": self.P_t,
            "w_bar": self.w_bar,
            "Sigma_w": self.Sigma_w,
        }
        unknown = set(kwargs) - set(fields)
        if unknown:
            raise RejectedInputError(f"unknown query fields {sorted(unknown)}")
        fields.update(kwargs)
        return QueryCondition(**fields)


def zero_query(sm, P_t=None, Sigma_w=None):
    """Query at the origin with the given (default zero) covariances."""
    n_p = sm.n_y * sm.L0
    n_wl = sm.n_w * sm.L
    return QueryCondition(
        numpy.zeros(sm.n_u * sm.L0),
        numpy.zeros(n_p),
        numpy.zeros((n_p, n_p)) if P_t is None else P_t,
        numpy.zeros(n_wl),
        numpy.zeros((n_wl, n_wl)) if Sigma_w is None else Sigma_w,
    )
