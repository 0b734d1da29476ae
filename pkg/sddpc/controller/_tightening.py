import logging

import numpy
import scipy.stats

from .._exceptions import RejectedInputError
from ..predictor import uncertainty_covariance
from ._config import DISTRIBUTION_MODES, TIGHTENINGS

logger = logging.getLogger(__name__)


def mu_factor(p, n_y, tightening, distribution_mode):
    """Back-off factor such that the tightened constraints imply the chance
    constraints at level p, from the one-sided Chebyshev bound or, for Gaussian
    errors, from the normal and chi-square quantiles.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise RejectedInputError(f"p must lie in (0, 1), got {p}")
    if tightening not in TIGHTENINGS:
        raise RejectedInputError(f"tightening must be one of {TIGHTENINGS}")
    if distribution_mode not in DISTRIBUTION_MODES:
        raise RejectedInputError(
            f"distribution_mode must be one of {DISTRIBUTION_MODES}"
        )
    if distribution_mode == "chebyshev":
        if tightening == "elementwise":
            return float(numpy.sqrt(1.0 / (1.0 - p) - 1.0))
        return float(numpy.sqrt(n_y / (1.0 - p)))
    if tightening == "elementwise":
        return float(scipy.stats.norm.ppf(p))
    return float(numpy.sqrt(scipy.stats.chi2.ppf(p, n_y)))


class TighteningSet:
    """Rows  A_u u + mu c2 t <= rhs - mu c1  with  ||G_u u + g_0|| <= t.

    `A_u` = H_bar Y_u and `rhs` = q_bar - H_bar y_0. With mu = 0 the rows are the
    nominal polytope on the predicted mean and no cone is needed.
    """

    def __init__(self, A_u, rhs, c1, c2, mu, G_u, g_0, floored=0):
        self.A_u = A_u
        self.rhs = rhs
        self.c1 = c1
        self.c2 = c2
        self.mu = mu
        self.G_u = G_u
        self.g_0 = g_0
        self.floored = floored

    @property
    def n_rows(self):
        return self.A_u.shape[0]

    @property
    def needs_cone(self):
        return self.mu > 0.0 and self.n_rows > 0 and numpy.any(self.c2 > 0.0)

    def compressed_norm(self):
        """(R, c, rho) with ||G_u u + g_0|| = ||(R u + c, rho)|| for all u."""
        Qg, Rg = numpy.linalg.qr(self.G_u)
        c = Qg.T @ self.g_0
        rho = numpy.linalg.norm(self.g_0 - Qg @ c)
        return Rg, c, rho

    def margin(self, u_hat):
        """Tightened right-hand side minus left-hand side; nonnegative when feasible."""
        g = self.G_u @ u_hat + self.g_0
        backoff = self.mu * (self.c1 + self.c2 * numpy.linalg.norm(g))
        return self.rhs - backoff - self.A_u @ u_hat


def _sqrt_diag(M, name):
    d = numpy.diag(M).copy()
    neg = d < 0.0
    count = int(numpy.sum(neg))
    if count:
        logger.warning("floored %d negative %s diagonal entries at 0", count, name)
        d[neg] = 0.0
    return numpy.sqrt(d), count


def assemble_tightening(params, maps, oc_window, q, mu):
    """Convex tightening of the output chance constraints over the horizon."""
    H_bar, q_bar = oc_window
    H_bar = numpy.asarray(H_bar, dtype=float)
    if H_bar.shape[0] and H_bar.shape[1] != maps.Y_u.shape[0]:
        raise RejectedInputError(
            f"H_bar acts on {H_bar.shape[1]} outputs, "
            f"predictions have {maps.Y_u.shape[0]}"
        )
    A_u = H_bar @ maps.Y_u
    rhs = q_bar - H_bar @ maps.y_0
    if mu > 0.0:
        U = uncertainty_covariance(params, q)
        c1, n1 = _sqrt_diag(H_bar @ U @ H_bar.T, "c1")
        c2, n2 = _sqrt_diag(H_bar @ params.T @ H_bar.T, "c2")
    else:
        c1 = numpy.zeros(H_bar.shape[0])
        c2 = numpy.zeros(H_bar.shape[0])
        n1 = n2 = 0
    return TighteningSet(A_u, rhs, c1, c2, float(mu), maps.G_u, maps.g_0, n1 + n2)
