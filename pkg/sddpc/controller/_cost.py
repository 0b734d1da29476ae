import collections

import numpy

from .._exceptions import RejectedInputError
from ..predictor import uncertainty_covariance

QuadraticCost = collections.namedtuple(
    "QuadraticCost", ["P", "f", "constant", "weight"]
)


def evaluate_cost(cost, u_hat):
    """1/2 u^T P u + f^T u + constant"""
    return 0.5 * u_hat @ cost.P @ u_hat + cost.f @ u_hat + cost.constant


def regularizer_weight(params, cfg):
    """tr(Q_bar T)"""
    return float(numpy.trace(cfg.Q_bar @ params.T))


def assemble_cost(params, maps, r, cfg, q=None):
    """Expected control cost as a quadratic in u_hat,

        ||u||_R_bar^2 + ||Y_u u + y_0 - r||_Q_bar^2 + w ||G_u u + g_0||^2 + const,

    with w = tr(Q_bar T) for s_ddpc and w = 0 (nominal cost) otherwise. For s_ddpc
    the constant includes tr(Q_bar (Gamma_hat P_t Gamma_hat^T + Gamma_w Sigma_w
    Gamma_w^T)) when the query `q` is given.
    """
    n = cfg.n_y * cfg.Lp
    r = numpy.asarray(r, dtype=float).reshape(-1)
    if r.shape[0] != n or maps.Y_u.shape[0] != n:
        raise RejectedInputError(
            f"reference of length {r.shape[0]} and Y_u with {maps.Y_u.shape[0]} rows "
            f"do not match n_y Lp = {n}"
        )
    if maps.Y_u.shape[1] != cfg.R_bar.shape[0]:
        raise RejectedInputError("Y_u does not match the input dimension of R")
    Q_bar = cfg.Q_bar
    weight = regularizer_weight(params, cfg) if cfg.stochastic else 0.0

    e0 = maps.y_0 - r
    QY = Q_bar @ maps.Y_u
    P = 2.0 * (cfg.R_bar + maps.Y_u.T @ QY + weight * maps.G_u.T @ maps.G_u)
    f = 2.0 * (QY.T @ e0 + weight * maps.G_u.T @ maps.g_0)
    constant = e0 @ Q_bar @ e0 + weight * maps.g_0 @ maps.g_0
    if cfg.stochastic and q is not None:
        constant += numpy.trace(Q_bar @ uncertainty_covariance(params, q))
    return QuadraticCost(0.5 * (P + P.T), f, float(constant), weight)
