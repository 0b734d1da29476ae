import collections

import numpy

from ..helpers.linalg import as_vector, floor_psd

PredictionResult = collections.namedtuple("PredictionResult", ["g", "y_bar", "Sigma"])
AffineMaps = collections.namedtuple(
    "AffineMaps", ["G_u", "g_0", "Y_u", "y_0", "params"]
)


def _check(params, q, u_hat):
    sm = params.sm
    q.check(sm)
    return as_vector(u_hat, sm.n_u * sm.Lp, "u_hat")


def uncertainty_covariance(params, q):
    """Gamma_hat P_t Gamma_hat^T + Gamma_w Sigma_w Gamma_w^T, the part of the
    prediction covariance that does not scale with ||g||^2.
    """
    G = params.gamma_hat
    Gw = params.gamma_w
    return G @ q.P_t @ G.T + Gw @ q.Sigma_w @ Gw.T


def predict(params, q, u_hat):
    u_hat = _check(params, q, u_hat)
    params = params.for_query(q, u_hat)
    sm = params.sm
    g = (
        params.R1 @ q.u_ini
        + params.R2 @ u_hat
        + params.R3 @ q.w_bar
        + params.R4 @ q.y_ini_bar
    )
    y_bar = sm.Yf @ g - params.gamma_hat @ (sm.Yp @ g - q.y_ini_bar)
    Sigma = uncertainty_covariance(params, q) + (g @ g) * params.T
    return PredictionResult(g, y_bar, floor_psd(Sigma))


def predict_affine_maps(params, q, u_guess=None):
    """g = G_u u_hat + g_0 and y_bar = Y_u u_hat + y_0 for all u_hat. For the smm
    design, lambda is fixed at the query (q, u_guess) and the bound parameters are
    returned along with the maps.
    """
    sm = params.sm
    if u_guess is None:
        u_guess = numpy.zeros(sm.n_u * sm.Lp)
    u_guess = _check(params, q, u_guess)
    params = params.for_query(q, u_guess)
    G_u = params.R2
    g_0 = params.R1 @ q.u_ini + params.R3 @ q.w_bar + params.R4 @ q.y_ini_bar
    Y_u = params.Phi @ G_u
    y_0 = params.Phi @ g_0 + params.gamma_hat @ q.y_ini_bar
    return AffineMaps(G_u, g_0, Y_u, y_0, params)
