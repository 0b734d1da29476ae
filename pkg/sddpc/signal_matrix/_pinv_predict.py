import numpy

from ..helpers.linalg import as_vector


def pinv_predict(sm, u_ini, u_hat, w, y_ini):
    """Deterministic predictor: least-norm g with col(Psi, Yp) g = col(u_ini, u_hat,
    w, y_ini), and y_hat = Yf g.
    """
    rhs = numpy.concatenate(
        [
            as_vector(u_ini, sm.n_u * sm.L0, "u_ini"),
            as_vector(u_hat, sm.n_u * sm.Lp, "u_hat"),
            as_vector(w, sm.n_w * sm.L, "w"),
            as_vector(y_ini, sm.n_y * sm.L0, "y_ini"),
        ]
    )
    g = sm.condition_pinv() @ rhs
    return g, sm.Yf @ g
