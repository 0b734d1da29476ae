import numpy
import scipy.linalg

from .._exceptions import IllConditionedError
from ..helpers.linalg import as_vector


def qp_reference_solve(sm, design, q, u_hat):
    """Solve the equality-constrained predictor QP

        min_g ||Yp g - y_ini||_S^2 + lam ||g||^2   s.t.   Psi g = col(u_ini, u_hat, w)

    through its dense KKT system. Test oracle for the closed-form maps.
    """
    q.check(sm)
    u_hat = as_vector(u_hat, sm.n_u * sm.Lp, "u_hat")
    lam = design.effective_lambda(sm)
    Psi = sm.Psi()
    M = sm.M
    m = Psi.shape[0]
    c = numpy.concatenate([q.u_ini, u_hat, q.w_bar])

    H = 2.0 * (sm.Yp.T @ design.S @ sm.Yp + lam * numpy.eye(M))
    K = numpy.block([[H, Psi.T], [Psi, numpy.zeros((m, m))]])
    rhs = numpy.concatenate([2.0 * sm.Yp.T @ (design.S @ q.y_ini_bar), c])
    try:
        sol = scipy.linalg.solve(K, rhs, assume_a="sym")
    except (numpy.linalg.LinAlgError, ValueError) as e:
        raise IllConditionedError(
            f"singular KKT system: {e}", {"kkt": float(numpy.linalg.cond(K))}
        )
    return sol[:M]
