import numpy
import scipy.linalg

from .._exceptions import IllConditionedError
from ..helpers.linalg import pinv, symmetrize
from ..signal_matrix import pinv_predict
from ._design import resolve_design

# Eigenvalues of the reduced normal matrix below this fraction of the largest one
# count as zero when lambda is negligible as well.
DROP_RTOL = 1.0e-10
MAX_CONDITION = 1.0e14


class PredictorParams:
    """Closed-form solution maps of the regularized predictor

        g = R1 u_ini + R2 u_hat + R3 w + R4 y_ini,

    with the data-driven autonomous map `gamma_hat`, the disturbance map `gamma_w`
    and the per-unit-norm noise covariance `T`.
    """

    def __init__(self, sm, design, sigma2, lam, R1, R2, R3, R4, gamma_hat, bound=False):
        self.sm = sm
        self.design = design
        self.sigma2 = sigma2
        self.lam = lam
        self.R1 = R1
        self.R2 = R2
        self.R3 = R3
        self.R4 = R4
        self.gamma_hat = gamma_hat
        self.Phi = sm.Yf - gamma_hat @ sm.Yp
        self.gamma_w = self.Phi @ R3
        n = gamma_hat.shape[0]
        self.T = symmetrize(sigma2 * (gamma_hat @ gamma_hat.T + numpy.eye(n)))
        self.bound = bound

    @property
    def sm_digest(self):
        return self.sm.digest()

    @property
    def R_c(self):
        return numpy.hstack([self.R1, self.R2, self.R3])

    def for_query(self, q, u_hat):
        """Parameters for one query. Only the smm design depends on the query, through
        ||g_pinv||^2; the data-driven `gamma_hat` of the base build is kept.
        """
        if self.design.kind != "smm" or self.bound:
            return self
        g_pinv, _ = pinv_predict(self.sm, q.u_ini, u_hat, q.w_bar, q.y_ini_bar)
        design = resolve_design("smm", self.sm, self.sigma2, float(g_pinv @ g_pinv))
        return build_predictor(
            self.sm, design, self.sigma2, gamma_hat=self.gamma_hat, bound=True
        )


def _solve_weights(G, lam):
    vals, vecs = numpy.linalg.eigh(symmetrize(G))
    vals = numpy.maximum(vals, 0.0)
    vmax = vals[-1] if len(vals) else 0.0
    cutoff = DROP_RTOL * vmax
    weights = numpy.zeros_like(vals)
    keep = (vals > cutoff) | (lam > cutoff)
    weights[keep] = 1.0 / (vals[keep] + lam)
    return vals, vecs, weights


def build_predictor(sm, design, sigma2, gamma_hat=None, bound=False):
    """Evaluated in null-space form: with Psi^+ and the projector Pi onto null(Psi),
    g = Psi^+ c + Pi h where h solves the reduced ridge problem; the push-through
    identity keeps the inner solve at the size of the past-output window.
    """
    sigma2 = float(sigma2)
    lam = design.effective_lambda(sm)
    Psi = sm.Psi()
    Psi_pinv = pinv(Psi)
    F = design.S_factor()

    B = F @ sm.Yp
    # Bt = (I - Psi^+ Psi) B^T
    Bt = B.T - Psi_pinv @ (Psi @ B.T)
    vals, vecs, weights = _solve_weights(Bt.T @ Bt, lam)
    NK = Bt @ (vecs * weights) @ vecs.T

    R_c = Psi_pinv - NK @ (B @ Psi_pinv)
    R4 = NK @ F
    n_ul0 = sm.n_u * sm.L0
    n_ul = sm.n_u * sm.L
    R1 = R_c[:, :n_ul0]
    R2 = R_c[:, n_ul0:n_ul]
    R3 = R_c[:, n_ul:]

    if gamma_hat is None:
        gamma_hat = _estimate_gamma(sm, R4, vals, lam)
    return PredictorParams(sm, design, sigma2, lam, R1, R2, R3, R4, gamma_hat, bound)


def _estimate_gamma(sm, R4, vals, lam):
    YpR4 = sm.Yp @ R4
    conds = {
        "Yp_R4": float(numpy.linalg.cond(YpR4)) if YpR4.size else 0.0,
        "normal_matrix": (
            float((vals[-1] + lam) / (vals[0] + lam)) if len(vals) else 0.0
        ),
    }
    if not conds["Yp_R4"] < MAX_CONDITION:
        raise IllConditionedError(
            f"Yp R4 is singular at working precision (cond {conds['Yp_R4']:.3e})",
            conds,
        )
    try:
        return scipy.linalg.solve(YpR4.T, (sm.Yf @ R4).T).T
    except numpy.linalg.LinAlgError as e:
        raise IllConditionedError(str(e), conds)
