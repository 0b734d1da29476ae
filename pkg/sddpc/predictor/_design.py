import logging

import numpy

from .._exceptions import MissingDependencyError, RejectedInputError
from ..helpers.linalg import check_psd

logger = logging.getLogger(__name__)

KINDS = ("subspace", "wasserstein", "smm", "mmse")

# Relative size of the stand-in for lambda -> 0+.
EPS_REG = 1.0e-8


class RegularizerDesign:
    """Weight `lam` on ||g||^2 and weight matrix `S` on the past-output residual of
    the predictor's inner least-squares problem.

    `lam` is the value of the design formula and may be 0 (noise-free data); the
    predictor is then built with `eps_reg(sm, S)` instead. For mmse, `factor` is
    Gamma_bar with S = Gamma_bar^T Gamma_bar.
    """

    def __init__(self, kind, lam, S, factor=None, g_pinv_norm2=None):
        if kind not in KINDS:
            raise RejectedInputError(
                f"design kind must be one of {KINDS}, got {kind!r}"
            )
        lam = float(lam)
        if not lam >= 0.0:
            raise RejectedInputError(f"lambda must be nonnegative, got {lam}")
        self.kind = kind
        self.lam = lam
        self.S = check_psd(S, "S")
        self.factor = factor
        self.g_pinv_norm2 = g_pinv_norm2

    def S_factor(self):
        """Some F with F^T F = S."""
        if self.factor is not None:
            return self.factor
        return numpy.eye(self.S.shape[0])

    def effective_lambda(self, sm):
        if self.lam > 0.0:
            return self.lam
        return eps_reg(sm, self.S)

    def __repr__(self):
        return f"RegularizerDesign({self.kind!r}, lam={self.lam:.6g})"


def eps_reg(sm, S):
    val = EPS_REG * numpy.trace(sm.Yp.T @ S @ sm.Yp) / sm.M
    return val if val > 0.0 else EPS_REG


def gamma_bar(sm):
    """Output-history block of the deterministic predictor map Yf col(Psi, Yp)^+."""
    K = sm.Yf @ sm.condition_pinv()
    return K[:, K.shape[1] - sm.n_y * sm.L0 :]


def resolve_design(kind, sm, sigma2, g_pinv_norm2=None):
    sigma2 = float(sigma2)
    if not sigma2 >= 0.0:
        raise RejectedInputError(f"sigma2 must be nonnegative, got {sigma2}")
    n_y = sm.n_y
    identity = numpy.eye(n_y * sm.L0)

    if kind == "subspace":
        design = RegularizerDesign(kind, eps_reg(sm, identity), identity)
    elif kind == "wasserstein":
        design = RegularizerDesign(kind, n_y * sm.L0 * sigma2, identity)
    elif kind == "smm":
        if g_pinv_norm2 is None:
            raise MissingDependencyError("the smm design needs ||g_pinv||^2")
        g2 = max(float(g_pinv_norm2), 1.0e-12)
        lam = n_y * (sm.L * sigma2 + sm.Lp * sigma2 / g2)
        design = RegularizerDesign(
            kind, lam, identity, g_pinv_norm2=float(g_pinv_norm2)
        )
    elif kind == "mmse":
        Gb = gamma_bar(sm)
        S = Gb.T @ Gb
        lam = n_y * sm.Lp * sigma2 + numpy.trace(S) * sigma2
        design = RegularizerDesign(kind, lam, S, factor=Gb)
    else:
        raise RejectedInputError(f"design kind must be one of {KINDS}, got {kind!r}")

    logger.debug("resolved %s design, lambda = %.6g", kind, design.lam)
    return design
