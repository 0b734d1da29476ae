import numpy

from .._exceptions import RejectedInputError
from ..estimator import MODES as FILTER_MODES
from ..helpers.linalg import check_psd

VARIANTS = ("n_ddpc", "kf_ddpc", "s_ddpc")
TIGHTENINGS = ("elementwise", "setwise")
DISTRIBUTION_MODES = ("chebyshev", "gaussian")


class ControlConfig:
    """Stage weights Q and R, window lengths, chance-constraint level p and the
    controller variant. There is no regularizer weight: s_ddpc weights ||g||^2 by
    tr(Q_bar T), which the data determine.
    """

    def __init__(
        self,
        Q,
        R,
        L0,
        Lp,
        p=0.95,
        tightening="elementwise",
        distribution_mode="chebyshev",
        variant="s_ddpc",
        filter_mode="paper-literal",
        slack_penalty=None,
        retry_budget=3,
        solver_tol=1.0e-8,
        max_iter=200,
    ):
        self.Q = check_psd(numpy.atleast_2d(Q), "Q")
        self.R = check_psd(numpy.atleast_2d(R), "R")
        self.L0 = int(L0)
        self.Lp = int(Lp)
        if self.L0 < 1 or self.Lp < 1:
            raise RejectedInputError(f"L0 and Lp must be positive, got {L0}, {Lp}")
        p = float(p)
        if not 0.0 < p < 1.0:
            raise RejectedInputError(f"p must lie in (0, 1), got {p}")
        self.p = p
        _check_choice(tightening, TIGHTENINGS, "tightening")
        _check_choice(distribution_mode, DISTRIBUTION_MODES, "distribution_mode")
        _check_choice(variant, VARIANTS, "variant")
        _check_choice(filter_mode, FILTER_MODES, "filter_mode")
        self.tightening = tightening
        self.distribution_mode = distribution_mode
        self.variant = variant
        self.filter_mode = filter_mode
        if slack_penalty is None:
            slack_penalty = 1.0e6 * max(numpy.max(self.Q), 1.0e-12)
        self.slack_penalty = float(slack_penalty)
        self.retry_budget = int(retry_budget)
        self.solver_tol = float(solver_tol)
        self.max_iter = int(max_iter)

    @property
    def n_y(self):
        return self.Q.shape[0]

    @property
    def n_u(self):
        return self.R.shape[0]

    @property
    def Q_bar(self):
        return numpy.kron(numpy.eye(self.Lp), self.Q)

    @property
    def R_bar(self):
        return numpy.kron(numpy.eye(self.Lp), self.R)

    @property
    def uses_filter(self):
        return self.variant in ("kf_ddpc", "s_ddpc")

    @property
    def stochastic(self):
        """Expected cost and tightened constraints."""
        return self.variant == "s_ddpc"

    def replace(self, **kwargs):
        fields = dict(
            Q=self.Q,
            R=self.R,
            L0=self.L0,
            Lp=self.Lp,
            p=self.p,
            tightening=self.tightening,
            distribution_mode=self.distribution_mode,
            variant=self.variant,
            filter_mode=self.filter_mode,
            slack_penalty=self.slack_penalty,
            retry_budget=self.retry_budget,
            solver_tol=self.solver_tol,
            max_iter=self.max_iter,
        )
        fields.update(kwargs)
        return ControlConfig(**fields)


def _check_choice(value, choices, name):
    if value not in choices:
        raise RejectedInputError(f"{name} must be one of {choices}, got {value!r}")
