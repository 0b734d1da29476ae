import csv
import logging

import numpy

from .._exceptions import RejectedInputError, StepError
from ..estimator import init as filter_init
from ..estimator import predict_step, trace_record, update_step
from ..helpers.linalg import as_sequence
from ..helpers.random import ONLINE_DISTURBANCE, ONLINE_NOISE, make_stream
from ..lti import draw_disturbance, draw_noise
from ..predictor import predict
from ._step import make_query, solve_step

logger = logging.getLogger(__name__)


class OnlineNoise:
    """Pre-drawn measurement noise `v` and disturbances `w` for one closed-loop run,
    one row per plant step (warm-up included). Replaying the same object makes
    several controllers see identical realizations.
    """

    def __init__(self, v, w):
        self.v = numpy.asarray(v, dtype=float)
        self.w = numpy.asarray(w, dtype=float)
        assert self.v.shape[0] == self.w.shape[0]

    def __len__(self):
        return self.v.shape[0]


def draw_online(noise, n_y, n_w, length, seed=None):
    seed = noise.seed if seed is None else seed
    v = draw_noise(noise, length, n_y, make_stream(seed, ONLINE_NOISE))
    w = draw_disturbance(noise, length, n_w, make_stream(seed, ONLINE_DISTURBANCE))
    return OnlineNoise(v, w)


def window_disturbance_stats(noise, n_w, L):
    """Mean and covariance of the stacked disturbance over a window of L samples.
    Per-sample statistics are repeated along the window.
    """
    if noise.w_bar.shape[0] == n_w * L:
        return noise.w_bar, noise.Sigma_w
    if noise.w_bar.shape[0] == n_w:
        return numpy.tile(noise.w_bar, L), numpy.kron(numpy.eye(L), noise.Sigma_w)
    raise RejectedInputError(
        f"disturbance statistics of size {noise.w_bar.shape[0]} fit neither n_w={n_w} "
        f"nor n_w L={n_w * L}"
    )


def reference_window(reference, t, length):
    """Rows t, ..., t + length - 1 of the reference, holding the last row."""
    idx = numpy.minimum(numpy.arange(t, t + length), reference.shape[0] - 1)
    return reference[idx].reshape(-1)


class ClosedLoopLog:
    def __init__(self, variant, n_u, n_y, reference):
        self.variant = variant
        self.n_u = n_u
        self.n_y = n_y
        self.reference = reference
        self.u = []
        self.y = []
        self.y0 = []
        self.ybar0 = []
        self.filtered = []
        self.r = []
        self.cost = []
        self.true_cost = []
        self.violation = []
        self.slack = []
        self.status = []
        self.expected_cost_check = []
        self.trace = []
        self.aborted = False
        self.failures = 0

    @property
    def steps(self):
        return len(self.u)

    def append(self, **kwargs):
        for key, val in kwargs.items():
            getattr(self, key).append(val)

    def array(self, name):
        vals = getattr(self, name)
        return numpy.array(vals, dtype=float)


def run_closed_loop(
    model, params, cfg, oc, ic, reference, noise, steps, online=None, x0=None, seed=None
):
    """Receding-horizon loop. The first L0 plant steps apply zero input to fill the
    past windows; afterwards each step builds the initial condition (filtered for
    kf_ddpc and s_ddpc, raw with P_t = sigma2 I for n_ddpc), solves, applies the
    first input block, measures and filters.
    """
    sm = params.sm
    n_u, n_y, n_w = model.n_u, model.n_y, model.n_w
    L0, Lp = cfg.L0, cfg.Lp
    if (sm.n_u, sm.n_y, sm.n_w, sm.L0, sm.Lp) != (n_u, n_y, n_w, L0, Lp):
        raise RejectedInputError("predictor, model and control config do not match")
    reference = as_sequence(numpy.asarray(reference, dtype=float), n_y, "reference")
    if online is None:
        online = draw_online(noise, n_y, n_w, L0 + steps, seed)
    if len(online) < L0 + steps:
        raise RejectedInputError(f"need {L0 + steps} noise samples, got {len(online)}")
    w_bar, Sigma_w = window_disturbance_stats(noise, n_w, sm.L)
    sigma2 = noise.sigma2

    x = numpy.zeros(model.n_x) if x0 is None else model.check_state(x0)
    u_hist = []
    y_hist = []
    for k in range(L0):
        u = numpy.zeros(n_u)
        y0 = model.output(x, u)
        u_hist.append(u)
        y_hist.append(y0 + online.v[k])
        x = model.step(x, u, online.w[k])

    state = None
    if cfg.uses_filter:
        state = filter_init(numpy.array(u_hist), numpy.array(y_hist))
    raw = (numpy.concatenate(u_hist), numpy.concatenate(y_hist))

    log = ClosedLoopLog(cfg.variant, n_u, n_y, reference)
    u_guess = None
    consecutive = 0
    for t in range(steps):
        k = L0 + t
        source = state if cfg.uses_filter else raw
        q = make_query(source, w_bar, Sigma_w, sigma2)
        r = reference_window(reference, t, Lp)
        try:
            res = solve_step(params, q, oc, ic, r, cfg, t, u_guess)
            consecutive = 0
            u_hat = res.u_hat
            status = res.solver_status
            expected = res.expected_cost
            slack = res.slack
            y_bar, Sigma = res.y_bar, res.Sigma
            check = expected - _nominal_plus_trace(res, r, cfg)
        except StepError as err:
            log.failures += 1
            consecutive += 1
            logger.warning("variant %s, step %d failed: %s", cfg.variant, t, err)
            if consecutive > cfg.retry_budget:
                logger.warning(
                    "variant %s aborted after %d failures", cfg.variant, consecutive
                )
                log.aborted = True
                break
            u_hat = numpy.zeros(n_u * Lp) if u_guess is None else u_guess
            pred = predict(params, q, u_hat)
            status = err.status or "failed"
            expected = numpy.nan
            slack = 0.0
            y_bar, Sigma = pred.y_bar, pred.Sigma
            check = numpy.nan

        u = u_hat[:n_u]
        y0 = model.output(x, u)
        y = y0 + online.v[k]
        x = model.step(x, u, online.w[k])
        r_t = reference[min(t, reference.shape[0] - 1)]
        e = y0 - r_t
        true_cost = float(u @ cfg.R @ u + e @ cfg.Q @ e)

        if cfg.uses_filter:
            cross_gain = None
            if cfg.filter_mode == "full-kf":
                cross_gain = params.gamma_hat[:n_y]
            prior = predict_step(state, u, y_bar[:n_y], Sigma[:n_y, :n_y], cross_gain)
            state = update_step(prior, y, sigma2, cfg.filter_mode)
            log.trace.append(trace_record(t, prior, state, y, y0))
            filtered = state.y_hist[state.newest].copy()
        else:
            raw = (
                numpy.concatenate([raw[0][n_u:], u]),
                numpy.concatenate([raw[1][n_y:], y]),
            )
            filtered = y.copy()

        log.append(
            u=u.copy(),
            y=y,
            y0=y0,
            ybar0=y_bar[:n_y].copy(),
            filtered=filtered,
            r=r_t.copy(),
            cost=expected,
            true_cost=true_cost,
            violation=oc.violation(t, y),
            slack=slack,
            status=status,
            expected_cost_check=check,
        )
        u_guess = numpy.concatenate([u_hat[n_u:], u_hat[-n_u:]])
    return log


def _nominal_plus_trace(res, r, cfg):
    """||u||_R_bar^2 + ||y_bar - r||_Q_bar^2 + tr(Q_bar Sigma) at the optimizer, or the
    nominal cost for the certainty-equivalent variants.
    """
    e = res.y_bar - r
    nominal = res.u_hat @ cfg.R_bar @ res.u_hat + e @ cfg.Q_bar @ e
    if not cfg.stochastic:
        return nominal
    return nominal + numpy.trace(cfg.Q_bar @ res.Sigma)


def log_header(n_u, n_y):
    def names(base, n):
        return [base] if n == 1 else [f"{base}_{i}" for i in range(n)]

    return (
        ["t"]
        + names("u", n_u)
        + names("y", n_y)
        + names("y0", n_y)
        + names("ybar0", n_y)
        + names("filtered", n_y)
        + names("r", n_y)
        + ["true_cost", "cost", "violation", "slack", "status"]
    )


def write_log_csv(filename, log):
    with open(filename, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(log_header(log.n_u, log.n_y))
        for t in range(log.steps):
            vals = numpy.concatenate(
                [
                    log.u[t],
                    log.y[t],
                    log.y0[t],
                    log.ybar0[t],
                    log.filtered[t],
                    log.r[t],
                ]
            )
            scalars = [log.true_cost[t], log.cost[t], log.violation[t], log.slack[t]]
            writer.writerow(
                [t]
                + ["%.17g" % v for v in vals]
                + ["%.17g" % v for v in scalars]
                + [log.status[t]]
            )
