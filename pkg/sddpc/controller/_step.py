import logging

import numpy

from .._exceptions import StepError
from ..estimator import FilterState, extract_initial_condition
from ..predictor import predict, predict_affine_maps
from ..signal_matrix import QueryCondition
from ..socp import ConeProgram, SecondOrderCone, solve
from ._cost import assemble_cost, evaluate_cost
from ._tightening import assemble_tightening, mu_factor

logger = logging.getLogger(__name__)


class StepResult:
    def __init__(
        self,
        u_hat,
        u_applied,
        g,
        y_bar,
        Sigma,
        expected_cost,
        solver_status,
        slack=0.0,
        iterations=0,
        tightening=None,
        cost=None,
    ):
        self.u_hat = u_hat
        self.u_applied = u_applied
        self.g = g
        self.y_bar = y_bar
        self.Sigma = Sigma
        self.expected_cost = expected_cost
        self.solver_status = solver_status
        self.slack = slack
        self.iterations = iterations
        self.tightening = tightening
        self.cost = cost

    def __repr__(self):
        return (
            f"StepResult(status={self.solver_status!r}, "
            f"expected_cost={self.expected_cost:.6g}, slack={self.slack:.3g})"
        )


def make_query(source, w_bar, Sigma_w, sigma2=None):
    """QueryCondition from a filter state, from a raw (u_hist, y_hist) pair with
    P_t = sigma2 I, or passed through if it already is one.
    """
    if isinstance(source, QueryCondition):
        return source
    if isinstance(source, FilterState):
        u_ini, y_ini, P_t = extract_initial_condition(source)
    else:
        u_ini, y_ini = (numpy.asarray(a, dtype=float).reshape(-1) for a in source)
        P_t = float(sigma2) * numpy.eye(y_ini.shape[0])
    return QueryCondition(u_ini, y_ini, P_t, w_bar, Sigma_w)


def _build_program(cost, tight, in_window, slack_penalty=None):
    """Decision vector [u_hat, t (if a cone is needed), slack (if requested)]."""
    n = cost.P.shape[0]
    use_cone = tight.needs_cone
    n_t = 1 if use_cone else 0
    n_s = tight.n_rows if slack_penalty is not None else 0
    N = n + n_t + n_s

    P = numpy.zeros((N, N))
    P[:n, :n] = cost.P
    f = numpy.zeros(N)
    f[:n] = cost.f
    if n_s:
        f[n + n_t :] = slack_penalty

    G_rows = []
    h_rows = []
    if tight.n_rows:
        Gt = numpy.zeros((tight.n_rows, N))
        Gt[:, :n] = tight.A_u
        if use_cone:
            Gt[:, n] = tight.mu * tight.c2
        if n_s:
            Gt[:, n + n_t :] = -numpy.eye(n_s)
        G_rows.append(Gt)
        h_rows.append(tight.rhs - tight.mu * tight.c1)
    if n_s:
        Gs = numpy.zeros((n_s, N))
        Gs[:, n + n_t :] = -numpy.eye(n_s)
        G_rows.append(Gs)
        h_rows.append(numpy.zeros(n_s))
    H_in, q_in = in_window
    if H_in.shape[0]:
        Gi = numpy.zeros((H_in.shape[0], N))
        Gi[:, :n] = H_in
        G_rows.append(Gi)
        h_rows.append(q_in)

    socs = []
    if use_cone:
        Rg, c, rho = tight.compressed_norm()
        k = Rg.shape[0]
        C = numpy.zeros((k + 1, N))
        C[:k, :n] = Rg
        a = numpy.zeros(N)
        a[n] = 1.0
        socs.append(SecondOrderCone(C, numpy.concatenate([c, [rho]]), a, 0.0))

    G = numpy.vstack(G_rows) if G_rows else None
    h = numpy.concatenate(h_rows) if h_rows else None
    return ConeProgram(P, f, G=G, h=h, socs=socs, c0=cost.constant)


def solve_step(params, q, oc, ic, r, cfg, t=0, u_guess=None, warm_start=None):
    """One receding-horizon step: build the cone program from the expected cost,
    the tightened output constraints and the input constraints, and solve it.
    Infeasible programs are retried with penalized slack on the output rows.
    """
    q.check(params.sm)
    maps = predict_affine_maps(params, q, u_guess)
    params = maps.params
    cost = assemble_cost(params, maps, r, cfg, q)
    mu = (
        mu_factor(cfg.p, cfg.n_y, cfg.tightening, cfg.distribution_mode)
        if cfg.stochastic
        else 0.0
    )
    tight = assemble_tightening(params, maps, oc.window(t, cfg.Lp), q, mu)
    in_window = ic.window(t, cfg.Lp)
    n = cost.P.shape[0]

    prog = _build_program(cost, tight, in_window)
    sol = solve(prog, tol=cfg.solver_tol, max_iter=cfg.max_iter, warm_start=warm_start)
    slack = 0.0
    if not sol.optimal and tight.n_rows:
        logger.info("step %d: %s program, retrying with slack", t, sol.status)
        prog = _build_program(cost, tight, in_window, cfg.slack_penalty)
        sol = solve(prog, tol=cfg.solver_tol, max_iter=cfg.max_iter)
        if sol.optimal:
            n_t = 1 if tight.needs_cone else 0
            slack = float(numpy.sum(numpy.maximum(sol.z[n + n_t :], 0.0)))
            logger.info("step %d: slack %.3g in use", t, slack)
    if not sol.optimal:
        raise StepError(f"step {t}: solver returned {sol.status}", sol.status)

    u_hat = sol.z[:n].copy()
    pred = predict(params, q, u_hat)
    return StepResult(
        u_hat,
        u_hat[: cfg.n_u].copy(),
        pred.g,
        pred.y_bar,
        pred.Sigma,
        float(evaluate_cost(cost, u_hat)),
        sol.status,
        slack,
        sol.iterations,
        tight,
        cost,
    )
