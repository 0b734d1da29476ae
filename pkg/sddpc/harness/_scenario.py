import logging

import numpy

from .._exceptions import InsufficientDataError, RejectedInputError
from ..controller import (
    ControlConfig,
    InputConstraints,
    OutputConstraints,
    run_closed_loop,
)
from ..helpers.random import (
    OFFLINE_DISTURBANCE,
    OFFLINE_INPUT,
    OFFLINE_NOISE,
    OFFLINE_STATE,
    QUERY,
    make_stream,
)
from ..lti import NoiseSpec, StateSpaceModel, draw_noise, draw_samples, simulate
from ..predictor import build_predictor, predict, resolve_design
from ..signal_matrix import QueryCondition, build_signal_matrix, check_excitation

logger = logging.getLogger(__name__)

# ||g_pinv||^2 of the base smm build; each query rebinds its own value.
SMM_BASE_G_PINV_NORM2 = 1.0


def build_model(cfg):
    m = cfg.model
    return StateSpaceModel(m.A, m.B, m.C, m.D, m.E, name="scenario")


def build_noise(cfg, seed=None):
    n = cfg.noise
    return NoiseSpec(
        n.sigma2,
        n.Sigma_w,
        n.w_bar,
        n.distribution,
        n.seed if seed is None else seed,
    )


def _excite(model, data_cfg, noise, count, stream_in, stream_w):
    u = draw_samples(
        noise.distribution,
        stream_in,
        count,
        numpy.zeros(model.n_u),
        data_cfg.input_variance * numpy.eye(model.n_u),
    )
    w = draw_samples(
        noise.distribution,
        stream_w,
        count,
        numpy.zeros(model.n_w),
        data_cfg.disturbance_variance * numpy.eye(model.n_w),
    )
    return u, w


def collect_offline_data(cfg, model, noise):
    """Open-loop experiment(s) with i.i.d. excitation, one trajectory of
    `data.length` samples from x0 = 0.

    For the `columns` construction, `data.length` independent experiments of
    L samples each are run, each from its own standard normal initial state.
    """
    d = cfg.data
    stream_in = make_stream(noise.seed, OFFLINE_INPUT)
    stream_w = make_stream(noise.seed, OFFLINE_DISTURBANCE)
    stream_v = make_stream(noise.seed, OFFLINE_NOISE)
    x0 = numpy.zeros(model.n_x)
    if d.construction != "columns":
        u, w = _excite(model, d, noise, d.length, stream_in, stream_w)
        v = draw_noise(noise, d.length, model.n_y, stream_v)
        return simulate(model, x0, u, w, v)

    L = cfg.control.L0 + cfg.control.Lp
    u, w = _excite(model, d, noise, d.length * L, stream_in, stream_w)
    v = draw_noise(noise, d.length * L, model.n_y, stream_v)
    x0s = make_stream(noise.seed, OFFLINE_STATE).standard_normal((d.length, model.n_x))
    return [
        simulate(model, x0s[j], u[k : k + L], w[k : k + L], v[k : k + L])
        for j, k in enumerate(range(0, d.length * L, L))
    ]


def build_signal_matrix_for(cfg, data, model=None):
    c = cfg.control
    sm = build_signal_matrix(data, c.L0, c.Lp, cfg.data.construction)
    if model is not None:
        report = check_excitation(sm, model.n_x)
        logger.info(
            "signal matrix %s: rank %d, required %d",
            sm.digest()[:12],
            report.numeric_rank,
            report.required_rank,
        )
        if not report.ok and noise_free(cfg):
            logger.warning("signal matrix is not persistently exciting")
    return sm


def noise_free(cfg):
    Sigma_w = cfg.noise.Sigma_w
    return cfg.noise.sigma2 == 0.0 and (
        Sigma_w is None or not numpy.any(numpy.asarray(Sigma_w))
    )


def build_params(cfg, sm):
    sigma2 = cfg.noise.sigma2
    kind = cfg.predictor.design
    g2 = SMM_BASE_G_PINV_NORM2 if kind == "smm" else None
    design = resolve_design(kind, sm, sigma2, g2)
    return build_predictor(sm, design, sigma2)


def control_config(cfg, variant=None):
    c = cfg.control
    return ControlConfig(
        c.Q,
        c.R,
        c.L0,
        c.Lp,
        p=c.p,
        tightening=c.tightening,
        distribution_mode=c.distribution_mode,
        variant=c.variant if variant is None else variant,
        filter_mode=c.filter_mode,
        retry_budget=c.retry_budget,
    )


def build_constraints(cfg, model):
    c = cfg.constraints
    if c.output_lower is None and c.output_upper is None:
        oc = OutputConstraints.unconstrained(model.n_y)
    else:
        oc = OutputConstraints.from_bounds(c.output_lower, c.output_upper, model.n_y)
    if c.input_lower is None and c.input_upper is None:
        ic = InputConstraints.unconstrained(model.n_u)
    else:
        ic = InputConstraints.from_bounds(c.input_lower, c.input_upper, model.n_u)
    return oc, ic


def build_reference(cfg, n_y, steps=None):
    """Reference rows for `steps` closed-loop steps, shape (steps, n_y)."""
    r = cfg.reference
    steps = cfg.monte_carlo.steps if steps is None else steps
    if r.kind == "values":
        if r.values is None:
            raise RejectedInputError("reference kind 'values' needs reference.values")
        vals = numpy.asarray(r.values, dtype=float)
        vals = vals.reshape(-1, 1) if vals.ndim == 1 else vals
        if vals.shape[1] != n_y or vals.shape[0] == 0:
            raise RejectedInputError(
                f"reference values have shape {vals.shape}, expected (T, {n_y})"
            )
        idx = numpy.minimum(numpy.arange(steps), vals.shape[0] - 1)
        return vals[idx]
    # alternating: low for one period, then high, and so on
    level = numpy.where((numpy.arange(steps) // r.period) % 2 == 0, r.low, r.high)
    return numpy.repeat(level[:, None], n_y, axis=1)


class Scenario:
    """Everything a closed-loop run needs that does not depend on the online seed:
    the plant, offline data, signal matrix, predictor, constraints and reference.
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self.model = build_model(cfg)
        self.noise = build_noise(cfg)
        self.data = collect_offline_data(cfg, self.model, self.noise)
        self.sm = build_signal_matrix_for(cfg, self.data, self.model)
        self.params = build_params(cfg, self.sm)
        self.oc, self.ic = build_constraints(cfg, self.model)
        self.reference = build_reference(cfg, self.model.n_y)

    @property
    def steps(self):
        return self.cfg.monte_carlo.steps

    def run(self, variant=None, seed=None, online=None):
        ctrl = control_config(self.cfg, variant)
        return run_closed_loop(
            self.model,
            self.params,
            ctrl,
            self.oc,
            self.ic,
            self.reference,
            self.noise,
            self.steps,
            online=online,
            seed=seed,
        )


def prediction_check(cfg, seed=None):
    """Predict over one window of a fresh trajectory and return the prediction
    together with the noise-free future outputs of the plant.

    The query uses the realized disturbances as a known `w_bar` with zero
    covariance and the measured past outputs with covariance sigma2 I.
    """
    model = build_model(cfg)
    noise = build_noise(cfg)
    data = collect_offline_data(cfg, model, noise)
    sm = build_signal_matrix_for(cfg, data, model)
    params = build_params(cfg, sm)

    seed = noise.seed if seed is None else seed
    L0, L = sm.L0, sm.L
    stream = make_stream(seed, QUERY)
    u = stream.standard_normal((L, model.n_u)) * numpy.sqrt(cfg.data.input_variance)
    w = stream.standard_normal((L, model.n_w)) * numpy.sqrt(
        cfg.data.disturbance_variance
    )
    x0 = stream.standard_normal(model.n_x)
    v = draw_noise(noise, L, model.n_y, stream)
    traj = simulate(model, x0, u, w, v)
    if traj.N < L:
        raise InsufficientDataError(f"query trajectory shorter than L={L}")

    n_p = model.n_y * L0
    q = QueryCondition(
        traj.u[:L0].reshape(-1),
        traj.y[:L0].reshape(-1),
        noise.sigma2 * numpy.eye(n_p),
        traj.w.reshape(-1),
        numpy.zeros((model.n_w * L, model.n_w * L)),
    )
    res = predict(params, q, traj.u[L0:].reshape(-1))
    return res, traj.y0[L0:]
