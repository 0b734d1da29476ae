import numpy

import sddpc
from sddpc.helpers.random import OFFLINE_DISTURBANCE, OFFLINE_INPUT, QUERY, make_stream


def scalar_model(a=0.5, b=1.0, c=1.0, e=None):
    return sddpc.lti.StateSpaceModel([[a]], [[b]], [[c]], [[0.0]], e)


def offline_data(model, N, sigma2=0.0, seed=0, x0=None):
    """Open-loop experiment with unit Gaussian inputs and disturbances."""
    u = make_stream(seed, OFFLINE_INPUT).standard_normal((N, model.n_u))
    w = make_stream(seed, OFFLINE_DISTURBANCE).standard_normal((N, model.n_w))
    v = sddpc.lti.draw_noise(sddpc.lti.NoiseSpec(sigma2, seed=seed), N, model.n_y)
    x0 = numpy.zeros(model.n_x) if x0 is None else x0
    return sddpc.lti.simulate(model, x0, u, w, v)


def benchmark_matrix(N=500, L0=4, Lp=10, sigma2=0.0, seed=0, construction="hankel"):
    model = sddpc.lti.fourth_order_benchmark()
    data = offline_data(model, N, sigma2, seed)
    return model, sddpc.signal_matrix.build_signal_matrix(data, L0, Lp, construction)


def random_window(model, sm, seed, sigma2=0.0):
    """A fresh trajectory of one window from a random state: the query on its first
    L0 samples, the future inputs and the noise-free future outputs.
    """
    stream = make_stream(seed, QUERY)
    L0, L = sm.L0, sm.L
    u = stream.standard_normal((L, model.n_u))
    w = stream.standard_normal((L, model.n_w))
    x0 = stream.standard_normal(model.n_x)
    v = numpy.sqrt(sigma2) * stream.standard_normal((L, model.n_y))
    traj = sddpc.lti.simulate(model, x0, u, w, v)
    n_p = model.n_y * L0
    n_w = model.n_w * L
    q = sddpc.signal_matrix.QueryCondition(
        traj.u[:L0].reshape(-1),
        traj.y[:L0].reshape(-1),
        sigma2 * numpy.eye(n_p),
        traj.w.reshape(-1),
        numpy.zeros((n_w, n_w)),
    )
    return q, traj.u[L0:].reshape(-1), traj.y0[L0:].reshape(-1)


def relative_error(a, b):
    a = numpy.asarray(a, dtype=float)
    b = numpy.asarray(b, dtype=float)
    return numpy.linalg.norm(a - b) / max(numpy.linalg.norm(b), 1.0e-300)


def check_kkt(prog, sol, tol=1.0e-6):
    res = sddpc.socp.kkt_residuals(prog, sol.z, sol.duals)
    scale = 1.0 + max(
        numpy.max(numpy.abs(prog.f), initial=0.0),
        numpy.max(numpy.abs(prog.h), initial=0.0),
        numpy.max(numpy.abs(prog.beq), initial=0.0),
    )
    return max(res) <= tol * scale


def first_step_query(scenario, variant="s_ddpc", seed=0):
    """Control config, query and reference window of the first closed-loop step of
    `scenario`, after the zero-input warm-up that `run_closed_loop` performs.
    """
    model = scenario.model
    ctrl = sddpc.harness.control_config(scenario.cfg, variant)
    L0 = ctrl.L0
    online = sddpc.controller.draw_online(
        scenario.noise, model.n_y, model.n_w, L0, seed
    )
    x = numpy.zeros(model.n_x)
    u_hist = []
    y_hist = []
    for k in range(L0):
        u = numpy.zeros(model.n_u)
        u_hist.append(u)
        y_hist.append(model.output(x, u) + online.v[k])
        x = model.step(x, u, online.w[k])
    state = sddpc.estimator.init(numpy.array(u_hist), numpy.array(y_hist))
    w_bar, Sigma_w = sddpc.controller.window_disturbance_stats(
        scenario.noise, model.n_w, scenario.sm.L
    )
    q = sddpc.controller.make_query(state, w_bar, Sigma_w)
    r = sddpc.controller.reference_window(scenario.reference, 0, ctrl.Lp)
    return ctrl, q, r
