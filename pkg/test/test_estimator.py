import numpy
import pytest

import sddpc
from sddpc.estimator import FilterState


def _scalar_state(y_hist, P, n_y=1):
    y_hist = numpy.asarray(y_hist, dtype=float)
    L0 = y_hist.shape[0] // n_y
    return FilterState(numpy.zeros(L0), y_hist, numpy.asarray(P, dtype=float), 1, n_y)


def test_init():
    state = sddpc.estimator.init([1.0, 2.0, 3.0, 4.0], numpy.zeros(4))
    assert numpy.array_equal(state.P, numpy.eye(4))
    assert numpy.all(state.y_hist == 0.0)
    assert numpy.array_equal(state.u_hist, [1.0, 2.0, 3.0, 4.0])
    assert state.L0 == 4

    state = sddpc.estimator.init(numpy.array([[1.0], [2.0]]), [[5.0, 6.0], [7.0, 8.0]])
    assert (state.n_u, state.n_y, state.L0) == (1, 2, 2)
    assert numpy.array_equal(state.y_hist, [5.0, 6.0, 7.0, 8.0])

    u_ini, y_ini, P_t = sddpc.estimator.extract_initial_condition(state)
    assert numpy.array_equal(u_ini, [1.0, 2.0])
    assert numpy.array_equal(y_ini, [5.0, 6.0, 7.0, 8.0])
    assert numpy.array_equal(P_t, numpy.eye(4))


def test_init_errors():
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.estimator.init([1.0], [1.0, 2.0])
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.estimator.init([], [])


def test_predict_step_shift():
    state = _scalar_state([1.0], [[0.3]])
    pred = sddpc.estimator.predict_step(state, [0.5], [2.0], [[0.7]])
    assert numpy.array_equal(pred.P, [[0.7]])
    assert numpy.array_equal(pred.y_hist, [2.0])
    assert numpy.array_equal(pred.u_hist, [0.5])
    assert pred.t == 1

    state = _scalar_state([1.0, 2.0], numpy.diag([0.3, 0.4]))
    pred = sddpc.estimator.predict_step(state, [0.0], [3.0], [[0.7]])
    assert numpy.array_equal(pred.P, numpy.diag([0.4, 0.7]))
    assert numpy.array_equal(pred.y_hist, [2.0, 3.0])


def test_predict_step_perfect():
    state = _scalar_state([1.0, 2.0], numpy.eye(2))
    pred = sddpc.estimator.predict_step(state, [0.0], [3.0], [[0.0]])
    assert pred.newest_variance()[0] == 0.0


def test_predict_step_cross_gain(tol=1.0e-14):
    P = numpy.array([[0.2, 0.05], [0.05, 0.1]])
    c = numpy.array([[0.3, 0.5]])
    state = _scalar_state([1.0, 2.0], P)
    pred = sddpc.estimator.predict_step(state, [0.0], [3.0], [[0.5]], cross_gain=c)
    assert abs(pred.P[0, 0] - 0.1) < tol
    assert abs(pred.P[0, 1] - (0.05 * 0.3 + 0.1 * 0.5)) < tol
    assert abs(pred.P[1, 1] - 0.5) < tol


def test_update_step_scalar(tol=1.0e-14):
    state = _scalar_state([1.0], [[0.01]])
    post = sddpc.estimator.update_step(state, [2.0], 0.01)
    assert abs(post.y_hist[0] - 1.5) < tol
    assert abs(post.P[0, 0] - 0.005) < tol


def test_update_step_uninformative(tol=1.0e-10):
    state = _scalar_state([1.0, 2.0], numpy.diag([0.3, 0.4]))
    post = sddpc.estimator.update_step(state, [100.0], 1.0e12)
    assert abs(post.y_hist[1] - 2.0) < tol
    assert abs(post.P[1, 1] - 0.4) < tol


def test_update_step_exact_measurement():
    state = _scalar_state([1.0, 2.0], numpy.eye(2))
    pred = sddpc.estimator.predict_step(state, [0.0], [3.0], [[0.0]])
    post = sddpc.estimator.update_step(pred, [3.0], 0.0)
    assert post.newest_variance()[0] == 0.0
    assert post.y_hist[1] == 3.0

    pred = sddpc.estimator.predict_step(state, [0.0], [3.0], [[0.2]])
    post = sddpc.estimator.update_step(pred, [3.5], 0.0)
    assert abs(post.y_hist[1] - 3.5) < 1.0e-14
    assert abs(post.newest_variance()[0]) < 1.0e-14


def test_update_step_literal_keeps_other_blocks():
    P = numpy.array([[0.2, 0.05], [0.05, 0.1]])
    state = _scalar_state([1.0, 2.0], P)
    post = sddpc.estimator.update_step(state, [2.5], 0.1, "paper-literal")
    assert post.y_hist[0] == 1.0
    assert post.P[0, 0] == 0.2
    assert post.P[0, 1] == 0.05


def test_full_kf_conditioning(tol=1.0e-10):
    P = numpy.array([[0.2, 0.05], [0.05, 0.1]])
    m = numpy.array([1.0, 2.0])
    y, sigma2 = 2.5, 0.1
    state = _scalar_state(m, P)
    post = sddpc.estimator.update_step(state, [y], sigma2, "full-kf")

    # joint Gaussian of (x, y) with y = x_1 + v
    S = P[1, 1] + sigma2
    mean = m + P[:, 1] / S * (y - m[1])
    cov = P - numpy.outer(P[:, 1], P[1, :]) / S
    assert numpy.all(numpy.abs(post.y_hist - mean) < tol)
    assert numpy.all(numpy.abs(post.P - cov) < tol)


def test_scalar_riccati_recursion(tol=1.0e-10):
    sympy = pytest.importorskip("sympy")
    s, sigma2 = sympy.Rational(3, 100), sympy.Rational(1, 100)

    # L0 = 1: the prior is Sigma_0 at every step
    p = sympy.Integer(1)
    exact = []
    for _ in range(10):
        p = s
        p = p - p ** 2 / (p + sigma2)
        exact.append(p)

    state = sddpc.estimator.init([0.0], [0.0])
    for k in range(10):
        pred = sddpc.estimator.predict_step(state, [0.0], [0.0], [[float(s)]])
        state = sddpc.estimator.update_step(pred, [0.0], float(sigma2))
        _, _, P_t = sddpc.estimator.extract_initial_condition(state)
        assert abs(P_t[0, 0] - float(exact[k])) < tol


@pytest.mark.parametrize("mode", sddpc.estimator.MODES)
def test_posterior_variance_bound(mode):
    rng = numpy.random.default_rng(0)
    state = sddpc.estimator.init(numpy.zeros(3), numpy.zeros(3))
    for _ in range(20):
        pred = sddpc.estimator.predict_step(
            state, rng.standard_normal(1), rng.standard_normal(1), [[0.05]]
        )
        state = sddpc.estimator.update_step(pred, rng.standard_normal(1), 0.01, mode)
        assert state.newest_variance()[0] <= 0.01 + 1.0e-12
        assert numpy.all(numpy.linalg.eigvalsh(state.P) >= -1.0e-12)


def test_update_step_errors():
    state = _scalar_state([1.0], [[0.01]])
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.estimator.update_step(state, [1.0], 0.01, "ukf")
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.estimator.update_step(state, [1.0], -1.0)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.estimator.predict_step(state, [0.0], [1.0], [[-1.0]])


@pytest.mark.parametrize("mode", sddpc.estimator.MODES)
def test_update_step_broken_covariance(mode):
    indefinite = _scalar_state([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(sddpc.EstimatorError):
        sddpc.estimator.update_step(indefinite, [1.0], 0.01, mode)


def test_update_step_covariance_invariants():
    asymmetric = _scalar_state([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(sddpc.EstimatorError):
        sddpc.estimator.update_step(asymmetric, [1.0], 0.01)

    # a negative prior variance leaves more than the measurement variance
    negative = _scalar_state([0.0], [[-2.0]])
    with pytest.raises(sddpc.EstimatorError) as info:
        sddpc.estimator.update_step(negative, [1.0], 0.01)
    assert "exceeds measurement variance" in str(info.value)
    assert isinstance(info.value, sddpc.DDPCError)


def test_trace_csv(tmp_path):
    state = sddpc.estimator.init([0.0, 0.0], [0.0, 0.0])
    records = []
    for t in range(3):
        prior = sddpc.estimator.predict_step(state, [0.0], [1.0], [[0.02]])
        state = sddpc.estimator.update_step(prior, [1.2], 0.01)
        records.append(sddpc.estimator.trace_record(t, prior, state, [1.2], [1.1]))
    assert records[0].prior[0] == 1.0
    assert records[0].measured[0] == 1.2

    filename = tmp_path / "trace.csv"
    sddpc.estimator.write_trace_csv(filename, records, 1)
    lines = filename.read_text().splitlines()
    assert lines[0].split(",") == sddpc.estimator.trace_header(1)
    assert len(lines) == 4
