import numpy
import pytest

import sddpc
from helpers import offline_data, scalar_model


def test_simulate_scalar():
    model = scalar_model()
    data = sddpc.lti.simulate(model, [0.0], [1.0, 0.0], None, None)
    assert numpy.all(data.y0[:, 0] == [0.0, 1.0])
    assert numpy.all(data.x[:, 0] == [0.0, 1.0, 0.5])
    assert numpy.all(data.v == 0.0)


def test_simulate_equilibrium():
    model = sddpc.lti.fourth_order_benchmark()
    N = 20
    data = sddpc.lti.simulate(
        model, numpy.zeros(4), numpy.zeros((N, 1)), numpy.zeros((N, 1)), None
    )
    assert numpy.all(data.y0 == 0.0)
    assert data.N == N


def test_simulate_impulse(tol=1.0e-12):
    model = sddpc.lti.fourth_order_benchmark()
    N = 30
    u = numpy.zeros((N, 1))
    u[0] = 1.0
    data = sddpc.lti.simulate(model, numpy.zeros(4), u, None, None)

    # Markov parameters C A^(k-1) B
    expected = [0.0]
    Ak = numpy.eye(4)
    for _ in range(N - 1):
        expected.append((model.C @ Ak @ model.B)[0, 0])
        Ak = Ak @ model.A
    assert numpy.all(numpy.abs(data.y0[:, 0] - expected) < tol)


def test_benchmark_marginally_stable():
    model = sddpc.lti.fourth_order_benchmark()
    x = numpy.array([1.0, 1.0, 0.0, 0.0])
    assert numpy.allclose(model.A @ x, x)
    assert abs(model.spectral_radius - 1.0) < 1.0e-9
    assert not model.stable
    assert (model.n_x, model.n_u, model.n_y, model.n_w) == (4, 1, 1, 1)


def test_unstable_model_rejected():
    with pytest.raises(sddpc.RejectedInputError):
        scalar_model(a=1.1)


def test_simulate_dimension_mismatch():
    model = scalar_model()
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.lti.simulate(model, [0.0, 0.0], [1.0], None, None)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.lti.simulate(model, [0.0], [1.0, 2.0], None, [0.0])


def test_draw_noise_zero_variance():
    spec = sddpc.lti.NoiseSpec(0.0)
    assert numpy.all(sddpc.lti.draw_noise(spec, 100, 2) == 0.0)


def test_draw_noise_variance():
    spec = sddpc.lti.NoiseSpec(0.01, seed=3)
    v = sddpc.lti.draw_noise(spec, 10 ** 6, 1)
    assert v.shape == (10 ** 6, 1)
    assert abs(numpy.var(v) - 0.01) < 1.0e-4


@pytest.mark.parametrize("distribution", ["gaussian", "uniform-scaled"])
def test_draw_noise_deterministic(distribution):
    spec = sddpc.lti.NoiseSpec(0.5, distribution=distribution, seed=11)
    a = sddpc.lti.draw_noise(spec, 50, 3)
    b = sddpc.lti.draw_noise(spec, 50, 3)
    assert numpy.all(a == b)
    if distribution == "uniform-scaled":
        assert numpy.all(numpy.abs(a) <= numpy.sqrt(3.0 * 0.5))


def test_draw_noise_errors():
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.lti.NoiseSpec(-1.0)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.lti.draw_noise(sddpc.lti.NoiseSpec(1.0), 0, 1)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.lti.NoiseSpec(1.0, Sigma_w=[[1.0, 2.0], [2.0, 1.0]])


def test_draw_disturbance_moments():
    spec = sddpc.lti.NoiseSpec(0.0, Sigma_w=[[0.04]], w_bar=[1.0])
    stream = sddpc.helpers.make_stream(5, 4)
    w = sddpc.lti.draw_disturbance(spec, 10 ** 5, 1, stream)
    assert abs(numpy.mean(w) - 1.0) < 5.0e-3
    assert abs(numpy.var(w) - 0.04) < 2.0e-3


def test_true_gamma_scalar():
    model = scalar_model()
    assert numpy.allclose(sddpc.lti.true_gamma(model, 1, 1), [[0.5]])
    assert numpy.allclose(sddpc.lti.true_gamma(model, 1, 2), [[0.5], [0.25]])


def test_true_gamma_sympy(tol=1.0e-12):
    sympy = pytest.importorskip("sympy")
    A = sympy.Matrix([[sympy.Rational(1, 2), 1], [0, sympy.Rational(1, 3)]])
    C = sympy.Matrix([[1, 0]])
    O_p = sympy.Matrix.vstack(C, C * A)
    O_f = sympy.Matrix.vstack(C * A ** 2, C * A ** 3, C * A ** 4)
    exact = O_f * O_p.inv()

    model = sddpc.lti.StateSpaceModel(
        numpy.array(A, dtype=float), [[0.0], [1.0]], numpy.array(C, dtype=float)
    )
    gamma = sddpc.lti.true_gamma(model, 2, 3)
    assert numpy.all(numpy.abs(gamma - numpy.array(exact, dtype=float)) < tol)


def test_true_gamma_benchmark(tol=1.0e-8):
    model = sddpc.lti.fourth_order_benchmark()
    gamma = sddpc.lti.true_gamma(model, 4, 10)
    assert gamma.shape == (10, 4)
    O_p = sddpc.lti.observability_stack(model, 0, 4)
    O_f = sddpc.lti.observability_stack(model, 4, 14)
    # Gamma O_p = O_f for an observable pair
    lstsq = numpy.linalg.lstsq(O_p.T, O_f.T, rcond=None)[0].T
    assert numpy.all(numpy.abs(gamma - lstsq) < tol * numpy.max(numpy.abs(lstsq)))


def test_true_gamma_unobservable():
    A = numpy.diag([0.5, 0.3])
    model = sddpc.lti.StateSpaceModel(A, [[1.0], [1.0]], [[1.0, 0.0]])
    with pytest.raises(sddpc.SingularOracleError):
        sddpc.lti.true_gamma(model, 3, 2)


def test_trajectory_csv(tmp_path):
    model = sddpc.lti.fourth_order_benchmark()
    data = offline_data(model, 40, sigma2=0.01)
    filename = tmp_path / "traj.csv"
    sddpc.lti.write_trajectory_csv(filename, data)
    back = sddpc.lti.read_trajectory_csv(filename)
    for name in ("u", "w", "y0", "y"):
        assert numpy.array_equal(getattr(back, name), getattr(data, name))


def test_trajectory_window():
    model = scalar_model()
    data = offline_data(model, 10)
    win = data.window(3, 4)
    assert win.N == 4
    assert numpy.array_equal(win.u, data.u[3:7])
    assert numpy.array_equal(win.x, data.x[3:8])
