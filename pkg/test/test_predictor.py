import numpy
import pytest

import sddpc
from helpers import benchmark_matrix, random_window, relative_error
from sddpc.helpers.random import make_stream

DESIGNS = ["subspace", "wasserstein", "smm", "mmse"]


def _params(kind, sm, sigma2):
    g2 = 1.0 if kind == "smm" else None
    design = sddpc.predictor.resolve_design(kind, sm, sigma2, g2)
    return sddpc.predictor.build_predictor(sm, design, sigma2)


def test_design_lambdas(tol=1.0e-14):
    _, sm = benchmark_matrix(N=200, sigma2=0.01)
    d = sddpc.predictor.resolve_design("wasserstein", sm, 0.01)
    assert abs(d.lam - 0.04) < tol
    assert numpy.array_equal(d.S, numpy.eye(4))
    d = sddpc.predictor.resolve_design("smm", sm, 0.01, g_pinv_norm2=1.0)
    assert abs(d.lam - 0.24) < tol
    d = sddpc.predictor.resolve_design("subspace", sm, 0.01)
    assert d.lam == sddpc.predictor.eps_reg(sm, numpy.eye(4))

    Gb = sddpc.predictor.gamma_bar(sm)
    d = sddpc.predictor.resolve_design("mmse", sm, 0.01)
    assert Gb.shape == (10, 4)
    assert numpy.allclose(d.S, Gb.T @ Gb)
    assert abs(d.lam - (0.1 + numpy.trace(Gb.T @ Gb) * 0.01)) < 1.0e-12 * d.lam


def test_design_noise_free():
    _, sm = benchmark_matrix(N=200)
    d = sddpc.predictor.resolve_design("mmse", sm, 0.0)
    assert d.lam == 0.0
    assert d.effective_lambda(sm) > 0.0


def test_design_errors():
    _, sm = benchmark_matrix(N=100)
    with pytest.raises(sddpc.MissingDependencyError):
        sddpc.predictor.resolve_design("smm", sm, 0.01)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.predictor.resolve_design("ridge", sm, 0.01)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.predictor.resolve_design("mmse", sm, -0.01)


@pytest.mark.parametrize("kind", DESIGNS)
def test_noise_free_exact(kind, tol=1.0e-6):
    model, sm = benchmark_matrix()
    params = _params(kind, sm, 0.0)
    for seed in range(100):
        q, u_hat, y0 = random_window(model, sm, seed)
        res = sddpc.predictor.predict(params, q, u_hat)
        assert relative_error(res.y_bar, y0) < tol


def test_gamma_hat_noise_free(tol=1.0e-6):
    model, sm = benchmark_matrix()
    params = _params("subspace", sm, 0.0)
    gamma = sddpc.lti.true_gamma(model, 4, 10)
    assert numpy.linalg.norm(params.gamma_hat - gamma) < tol


def test_gamma_hat_consistency():
    model = sddpc.lti.fourth_order_benchmark()
    gamma = sddpc.lti.true_gamma(model, 4, 10)

    def median_error(M):
        errors = []
        for seed in range(20):
            _, sm = benchmark_matrix(N=M + 13, sigma2=0.01, seed=seed)
            params = _params("mmse", sm, 0.01)
            errors.append(numpy.linalg.norm(params.gamma_hat - gamma))
        return numpy.median(errors)

    assert median_error(2000) < median_error(200)


@pytest.mark.parametrize("kind", DESIGNS)
def test_constraint_identity(kind, tol=1.0e-8):
    _, sm = benchmark_matrix(sigma2=0.01)
    params = _params(kind, sm, 0.01)
    Psi = sm.Psi()
    stream = make_stream(1, 5)
    for _ in range(100):
        c = stream.standard_normal(Psi.shape[0])
        assert relative_error(Psi @ (params.R_c @ c), c) < tol


def test_predict_matches_pinv(tol=1.0e-8):
    model, sm = benchmark_matrix()
    params = _params("subspace", sm, 0.0)
    for seed in range(100):
        q, u_hat, _ = random_window(model, sm, seed)
        res = sddpc.predictor.predict(params, q, u_hat)
        _, y_hat = sddpc.signal_matrix.pinv_predict(
            sm, q.u_ini, u_hat, q.w_bar, q.y_ini_bar
        )
        assert relative_error(res.y_bar, y_hat) < tol


def test_zero_covariance():
    model, sm = benchmark_matrix()
    params = _params("mmse", sm, 0.0)
    q, u_hat, _ = random_window(model, sm, 0)
    res = sddpc.predictor.predict(params, q, u_hat)
    assert numpy.all(res.Sigma == 0.0)


def test_covariance_formula(tol=1.0e-12):
    model, sm = benchmark_matrix(N=300, sigma2=0.01)
    params = _params("mmse", sm, 0.01)
    q, u_hat, _ = random_window(model, sm, 3, sigma2=0.01)
    q = q.replace(Sigma_w=0.001 * numpy.eye(14), w_bar=numpy.zeros(14))
    res = sddpc.predictor.predict(params, q, u_hat)

    G = params.gamma_hat
    Gw = (sm.Yf - G @ sm.Yp) @ params.R3
    T = 0.01 * (G @ G.T + numpy.eye(10))
    expected = G @ q.P_t @ G.T + Gw @ q.Sigma_w @ Gw.T + (res.g @ res.g) * T
    assert relative_error(res.Sigma, expected) < tol
    assert numpy.all(numpy.linalg.eigvalsh(res.Sigma) >= 0.0)


@pytest.mark.parametrize("kind", DESIGNS)
def test_covariance_monotone_in_prior(kind, tol=1.0e-10):
    model, sm = benchmark_matrix(N=300, sigma2=0.01)
    params = _params(kind, sm, 0.01)
    stream = make_stream(7)
    for seed in range(5):
        q, u_hat, _ = random_window(model, sm, seed, sigma2=0.01)
        q = q.replace(Sigma_w=0.001 * numpy.eye(14), w_bar=numpy.zeros(14))
        B = stream.standard_normal((4, 4))
        larger = q.replace(P_t=q.P_t + B @ B.T)
        small = sddpc.predictor.predict(params, q, u_hat)
        large = sddpc.predictor.predict(params, larger, u_hat)
        assert numpy.array_equal(small.g, large.g)
        diff = large.Sigma - small.Sigma
        scale = numpy.max(numpy.abs(large.Sigma))
        assert numpy.min(numpy.linalg.eigvalsh(diff)) >= -tol * scale
        G = params.for_query(q, u_hat).gamma_hat
        assert relative_error(diff, G @ (B @ B.T) @ G.T) < 1.0e-8


@pytest.mark.parametrize("kind", DESIGNS)
def test_affine_maps(kind, tol=1.0e-10):
    model, sm = benchmark_matrix(sigma2=0.01)
    params = _params(kind, sm, 0.01)
    q, u_hat, _ = random_window(model, sm, 4, sigma2=0.01)
    maps = sddpc.predictor.predict_affine_maps(params, q, u_hat)

    res = sddpc.predictor.predict(maps.params, q, numpy.zeros(10))
    assert relative_error(res.g, maps.g_0) < tol
    assert relative_error(res.y_bar, maps.y_0) < tol

    res = sddpc.predictor.predict(maps.params, q, u_hat)
    assert relative_error(res.g, maps.G_u @ u_hat + maps.g_0) < tol
    assert relative_error(res.y_bar, maps.Y_u @ u_hat + maps.y_0) < tol

    other = sddpc.predictor.predict_affine_maps(maps.params, q, 2.0 * u_hat)
    assert numpy.array_equal(other.G_u, maps.G_u)
    assert numpy.array_equal(other.Y_u, maps.Y_u)


def test_smm_rebinds_per_query(tol=1.0e-10):
    model, sm = benchmark_matrix(sigma2=0.01)
    params = _params("smm", sm, 0.01)
    assert not params.bound
    q, u_hat, _ = random_window(model, sm, 5, sigma2=0.01)
    res = sddpc.predictor.predict(params, q, u_hat)

    g_pinv, _ = sddpc.signal_matrix.pinv_predict(
        sm, q.u_ini, u_hat, q.w_bar, q.y_ini_bar
    )
    design = sddpc.predictor.resolve_design("smm", sm, 0.01, g_pinv @ g_pinv)
    direct = sddpc.predictor.build_predictor(
        sm, design, 0.01, gamma_hat=params.gamma_hat
    )
    expected = sddpc.predictor.predict(direct, q, u_hat)
    assert relative_error(res.g, expected.g) < tol
    assert relative_error(res.y_bar, expected.y_bar) < tol


@pytest.mark.parametrize("kind", ["wasserstein", "mmse"])
def test_reference_solve(kind, tol=1.0e-6):
    model, sm = benchmark_matrix(sigma2=0.01)
    params = _params(kind, sm, 0.01)
    for seed in range(20):
        q, u_hat, _ = random_window(model, sm, seed, sigma2=0.01)
        g = sddpc.predictor.qp_reference_solve(sm, params.design, q, u_hat)
        res = sddpc.predictor.predict(params, q, u_hat)
        assert relative_error(res.g, g) < tol


def test_reference_solve_homogeneous():
    _, sm = benchmark_matrix(N=100, sigma2=0.01)
    design = sddpc.predictor.resolve_design("wasserstein", sm, 0.01)
    q = sddpc.signal_matrix.zero_query(sm)
    g = sddpc.predictor.qp_reference_solve(sm, design, q, numpy.zeros(10))
    assert numpy.all(g == 0.0)


def test_large_lambda_least_norm(tol=1.0e-4):
    model, sm = benchmark_matrix(N=200, sigma2=0.01)
    design = sddpc.predictor.RegularizerDesign("wasserstein", 1.0e12, numpy.eye(4))
    params = sddpc.predictor.build_predictor(sm, design, 0.01)
    q, u_hat, _ = random_window(model, sm, 0, sigma2=0.01)
    res = sddpc.predictor.predict(params, q, u_hat)
    c = numpy.concatenate([q.u_ini, u_hat, q.w_bar])
    least_norm = numpy.linalg.pinv(sm.Psi()) @ c
    assert relative_error(res.g, least_norm) < tol


def test_ill_conditioned():
    _, sm = benchmark_matrix(N=14)
    design = sddpc.predictor.resolve_design("subspace", sm, 0.0)
    with pytest.raises(sddpc.IllConditionedError) as info:
        sddpc.predictor.build_predictor(sm, design, 0.0)
    assert "Yp_R4" in info.value.condition_numbers


@pytest.mark.parametrize("kind", DESIGNS)
def test_cache(kind, tmp_path):
    _, sm = benchmark_matrix(N=200, sigma2=0.01)
    params = _params(kind, sm, 0.01)
    filename = tmp_path / "params.bin"
    sddpc.predictor.write_predictor(filename, params)
    back = sddpc.predictor.read_predictor(filename, sm)
    for name in ("R1", "R2", "R3", "R4", "gamma_hat"):
        assert numpy.array_equal(getattr(back, name), getattr(params, name))
    assert back.design.kind == kind
    assert back.lam == params.lam

    _, other = benchmark_matrix(N=200, sigma2=0.01, seed=1)
    with pytest.raises(sddpc.RejectedInputError):
        sddpc.predictor.read_predictor(filename, other)
