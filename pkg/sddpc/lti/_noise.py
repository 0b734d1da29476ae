import numpy

from .._exceptions import RejectedInputError
from ..helpers.linalg import check_psd, psd_sqrt
from ..helpers.random import OFFLINE_NOISE, make_stream

DISTRIBUTIONS = ("gaussian", "uniform-scaled")


class NoiseSpec:
    """Output-noise variance `sigma2`, online disturbance statistics `w_bar`/`Sigma_w`
    over a window of `L` samples, sampling distribution and seed.
    """

    def __init__(
        self, sigma2, Sigma_w=None, w_bar=None, distribution="gaussian", seed=0
    ):
        sigma2 = float(sigma2)
        if not sigma2 >= 0.0:
            raise RejectedInputError(f"sigma2 must be nonnegative, got {sigma2}")
        if distribution not in DISTRIBUTIONS:
            raise RejectedInputError(
                f"distribution must be one of {DISTRIBUTIONS}, got {distribution!r}"
            )
        Sigma_w = numpy.zeros((0, 0)) if Sigma_w is None else Sigma_w
        Sigma_w = numpy.atleast_2d(numpy.asarray(Sigma_w, dtype=float))
        if Sigma_w.size == 0:
            Sigma_w = numpy.zeros((0, 0))
        Sigma_w = check_psd(Sigma_w, "Sigma_w")
        if w_bar is None:
            w_bar = numpy.zeros(Sigma_w.shape[0])
        w_bar = numpy.asarray(w_bar, dtype=float).reshape(-1)
        if w_bar.shape[0] != Sigma_w.shape[0]:
            raise RejectedInputError(
                f"w_bar has length {w_bar.shape[0]}, "
                f"Sigma_w has size {Sigma_w.shape[0]}"
            )
        self.sigma2 = sigma2
        self.Sigma_w = Sigma_w
        self.w_bar = w_bar
        self.distribution = distribution
        self.seed = int(seed)

    def step_disturbance_stats(self, n_w):
        """Per-sample mean and covariance of the disturbance: the leading block of the
        window statistics.
        """
        if n_w == 0:
            return numpy.zeros(0), numpy.zeros((0, 0))
        if self.Sigma_w.shape[0] < n_w:
            raise RejectedInputError(
                f"Sigma_w of size {self.Sigma_w.shape[0]} has no {n_w}x{n_w} block"
            )
        return self.w_bar[:n_w].copy(), self.Sigma_w[:n_w, :n_w].copy()


def _standard_samples(distribution, stream, count, dim):
    if distribution == "gaussian":
        return stream.standard_normal((count, dim))
    # uniform on [-sqrt(3), sqrt(3)] has unit variance
    return stream.uniform(-numpy.sqrt(3.0), numpy.sqrt(3.0), (count, dim))


def draw_samples(distribution, stream, count, mean, cov):
    """i.i.d. samples with the given mean and covariance, shape (count, dim)."""
    cov = check_psd(cov, "covariance")
    dim = cov.shape[0]
    if count < 0:
        raise RejectedInputError(f"count must be nonnegative, got {count}")
    if dim == 0:
        return numpy.zeros((count, 0))
    std = _standard_samples(distribution, stream, count, dim)
    return numpy.asarray(mean, dtype=float).reshape(1, dim) + std @ psd_sqrt(cov)


def draw_noise(spec, count, dim, stream=None):
    """Output noise v_t with covariance sigma2 * I. Without an explicit `stream`, the
    samples come from the offline-noise stream of `spec.seed`.
    """
    if count <= 0:
        raise RejectedInputError(f"count must be positive, got {count}")
    if stream is None:
        stream = make_stream(spec.seed, OFFLINE_NOISE)
    if spec.sigma2 == 0.0:
        return numpy.zeros((count, dim))
    return draw_samples(
        spec.distribution, stream, count, numpy.zeros(dim), spec.sigma2 * numpy.eye(dim)
    )


def draw_disturbance(spec, count, n_w, stream):
    mean, cov = spec.step_disturbance_stats(n_w)
    return draw_samples(spec.distribution, stream, count, mean, cov)
