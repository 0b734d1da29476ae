import numpy

from .._exceptions import EstimatorError, RejectedInputError
from ..helpers.linalg import (
    as_vector,
    check_psd,
    floor_psd,
    pinv,
    shift_matrix,
    symmetrize,
)

MODES = ("paper-literal", "full-kf")

PSD_CHECK_TOL = 1.0e-10


class FilterState:
    """Non-minimal state of the data-driven model: the exact input history `u_hist`
    and the filtered output history `y_hist` (oldest block first), with covariance
    `P` of the output history.
    """

    def __init__(self, u_hist, y_hist, P, n_u, n_y, t=0):
        self.u_hist = u_hist
        self.y_hist = y_hist
        self.P = P
        self.n_u = n_u
        self.n_y = n_y
        self.t = t

    @property
    def L0(self):
        return self.y_hist.shape[0] // self.n_y

    @property
    def newest(self):
        """Slice of the newest output block."""
        n = self.y_hist.shape[0]
        return slice(n - self.n_y, n)

    def newest_variance(self):
        s = self.newest
        return numpy.diag(self.P[s, s]).copy()

    def __repr__(self):
        return f"FilterState(t={self.t}, L0={self.L0}, n_u={self.n_u}, n_y={self.n_y})"


def _checked_covariance(P):
    """`P` floored to the PSD cone. Asymmetry or negative eigenvalues beyond
    rounding raise EstimatorError.
    """
    if P.size == 0:
        return P
    scale = max(1.0, numpy.max(numpy.abs(P)))
    asymmetry = numpy.max(numpy.abs(P - P.T))
    if asymmetry > PSD_CHECK_TOL * scale:
        raise EstimatorError(f"filter covariance is not symmetric ({asymmetry:.3e})")
    min_eig = numpy.linalg.eigvalsh(symmetrize(P))[0]
    if min_eig < -PSD_CHECK_TOL * scale:
        raise EstimatorError(
            f"filter covariance is not PSD (min eigenvalue {min_eig:.3e})"
        )
    return floor_psd(P)


def _history(a, n, name):
    a = numpy.asarray(a, dtype=float)
    if a.ndim == 2:
        if n is not None and a.shape[1] != n:
            raise RejectedInputError(f"{name} must have {n} columns, got {a.shape}")
        return a.reshape(-1), a.shape[1]
    return a.reshape(-1), 1 if n is None else n


def init(u_init, y_init_measured, n_u=None, n_y=None):
    """Start from raw measurements with P = I. Histories are given oldest first,
    either flat or with one row per sample.
    """
    u_hist, n_u = _history(u_init, n_u, "u_init")
    y_hist, n_y = _history(y_init_measured, n_y, "y_init_measured")
    if n_y == 0 or y_hist.shape[0] == 0 or y_hist.shape[0] % n_y:
        raise RejectedInputError(f"y_init_measured of length {y_hist.shape[0]}")
    L0 = y_hist.shape[0] // n_y
    as_vector(u_hist, n_u * L0, "u_init")
    return FilterState(u_hist.copy(), y_hist.copy(), numpy.eye(n_y * L0), n_u, n_y)


def predict_step(state, u_applied, y_bar_0, Sigma_0, cross_gain=None):
    """Shift both histories by one block and append the applied input and the
    one-step prediction. The new output block enters with covariance `Sigma_0`.

    With `cross_gain` (the first block row of the autonomous map), the new block is
    modeled as cross_gain @ y_hist plus independent error, so that the covariance
    carries its cross terms with the retained history.
    """
    n_u, n_y, L0 = state.n_u, state.n_y, state.L0
    u_applied = as_vector(u_applied, n_u, "u_applied")
    y_bar_0 = as_vector(y_bar_0, n_y, "y_bar_0")
    Sigma_0 = check_psd(Sigma_0, "Sigma_0", shape=(n_y, n_y))

    n = n_y * L0
    shift = shift_matrix(L0, n_y)
    place = numpy.zeros((n, n_y))
    place[n - n_y :] = numpy.eye(n_y)

    if cross_gain is None:
        P = shift @ state.P @ shift.T + place @ Sigma_0 @ place.T
    else:
        cross_gain = numpy.asarray(cross_gain, dtype=float).reshape(n_y, n)
        A_y = shift + place @ cross_gain
        innovation = floor_psd(Sigma_0 - cross_gain @ state.P @ cross_gain.T)
        P = A_y @ state.P @ A_y.T + place @ innovation @ place.T

    return FilterState(
        numpy.concatenate([state.u_hist[n_u:], u_applied]),
        numpy.concatenate([state.y_hist[n_y:], y_bar_0]),
        _checked_covariance(P),
        n_u,
        n_y,
        state.t + 1,
    )


def update_step(state, y_measured, sigma2, mode="paper-literal"):
    """Correct the newest output block with a measurement of variance `sigma2`.

    paper-literal: K = Sigma_0 (Sigma_0 + sigma2 I)^-1 with Sigma_0 the newest
    diagonal block of P; only that block is touched.
    full-kf: standard Kalman update with H = [0 ... I] on the full covariance, in
    Joseph form.
    """
    if mode not in MODES:
        raise RejectedInputError(f"filter mode must be one of {MODES}, got {mode!r}")
    sigma2 = float(sigma2)
    if not sigma2 >= 0.0:
        raise RejectedInputError(f"sigma2 must be nonnegative, got {sigma2}")
    n_y = state.n_y
    y_measured = as_vector(y_measured, n_y, "y_measured")
    s = state.newest
    R = sigma2 * numpy.eye(n_y)
    y_hist = state.y_hist.copy()
    innovation = y_measured - y_hist[s]

    if mode == "paper-literal":
        Sigma_0 = state.P[s, s]
        K = Sigma_0 @ pinv(Sigma_0 + R)
        y_hist[s] += K @ innovation
        P = state.P.copy()
        P[s, s] = (numpy.eye(n_y) - K) @ Sigma_0
    else:
        n = state.P.shape[0]
        H = numpy.zeros((n_y, n))
        H[:, s] = numpy.eye(n_y)
        K = state.P @ H.T @ pinv(H @ state.P @ H.T + R)
        y_hist += K @ innovation
        I_KH = numpy.eye(n) - K @ H
        P = I_KH @ state.P @ I_KH.T + K @ R @ K.T

    P = _checked_covariance(P)
    worst = numpy.max(numpy.diag(P[s, s]))
    if worst > sigma2 + 1.0e-12:
        raise EstimatorError(
            f"filtered variance {worst:.6g} exceeds measurement variance {sigma2:.6g}"
        )
    return FilterState(state.u_hist.copy(), y_hist, P, state.n_u, n_y, state.t)


def extract_initial_condition(state):
    return state.u_hist.copy(), state.y_hist.copy(), state.P.copy()
