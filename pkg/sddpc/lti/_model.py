import logging

import numpy

from .._exceptions import RejectedInputError
from ..helpers.linalg import as_vector

logger = logging.getLogger(__name__)

# Tolerance on the spectral radius; models with rho(A) = 1 within it are accepted as
# marginally stable.
STABILITY_TOL = 1.0e-9


class StateSpaceModel:
    """Discrete-time LTI plant

        x_{t+1} = A x_t + B u_t + E w_t,
        y0_t    = C x_t + D u_t.

    Used for data generation and as an oracle only; the controller never sees it.
    """

    def __init__(self, A, B, C, D=None, E=None, name=None):
        A = numpy.atleast_2d(numpy.asarray(A, dtype=float))
        n_x = A.shape[0]
        if A.shape != (n_x, n_x):
            raise RejectedInputError(f"A must be square, got shape {A.shape}")
        B = numpy.asarray(B, dtype=float).reshape(n_x, -1)
        C = numpy.asarray(C, dtype=float).reshape(-1, n_x)
        n_u = B.shape[1]
        n_y = C.shape[0]
        D = numpy.zeros((n_y, n_u)) if D is None else numpy.asarray(D, dtype=float)
        D = D.reshape(n_y, n_u)
        E = numpy.zeros((n_x, 0)) if E is None else numpy.asarray(E, dtype=float)
        E = E.reshape(n_x, -1)

        self.A = A
        self.B = B
        self.C = C
        self.D = D
        self.E = E
        self.name = name

        rho = self.spectral_radius
        if rho > 1.0 + STABILITY_TOL:
            raise RejectedInputError(f"A is unstable (spectral radius {rho:.6g})")
        if rho >= 1.0 - STABILITY_TOL:
            logger.warning(
                "model %s is marginally stable (spectral radius %.12g)", name, rho
            )

    @property
    def n_x(self):
        return self.A.shape[0]

    @property
    def n_u(self):
        return self.B.shape[1]

    @property
    def n_y(self):
        return self.C.shape[0]

    @property
    def n_w(self):
        return self.E.shape[1]

    @property
    def spectral_radius(self):
        return float(numpy.max(numpy.abs(numpy.linalg.eigvals(self.A))))

    @property
    def stable(self):
        return self.spectral_radius < 1.0 - STABILITY_TOL

    def output(self, x, u):
        return self.C @ x + self.D @ u

    def step(self, x, u, w):
        return self.A @ x + self.B @ u + self.E @ w

    def check_state(self, x0):
        return as_vector(x0, self.n_x, "x0")

    def to_dict(self):
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "D": self.D.tolist(),
            "E": self.E.tolist(),
        }

    def __repr__(self):
        return (
            f"StateSpaceModel(name={self.name!r}, n_x={self.n_x}, n_u={self.n_u}, "
            f"n_y={self.n_y}, n_w={self.n_w})"
        )


def fourth_order_benchmark():
    """The fourth-order single-input single-output benchmark with one disturbance
    channel. Its A has an exact eigenvalue at 1 (rigid-body mode along (1, 1, 0, 0)).
    """
    A = [
        [0.36, 0.64, 0.07, 0.02],
        [0.42, 0.58, 0.02, 0.07],
        [-9.34, 9.34, 0.23, 0.58],
        [5.88, -5.88, 0.39, -0.39],
    ]
    B = [[0.29], [0.03], [4.90], [1.07]]
    E = [[0.03], [0.20], [1.07], [3.48]]
    C = [[1.0, 0.0, 0.0, 0.0]]
    D = numpy.zeros((1, 1))
    return StateSpaceModel(A, B, C, D, E, name="fourth-order-benchmark")
