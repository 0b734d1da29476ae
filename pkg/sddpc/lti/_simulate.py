import numpy

from .._exceptions import RejectedInputError
from ..helpers.linalg import as_sequence


class TrajectoryData:
    """Input, disturbance, noise-free output and measured output sequences of equal
    length N, time along the first axis. `x` holds the N + 1 visited states when the
    trajectory comes from `simulate`.
    """

    def __init__(self, u, w, y0, y, x=None):
        u = numpy.asarray(u, dtype=float)
        N = u.shape[0]
        if N == 0:
            raise RejectedInputError("trajectory must not be empty")
        self.u = as_sequence(u, u.shape[1] if u.ndim == 2 else 1, "u")
        self.w = as_sequence(w, _width(w), "w", N)
        self.y0 = as_sequence(y0, _width(y0), "y0", N)
        self.y = as_sequence(y, self.y0.shape[1], "y", N)
        self.x = None if x is None else numpy.asarray(x, dtype=float)

    @property
    def N(self):
        return self.u.shape[0]

    @property
    def n_u(self):
        return self.u.shape[1]

    @property
    def n_w(self):
        return self.w.shape[1]

    @property
    def n_y(self):
        return self.y.shape[1]

    @property
    def v(self):
        return self.y - self.y0

    def window(self, start, length):
        """Sub-trajectory of `length` samples starting at `start`."""
        stop = start + length
        assert 0 <= start and stop <= self.N
        x = None if self.x is None else self.x[start : stop + 1]
        return TrajectoryData(
            self.u[start:stop],
            self.w[start:stop],
            self.y0[start:stop],
            self.y[start:stop],
            x,
        )

    def __len__(self):
        return self.N


def _width(a):
    a = numpy.asarray(a, dtype=float)
    if a.ndim == 2:
        return a.shape[1]
    return 1 if a.size else 0


def simulate(model, x0, u, w, v):
    x = model.check_state(x0)
    u = as_sequence(u, model.n_u, "u")
    N = u.shape[0]
    if N == 0:
        raise RejectedInputError("u must contain at least one sample")
    if w is None or (model.n_w == 0 and numpy.asarray(w).size == 0):
        w = numpy.zeros((N, model.n_w))
    if v is None:
        v = numpy.zeros((N, model.n_y))
    w = as_sequence(w, model.n_w, "w", N)
    v = as_sequence(v, model.n_y, "v", N)

    xs = numpy.empty((N + 1, model.n_x))
    y0 = numpy.empty((N, model.n_y))
    xs[0] = x
    for t in range(N):
        y0[t] = model.output(xs[t], u[t])
        xs[t + 1] = model.step(xs[t], u[t], w[t])
    return TrajectoryData(u, w, y0, y0 + v, xs)
