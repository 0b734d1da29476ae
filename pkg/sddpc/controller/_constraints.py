import numpy
import scipy.linalg

from .._exceptions import RejectedInputError


def _bound_sequence(bound, dim, name):
    """Scalar, per-channel or time-varying bound as an array of shape (T, dim)."""
    if bound is None:
        return None
    b = numpy.asarray(bound, dtype=float)
    if b.ndim == 0:
        return numpy.full((1, dim), float(b))
    if b.ndim == 1:
        # one value per time step for a single channel, else one per channel
        b = b.reshape(-1, 1) if dim == 1 else b.reshape(1, dim)
    if b.ndim != 2 or b.shape[1] != dim or b.shape[0] == 0:
        raise RejectedInputError(f"{name} has shape {b.shape}, expected (T, {dim})")
    return b


class _TimeVaryingPolytope:
    """Per-time polytopes {v : H_t v <= q_t}; beyond the stored horizon the last
    polytope is held.
    """

    def __init__(self, H, q, dim):
        H = numpy.asarray(H, dtype=float)
        q = numpy.asarray(q, dtype=float)
        if H.ndim == 2:
            H = H[None]
        if q.ndim == 1:
            q = q[None]
        if H.ndim != 3 or H.shape[2] != dim:
            raise RejectedInputError(
                f"H must have shape (T, n_c, {dim}), got {H.shape}"
            )
        if q.shape != H.shape[:2]:
            raise RejectedInputError(f"q must have shape {H.shape[:2]}, got {q.shape}")
        self.H = H
        self.q = q
        self.dim = dim

    @property
    def n_c(self):
        return self.H.shape[1]

    @property
    def unbounded(self):
        return self.n_c == 0

    def at(self, t):
        k = min(max(t, 0), self.H.shape[0] - 1)
        return self.H[k], self.q[k]

    def window(self, t, length):
        """Block-diagonal H_bar and stacked q_bar for times t, ..., t + length - 1."""
        blocks = [self.at(t + k) for k in range(length)]
        if self.n_c == 0:
            H_bar = numpy.zeros((0, self.dim * length))
        else:
            H_bar = scipy.linalg.block_diag(*[H for H, _ in blocks])
        q_bar = numpy.concatenate([q for _, q in blocks])
        return H_bar, q_bar

    def violation(self, t, v):
        H, q = self.at(t)
        return float(numpy.sum(numpy.maximum(H @ v - q, 0.0)))

    @classmethod
    def from_bounds(cls, lower, upper, dim):
        lo = _bound_sequence(lower, dim, "lower")
        up = _bound_sequence(upper, dim, "upper")
        T = max(1 if lo is None else lo.shape[0], 1 if up is None else up.shape[0])
        H_list = []
        q_list = []
        eye = numpy.eye(dim)
        for t in range(T):
            rows = []
            rhs = []
            u_t = None if up is None else up[min(t, up.shape[0] - 1)]
            l_t = None if lo is None else lo[min(t, lo.shape[0] - 1)]
            if u_t is not None and l_t is not None and numpy.any(l_t >= u_t):
                raise RejectedInputError(f"empty interior at time {t}")
            if u_t is not None:
                finite = numpy.isfinite(u_t)
                rows.append(eye[finite])
                rhs.append(u_t[finite])
            if l_t is not None:
                finite = numpy.isfinite(l_t)
                rows.append(-eye[finite])
                rhs.append(-l_t[finite])
            H_list.append(numpy.vstack(rows) if rows else numpy.zeros((0, dim)))
            q_list.append(numpy.concatenate(rhs) if rhs else numpy.zeros(0))
        n_c = {H.shape[0] for H in H_list}
        if len(n_c) != 1:
            raise RejectedInputError("bounds must be finite on the same channels")
        q = numpy.array(q_list, dtype=float).reshape(T, n_c.pop())
        return cls(numpy.array(H_list, dtype=float), q, dim)

    @classmethod
    def unconstrained(cls, dim):
        return cls(numpy.zeros((1, 0, dim)), numpy.zeros((1, 0)), dim)


class OutputConstraints(_TimeVaryingPolytope):
    pass


class InputConstraints(_TimeVaryingPolytope):
    pass
