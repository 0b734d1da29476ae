import hashlib

import numpy

from .._exceptions import InsufficientDataError, RejectedInputError
from ..helpers.linalg import pinv

CONSTRUCTIONS = ("hankel", "page", "columns")


class SignalMatrix:
    """Partitioned data matrix Z = col(U, W, Yp, Yf). Every column stacks one window
    of L = L0 + Lp consecutive samples, all inputs first (oldest sample on top), then
    all disturbances, then all measured outputs; the outputs split into L0 past and
    Lp future samples.
    """

    def __init__(self, U, W, Yp, Yf, n_u, n_w, n_y, L0, Lp, construction):
        assert construction in CONSTRUCTIONS
        L = L0 + Lp
        M = U.shape[1]
        assert U.shape == (n_u * L, M)
        assert W.shape == (n_w * L, M)
        assert Yp.shape == (n_y * L0, M)
        assert Yf.shape == (n_y * Lp, M)
        self.U = U
        self.W = W
        self.Yp = Yp
        self.Yf = Yf
        self.n_u = n_u
        self.n_w = n_w
        self.n_y = n_y
        self.L0 = L0
        self.Lp = Lp
        self.construction = construction
        self._condition_pinv = None
        self._digest = None
        for a in (U, W, Yp, Yf):
            a.setflags(write=False)

    @property
    def L(self):
        return self.L0 + self.Lp

    @property
    def M(self):
        return self.U.shape[1]

    @property
    def Z(self):
        return numpy.vstack([self.U, self.W, self.Yp, self.Yf])

    def Psi(self):
        return numpy.vstack([self.U, self.W])

    @property
    def U_ini(self):
        return self.U[: self.n_u * self.L0]

    @property
    def U_f(self):
        return self.U[self.n_u * self.L0 :]

    def condition_matrix(self):
        """col(Psi, Yp), the left-hand side of the data equation."""
        return numpy.vstack([self.U, self.W, self.Yp])

    def condition_pinv(self):
        if self._condition_pinv is None:
            self._condition_pinv = pinv(self.condition_matrix())
        return self._condition_pinv

    def digest(self):
        """SHA-256 over the dimensions and the column-major little-endian data."""
        if self._digest is None:
            h = hashlib.sha256()
            dims = [self.n_u, self.n_w, self.n_y, self.L0, self.Lp, self.M]
            h.update(numpy.asarray(dims, dtype="<i8").tobytes())
            h.update(self.construction.encode())
            h.update(numpy.asarray(self.Z, dtype="<f8").tobytes(order="F"))
            self._digest = h.hexdigest()
        return self._digest

    def __repr__(self):
        return (
            f"SignalMatrix({self.construction}, n_u={self.n_u}, n_w={self.n_w}, "
            f"n_y={self.n_y}, L0={self.L0}, Lp={self.Lp}, M={self.M})"
        )


def _check_windows(L0, Lp):
    if L0 < 1 or Lp < 1:
        raise RejectedInputError(f"L0 and Lp must be positive, got {L0}, {Lp}")


def _stack(seq, idx):
    # seq: (N, n), idx: (L, M) -> (L * n, M), time-major
    L, M = idx.shape
    n = seq.shape[1]
    return seq[idx].transpose(0, 2, 1).reshape(L * n, M)


def _from_windows(datas, starts_list, L0, Lp, construction):
    L = L0 + Lp
    blocks = {"u": [], "w": [], "y": []}
    for data, starts in zip(datas, starts_list):
        idx = numpy.arange(L)[:, None] + numpy.asarray(starts)[None, :]
        blocks["u"].append(_stack(data.u, idx))
        blocks["w"].append(_stack(data.w, idx))
        blocks["y"].append(_stack(data.y, idx))
    U, W, Y = (numpy.hstack(blocks[key]) for key in ("u", "w", "y"))
    n_u, n_w, n_y = datas[0].n_u, datas[0].n_w, datas[0].n_y
    return SignalMatrix(
        numpy.ascontiguousarray(U),
        numpy.ascontiguousarray(W),
        numpy.ascontiguousarray(Y[: n_y * L0]),
        numpy.ascontiguousarray(Y[n_y * L0 :]),
        n_u,
        n_w,
        n_y,
        L0,
        Lp,
        construction,
    )


def build_hankel(data, L0, Lp):
    """Overlapping windows shifted by one sample, M = N - L + 1."""
    _check_windows(L0, Lp)
    L = L0 + Lp
    if data.N < L:
        raise InsufficientDataError(f"need at least L={L} samples, got N={data.N}")
    return _from_windows([data], [numpy.arange(data.N - L + 1)], L0, Lp, "hankel")


def build_page(data, L0, Lp):
    """Non-overlapping windows shifted by L samples, M = floor(N / L)."""
    _check_windows(L0, Lp)
    L = L0 + Lp
    if data.N < L:
        raise InsufficientDataError(f"need at least L={L} samples, got N={data.N}")
    return _from_windows([data], [L * numpy.arange(data.N // L)], L0, Lp, "page")


def build_columns(trajectories, L0, Lp):
    """One column per independent experiment, each using its first L samples."""
    _check_windows(L0, Lp)
    L = L0 + Lp
    trajectories = list(trajectories)
    if not trajectories:
        raise InsufficientDataError("no trajectories given")
    dims = {(d.n_u, d.n_w, d.n_y) for d in trajectories}
    if len(dims) != 1:
        raise RejectedInputError(f"trajectories have mixed dimensions {sorted(dims)}")
    for k, data in enumerate(trajectories):
        if data.N < L:
            raise InsufficientDataError(
                f"trajectory {k} has N={data.N} samples, need at least L={L}"
            )
    return _from_windows(trajectories, [[0]] * len(trajectories), L0, Lp, "columns")


def build_signal_matrix(data, L0, Lp, construction="hankel"):
    if construction == "hankel":
        return build_hankel(data, L0, Lp)
    if construction == "page":
        return build_page(data, L0, Lp)
    if construction == "columns":
        return build_columns(data, L0, Lp)
    raise RejectedInputError(
        f"construction must be one of {CONSTRUCTIONS}, got {construction!r}"
    )
