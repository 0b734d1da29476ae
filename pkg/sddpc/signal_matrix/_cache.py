"""Binary signal-matrix cache.

Layout: the 8 magic bytes `DDPCSM01`, seven little-endian int64 values
(n_u, n_w, n_y, L0, Lp, M, construction code) and then Z as little-endian doubles
in column-major order.
"""
import numpy

from .._exceptions import RejectedInputError
from ._signal_matrix import CONSTRUCTIONS, SignalMatrix

MAGIC = b"DDPCSM01"


def write_signal_matrix(filename, sm):
    code = CONSTRUCTIONS.index(sm.construction)
    dims = [sm.n_u, sm.n_w, sm.n_y, sm.L0, sm.Lp, sm.M, code]
    with open(filename, "wb") as f:
        f.write(MAGIC)
        f.write(numpy.asarray(dims, dtype="<i8").tobytes())
        f.write(numpy.asarray(sm.Z, dtype="<f8").tobytes(order="F"))


def read_signal_matrix(filename):
    with open(filename, "rb") as f:
        content = f.read()
    if content[: len(MAGIC)] != MAGIC:
        raise RejectedInputError(f"{filename}: not a signal-matrix cache")
    offset = len(MAGIC)
    if len(content) < offset + 56:
        raise RejectedInputError(f"{filename}: truncated header")
    dims = numpy.frombuffer(content, dtype="<i8", count=7, offset=offset)
    n_u, n_w, n_y, L0, Lp, M, code = (int(d) for d in dims)
    offset += 56
    L = L0 + Lp
    rows = (n_u + n_w + n_y) * L
    if not 0 <= code < len(CONSTRUCTIONS):
        raise RejectedInputError(f"{filename}: unknown construction code {code}")
    if len(content) != offset + 8 * rows * M:
        raise RejectedInputError(f"{filename}: expected {rows}x{M} doubles")
    Z = numpy.frombuffer(content, dtype="<f8", offset=offset)
    Z = numpy.array(Z.reshape(rows, M, order="F"), dtype=float)
    cuts = numpy.cumsum([n_u * L, n_w * L, n_y * L0])
    U, W, Yp, Yf = numpy.split(Z, cuts, axis=0)
    return SignalMatrix(
        numpy.ascontiguousarray(U),
        numpy.ascontiguousarray(W),
        numpy.ascontiguousarray(Yp),
        numpy.ascontiguousarray(Yf),
        n_u,
        n_w,
        n_y,
        L0,
        Lp,
        CONSTRUCTIONS[code],
    )
