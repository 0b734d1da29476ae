"""Binary predictor-parameter cache.

Layout: the 8 magic bytes `DDPCPP01`, the 32-byte SHA-256 digest of the signal
matrix the parameters were built from, little-endian int64 values (design code,
number of arrays) and float64 values (lambda, sigma2, design lambda), then for
every array its two int64 dimensions followed by its doubles in column-major order.
"""
import numpy

from .._exceptions import RejectedInputError
from ._build import PredictorParams
from ._design import KINDS, RegularizerDesign, gamma_bar

MAGIC = b"DDPCPP01"
ARRAYS = ("R1", "R2", "R3", "R4", "gamma_hat", "S")


def write_predictor(filename, params):
    design = params.design
    arrays = [getattr(params, name) for name in ARRAYS[:-1]] + [design.S]
    with open(filename, "wb") as f:
        f.write(MAGIC)
        f.write(bytes.fromhex(params.sm_digest))
        header = [KINDS.index(design.kind), len(arrays)]
        f.write(numpy.asarray(header, dtype="<i8").tobytes())
        f.write(
            numpy.asarray([params.lam, params.sigma2, design.lam], "<f8").tobytes()
        )
        for a in arrays:
            f.write(numpy.asarray(a.shape, dtype="<i8").tobytes())
            f.write(numpy.asarray(a, dtype="<f8").tobytes(order="F"))


def read_predictor(filename, sm):
    """Load cached parameters for `sm`; the stored digest must match `sm.digest()`."""
    with open(filename, "rb") as f:
        content = f.read()
    if content[: len(MAGIC)] != MAGIC:
        raise RejectedInputError(f"{filename}: not a predictor cache")
    offset = len(MAGIC)
    digest = content[offset : offset + 32].hex()
    if digest != sm.digest():
        raise RejectedInputError(
            f"{filename}: cached predictor belongs to a different signal matrix"
        )
    offset += 32
    code, count = (int(v) for v in numpy.frombuffer(content, "<i8", 2, offset))
    offset += 16
    lam, sigma2, design_lam = numpy.frombuffer(content, "<f8", 3, offset)
    offset += 24
    if not 0 <= code < len(KINDS) or count != len(ARRAYS):
        raise RejectedInputError(f"{filename}: corrupt header")

    arrays = []
    for _ in range(count):
        rows, cols = (int(v) for v in numpy.frombuffer(content, "<i8", 2, offset))
        offset += 16
        a = numpy.frombuffer(content, "<f8", rows * cols, offset)
        arrays.append(numpy.array(a.reshape(rows, cols, order="F")))
        offset += 8 * rows * cols
    if offset != len(content):
        raise RejectedInputError(f"{filename}: trailing bytes")

    R1, R2, R3, R4, gamma_hat, S = arrays
    kind = KINDS[code]
    factor = gamma_bar(sm) if kind == "mmse" else None
    design = RegularizerDesign(kind, float(design_lam), S, factor=factor)
    return PredictorParams(
        sm, design, float(sigma2), float(lam), R1, R2, R3, R4, gamma_hat
    )
