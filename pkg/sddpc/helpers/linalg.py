import numpy

from .._exceptions import RejectedInputError

# Singular values below PINV_RTOL * (largest singular value) count as zero.
PINV_RTOL = 1.0e-10


def pinv(a):
    a = numpy.asarray(a, dtype=float)
    if a.size == 0:
        return numpy.zeros(a.T.shape)
    return numpy.linalg.pinv(a, rcond=PINV_RTOL)


def singular_values(a):
    a = numpy.asarray(a, dtype=float)
    if a.size == 0:
        return numpy.zeros(0)
    return numpy.linalg.svd(a, compute_uv=False)


def numeric_rank(a):
    sv = singular_values(a)
    if len(sv) == 0 or sv[0] == 0.0:
        return 0
    return int(numpy.sum(sv > PINV_RTOL * sv[0]))


def symmetrize(a):
    a = numpy.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def floor_psd(a):
    """Symmetrize `a` and clip negative eigenvalues at 0."""
    a = symmetrize(a)
    if a.size == 0:
        return a
    vals, vecs = numpy.linalg.eigh(a)
    if vals[0] >= 0.0:
        return a
    vals = numpy.maximum(vals, 0.0)
    return symmetrize((vecs * vals) @ vecs.T)


def check_psd(a, name, shape=None, tol=1.0e-10):
    a = numpy.atleast_2d(numpy.asarray(a, dtype=float))
    if a.size == 0 and shape is not None and numpy.prod(shape) == 0:
        return numpy.zeros(shape)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise RejectedInputError(f"{name} must be a square matrix, got shape {a.shape}")
    if shape is not None and a.shape != tuple(shape):
        raise RejectedInputError(
            f"{name} must have shape {tuple(shape)}, got {a.shape}"
        )
    if not numpy.all(numpy.isfinite(a)):
        raise RejectedInputError(f"{name} has non-finite entries")
    scale = max(1.0, numpy.max(numpy.abs(a))) if a.size else 1.0
    if numpy.max(numpy.abs(a - a.T), initial=0.0) > tol * scale:
        raise RejectedInputError(f"{name} is not symmetric")
    if a.size and numpy.linalg.eigvalsh(symmetrize(a))[0] < -tol * scale:
        raise RejectedInputError(f"{name} is not positive semidefinite")
    return symmetrize(a)


def psd_sqrt(a):
    """Symmetric square root of a PSD matrix."""
    a = symmetrize(a)
    if a.size == 0:
        return a
    vals, vecs = numpy.linalg.eigh(a)
    return symmetrize((vecs * numpy.sqrt(numpy.maximum(vals, 0.0))) @ vecs.T)


def as_vector(a, length, name):
    a = numpy.asarray(a, dtype=float).reshape(-1)
    if a.shape[0] != length:
        raise RejectedInputError(f"{name} must have length {length}, got {a.shape[0]}")
    return a


def as_sequence(a, dim, name, count=None):
    """Coerce to an array of shape (count, dim) with time along the first axis."""
    a = numpy.asarray(a, dtype=float)
    if a.ndim == 1 and dim == 1:
        a = a.reshape(-1, 1)
    elif a.ndim == 1 and a.size == 0:
        a = a.reshape(0 if count is None else count, dim)
    if a.ndim != 2 or a.shape[1] != dim:
        raise RejectedInputError(f"{name} must have {dim} columns, got shape {a.shape}")
    if count is not None and a.shape[0] != count:
        raise RejectedInputError(f"{name} must have {count} samples, got {a.shape[0]}")
    return a


def shift_matrix(num_blocks, block_size):
    """Upper shift by one block: `shift_matrix(n, k) @ x` drops the first block of `x`
    and appends a zero block.
    """
    return numpy.eye(num_blocks * block_size, k=block_size)
