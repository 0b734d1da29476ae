import collections

import numpy
import scipy.linalg

from .._exceptions import RejectedInputError

STATUSES = ("optimal", "infeasible", "unbounded", "max_iter", "numerical")

Residuals = collections.namedtuple("Residuals", ["primal", "dual", "gap"])


def _matrix(a, rows, cols, name):
    if a is None:
        return numpy.zeros((rows, cols))
    a = numpy.asarray(a, dtype=float)
    if a.size == 0 and rows * cols == 0:
        return numpy.zeros((rows, cols))
    a = numpy.atleast_2d(a)
    if a.shape != (rows, cols):
        raise RejectedInputError(
            f"{name} must have shape {(rows, cols)}, got {a.shape}"
        )
    if not numpy.all(numpy.isfinite(a)):
        raise RejectedInputError(f"{name} has non-finite entries")
    return a


def _vector(a, length, name):
    if a is None:
        return numpy.zeros(length)
    a = numpy.asarray(a, dtype=float).reshape(-1)
    if a.shape[0] != length:
        raise RejectedInputError(f"{name} must have length {length}, got {a.shape[0]}")
    if not numpy.all(numpy.isfinite(a)):
        raise RejectedInputError(f"{name} has non-finite entries")
    return a


class SecondOrderCone:
    """||C z + d||_2 <= a^T z + b"""

    def __init__(self, C, d, a, b):
        C = numpy.atleast_2d(numpy.asarray(C, dtype=float))
        self.C = C
        self.d = _vector(d, C.shape[0], "d")
        self.a = _vector(a, C.shape[1], "a")
        self.b = float(b)

    @property
    def dim(self):
        return self.C.shape[0] + 1

    def violation(self, z):
        return max(numpy.linalg.norm(self.C @ z + self.d) - self.a @ z - self.b, 0.0)


class ConeProgram:
    """min 1/2 z^T P z + f^T z + c0   s.t.   Aeq z = beq,  G z <= h,  socs"""

    def __init__(self, P, f, Aeq=None, beq=None, G=None, h=None, socs=(), c0=0.0):
        f = numpy.asarray(f, dtype=float).reshape(-1)
        n = f.shape[0]
        self.n = n
        self.P = _matrix(P, n, n, "P")
        self.f = _vector(f, n, "f")
        m_e = 0 if beq is None else numpy.asarray(beq).size
        m_i = 0 if h is None else numpy.asarray(h).size
        self.Aeq = _matrix(Aeq, m_e, n, "Aeq")
        self.beq = _vector(beq, m_e, "beq")
        self.G = _matrix(G, m_i, n, "G")
        self.h = _vector(h, m_i, "h")
        self.socs = list(socs)
        for k, cone in enumerate(self.socs):
            if cone.C.shape[1] != n:
                raise RejectedInputError(
                    f"cone {k} acts on {cone.C.shape[1]} variables, program has {n}"
                )
        self.c0 = float(c0)
        self._check_psd()

    def _check_psd(self):
        P = self.P
        if numpy.max(numpy.abs(P - P.T), initial=0.0) > 1.0e-10 * max(
            1.0, numpy.max(numpy.abs(P), initial=0.0)
        ):
            raise RejectedInputError("P is not symmetric")
        if self.n == 0:
            return
        P = 0.5 * (P + P.T)
        shift = 1.0e-10 * max(1.0, numpy.max(numpy.abs(P)))
        try:
            scipy.linalg.cho_factor(P + shift * numpy.eye(self.n))
        except numpy.linalg.LinAlgError:
            raise RejectedInputError("P is not positive semidefinite")
        self.P = P

    @property
    def m_eq(self):
        return self.beq.shape[0]

    @property
    def m_ineq(self):
        return self.h.shape[0]

    @property
    def soc_dims(self):
        return [cone.dim for cone in self.socs]

    def objective(self, z):
        return 0.5 * z @ self.P @ z + self.f @ z + self.c0

    def standard_form(self):
        """Conic form G_all z + s = h_all, s in R^m_ineq_+ x SOC x ... x SOC."""
        G_rows = [self.G]
        h_rows = [self.h]
        for cone in self.socs:
            G_rows.append(numpy.vstack([-cone.a[None, :], -cone.C]))
            h_rows.append(numpy.concatenate([[cone.b], cone.d]))
        G_all = numpy.vstack(G_rows) if G_rows else numpy.zeros((0, self.n))
        h_all = numpy.concatenate(h_rows)
        return G_all, h_all

    def split_cone_vector(self, v):
        """Split a vector over the stacked cone rows into (ineq, [soc_1, ...])."""
        m = self.m_ineq
        parts = [v[:m]]
        offset = m
        cones = []
        for dim in self.soc_dims:
            cones.append(v[offset : offset + dim])
            offset += dim
        parts.append(cones)
        return parts


class Solution:
    def __init__(self, z, status, objective, iterations, residuals, duals):
        assert status in STATUSES
        self.z = z
        self.status = status
        self.objective = objective
        self.iterations = iterations
        self.residuals = residuals
        self.duals = duals

    @property
    def optimal(self):
        return self.status == "optimal"

    def __repr__(self):
        return (
            f"Solution(status={self.status!r}, objective={self.objective:.10g}, "
            f"iterations={self.iterations})"
        )
