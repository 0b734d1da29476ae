import numpy

from .._exceptions import RejectedInputError
from ._program import Residuals


def _dual_part(duals, key, length):
    val = None if duals is None else duals.get(key)
    if val is None:
        return numpy.zeros(length)
    val = numpy.asarray(val, dtype=float).reshape(-1)
    if val.shape[0] != length:
        raise RejectedInputError(f"dual {key!r} must have length {length}")
    return val


def kkt_residuals(prog, z, duals=None):
    """Absolute infinity-norm residuals of a candidate primal-dual pair.

    primal: equality residual, inequality and cone violation.
    dual: stationarity of the Lagrangian and dual-cone violation.
    gap: largest complementarity product, per inequality row and per cone.
    """
    z = numpy.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != prog.n:
        raise RejectedInputError(f"z must have length {prog.n}, got {z.shape[0]}")
    nu = _dual_part(duals, "eq", prog.m_eq)
    lam = _dual_part(duals, "ineq", prog.m_ineq)
    cones = None if duals is None else duals.get("cones")
    if cones is None:
        cones = [numpy.zeros(cone.dim) for cone in prog.socs]
    if len(cones) != len(prog.socs):
        raise RejectedInputError(
            f"expected {len(prog.socs)} cone duals, got {len(cones)}"
        )
    cones = [numpy.asarray(u, dtype=float).reshape(-1) for u in cones]
    for u, cone in zip(cones, prog.socs):
        if u.shape[0] != cone.dim:
            raise RejectedInputError(f"cone dual must have length {cone.dim}")

    slack = prog.h - prog.G @ z
    primal = max(
        numpy.max(numpy.abs(prog.Aeq @ z - prog.beq), initial=0.0),
        numpy.max(-slack, initial=0.0),
        max((cone.violation(z) for cone in prog.socs), default=0.0),
    )

    stationarity = prog.P @ z + prog.f + prog.Aeq.T @ nu + prog.G.T @ lam
    dual_cone = numpy.max(-lam, initial=0.0)
    gap = numpy.max(numpy.abs(lam * slack), initial=0.0)
    for u, cone in zip(cones, prog.socs):
        stationarity -= cone.a * u[0] + cone.C.T @ u[1:]
        dual_cone = max(dual_cone, numpy.linalg.norm(u[1:]) - u[0])
        s = numpy.concatenate([[cone.a @ z + cone.b], cone.C @ z + cone.d])
        gap = max(gap, abs(u @ s))
    dual = max(numpy.max(numpy.abs(stationarity), initial=0.0), dual_cone)
    return Residuals(float(primal), float(dual), float(gap))
