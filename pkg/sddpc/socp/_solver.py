import logging

import numpy
import scipy.linalg

from ._cones import NTScaling, ProductCone
from ._program import Residuals, Solution

logger = logging.getLogger(__name__)

# static regularization of the reduced KKT matrix
KKT_REG = 1.0e-9
STEP_FRACTION = 0.99
MIN_STEP = 1.0e-10
# certificates are only read off once tau/kappa has dropped below this
CERT_RATIO = 1.0e-3


class _KKTSystem:
    """Factorization of

        [P   A^T  G^T ] [dx]   [rx]
        [A   0    0   ] [dy] = [ry]
        [G   0   -W^2 ] [dz]   [rz]

    reduced to [[P + G^T W^-2 G, A^T], [A, 0]] with static regularization and one
    step of iterative refinement.
    """

    def __init__(self, P, A, G, W):
        n = P.shape[0]
        p = A.shape[0]
        self.n = n
        self.A = A
        self.G = G
        self.W = W
        Gt = W.apply_inv(G) if G.shape[0] else G
        self.Gt = Gt
        H = P + Gt.T @ Gt
        self.K = numpy.block([[H, A.T], [A, numpy.zeros((p, p))]])
        reg = numpy.concatenate([KKT_REG * numpy.ones(n), -KKT_REG * numpy.ones(p)])
        self.lu = scipy.linalg.lu_factor(self.K + numpy.diag(reg))

    def solve(self, rx, ry, rz):
        rzt = self.W.apply_inv(rz) if rz.shape[0] else rz
        rhs = numpy.concatenate([rx + self.Gt.T @ rzt, ry])
        sol = scipy.linalg.lu_solve(self.lu, rhs)
        sol = sol + scipy.linalg.lu_solve(self.lu, rhs - self.K @ sol)
        dx = sol[: self.n]
        dy = sol[self.n :]
        dz = self.W.apply_inv(self.Gt @ dx - rzt) if rz.shape[0] else rz
        return dx, dy, dz


class _IdentityScaling:
    def apply(self, x):
        return x

    def apply_inv(self, x):
        return x


def _initial_point(P, q, A, b, G, h, cone):
    kkt = _KKTSystem(P, A, G, _IdentityScaling())
    x, y, r = kkt.solve(-q, b, h)
    e = cone.identity()
    s = -r
    z = r.copy()
    if cone.dim:
        alpha = cone.min_eig(s)
        if alpha <= 0.0:
            s = s + (1.0 - alpha) * e
        alpha = cone.min_eig(z)
        if alpha <= 0.0:
            z = z + (1.0 - alpha) * e
    return x, y, z, s


def _norm_inf(v):
    return numpy.max(numpy.abs(v), initial=0.0)


def _objective_scale(P, q):
    scale = max(_norm_inf(P), _norm_inf(q))
    return 1.0 / scale if scale > 0.0 else 1.0


def _is_infeasible(A, b, G, h, y, z, tol):
    """(y, z), normalized, with A^T y + G^T z ~ 0 and b^T y + h^T z < 0."""
    norm = max(_norm_inf(y), _norm_inf(z))
    if norm == 0.0:
        return False
    y = y / norm
    z = z / norm
    bh = b @ y + h @ z
    return bh < -tol and _norm_inf(A.T @ y + G.T @ z) <= -tol * bh


def _is_unbounded(P, q, A, G, x, s, tol):
    """x, normalized, with P x ~ 0, A x ~ 0, G x in -K and q^T x < 0."""
    norm = _norm_inf(x)
    if norm == 0.0:
        return False
    x = x / norm
    s = s / norm
    qx = q @ x
    if not qx < -tol:
        return False
    return max(_norm_inf(P @ x), _norm_inf(A @ x), _norm_inf(G @ x + s)) <= -tol * qx


def solve(prog, tol=1.0e-8, max_iter=200, warm_start=None):
    """Primal-dual interior-point method on the homogeneous self-dual embedding of
    the program, with the quadratic objective kept in the embedding and
    Nesterov-Todd scaling on every cone. Infeasibility, unboundedness and
    numerical breakdown are reported through `Solution.status`.

    The objective is normalized to unit size before iterating; the minimizer does
    not depend on that scale and the returned duals are in the units of `prog`.
    """
    obj_scale = _objective_scale(prog.P, prog.f)
    P = prog.P * obj_scale
    q = prog.f * obj_scale
    A = prog.Aeq
    b = prog.beq
    G, h = prog.standard_form()
    cone = ProductCone(prog.m_ineq, prog.soc_dims)
    nu = cone.degree
    e = cone.identity()

    x, y, z, s = _initial_point(P, q, A, b, G, h, cone)
    if warm_start is not None:
        x, s = _warm_primal(warm_start, G, h, cone, x, s)
    tau = 1.0
    kappa = 1.0

    scale_q = 1.0 + _norm_inf(q)
    scale_bh = 1.0 + max(_norm_inf(b), _norm_inf(h))

    status = "max_iter"
    residuals = Residuals(numpy.inf, numpy.inf, numpy.inf)
    iteration = 0
    for iteration in range(max_iter + 1):
        Px = P @ x
        xPx = x @ Px
        r_x = Px + A.T @ y + G.T @ z + q * tau
        r_y = A @ x - b * tau
        r_z = G @ x + s - h * tau
        r_tau = q @ x + b @ y + h @ z + xPx / tau + kappa
        r = (r_x, r_y, r_z, r_tau)

        # convergence on the normalized iterate
        xb, yb, zb, sb = x / tau, y / tau, z / tau, s / tau
        Pxb = Px / tau
        pobj = 0.5 * xb @ Pxb + q @ xb
        dobj = -0.5 * xb @ Pxb - b @ yb - h @ zb
        primal = max(_norm_inf(r_y), _norm_inf(r_z)) / tau / scale_bh
        dual = _norm_inf(r_x) / tau / scale_q
        gap = max(abs(pobj - dobj), sb @ zb) / (1.0 + max(abs(pobj), abs(dobj)))
        residuals = Residuals(primal, dual, gap)
        if not numpy.all(numpy.isfinite([primal, dual, gap, tau, kappa])):
            status = "numerical"
            break
        if primal <= tol and dual <= tol and gap <= tol:
            status = "optimal"
            break

        if tau < CERT_RATIO * kappa:
            if _is_infeasible(A, b, G, h, y, z, tol):
                status = "infeasible"
                break
            if _is_unbounded(P, q, A, G, x, s, tol):
                status = "unbounded"
                break

        if iteration == max_iter:
            break

        iterate = (x, y, z, s, tau, kappa)
        try:
            with numpy.errstate(divide="ignore", invalid="ignore", over="ignore"):
                step = _newton_step(
                    P, q, A, b, G, h, cone, e, nu, iterate, Px, xPx, r
                )
        except (numpy.linalg.LinAlgError, ZeroDivisionError) as err:
            logger.debug("interior-point step failed: %s", err)
            status = "numerical"
            break
        if step is None:
            status = "numerical"
            break
        alpha, dx, dy, dz, ds, dtau, dkappa = step
        finite = numpy.all(numpy.isfinite(numpy.concatenate([dx, dy, dz, ds])))
        if not (finite and numpy.isfinite(dtau) and numpy.isfinite(dkappa)):
            status = "numerical"
            break
        if alpha < MIN_STEP:
            status = "numerical"
            break
        x = x + alpha * dx
        y = y + alpha * dy
        z = z + alpha * dz
        s = s + alpha * ds
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa

    if status in ("infeasible", "unbounded"):
        # certificates are not normalized by tau
        xb, yb, zb = x, y, z
    else:
        xb, yb, zb = x / tau, y / tau / obj_scale, z / tau / obj_scale
    ineq, cones = prog.split_cone_vector(zb)
    duals = {"eq": yb, "ineq": ineq, "cones": cones}
    objective = prog.objective(xb) if status != "infeasible" else numpy.inf
    if status == "unbounded":
        objective = -numpy.inf
    logger.debug("solver finished: %s after %d iterations", status, iteration)
    return Solution(xb, status, objective, iteration, residuals, duals)


def _newton_step(P, q, A, b, G, h, cone, e, nu, iterate, Px, xPx, residuals):
    x, y, z, s, tau, kappa = iterate
    r_x, r_y, r_z, r_tau = residuals
    W = NTScaling(cone, s, z)
    lam = W.lam
    kkt = _KKTSystem(P, A, G, W)

    v2 = kkt.solve(-q, b, h)
    xi_x = q + 2.0 * Px / tau
    denom_const = xPx / tau ** 2 + kappa / tau

    def xi_dot(v):
        return xi_x @ v[0] + b @ v[1] + h @ v[2]

    xi_v2 = xi_dot(v2)
    denom = xi_v2 - denom_const
    if abs(denom) < 1.0e-300:
        return None

    def direction(eta, d_s, d_kappa):
        lds = cone.divide(lam, d_s)
        W_lds = W.apply(lds)
        v1 = kkt.solve(-eta * r_x, -eta * r_y, -eta * r_z - W_lds)
        dtau = (-eta * r_tau - d_kappa / tau - xi_dot(v1)) / denom
        dx = v1[0] + dtau * v2[0]
        dy = v1[1] + dtau * v2[1]
        dz = v1[2] + dtau * v2[2]
        ds = W_lds - W.apply(W.apply(dz))
        dkappa = (d_kappa - kappa * dtau) / tau
        return dx, dy, dz, ds, dtau, dkappa

    def step_length(dz, ds, dtau, dkappa):
        alpha = min(cone.max_step(s, ds), cone.max_step(z, dz))
        if dtau < 0.0:
            alpha = min(alpha, -tau / dtau)
        if dkappa < 0.0:
            alpha = min(alpha, -kappa / dkappa)
        return alpha

    lam_lam = cone.product(lam, lam)

    # affine (predictor) direction
    dx_a, dy_a, dz_a, ds_a, dtau_a, dkappa_a = direction(1.0, -lam_lam, -tau * kappa)
    alpha_aff = min(1.0, step_length(dz_a, ds_a, dtau_a, dkappa_a))
    sigma = (1.0 - alpha_aff) ** 3
    mu = (s @ z + tau * kappa) / (nu + 1)

    # combined direction with second-order correction
    corr = cone.product(W.apply_inv(ds_a), W.apply(dz_a))
    d_s = -lam_lam - corr + sigma * mu * e
    d_kappa = -tau * kappa - dtau_a * dkappa_a + sigma * mu
    dx, dy, dz, ds, dtau, dkappa = direction(1.0 - sigma, d_s, d_kappa)
    alpha = min(1.0, STEP_FRACTION * step_length(dz, ds, dtau, dkappa))
    return alpha, dx, dy, dz, ds, dtau, dkappa


def _warm_primal(warm_start, G, h, cone, x, s):
    """Start from a previous primal point, pushed into the cone interior."""
    x0 = numpy.asarray(warm_start.z, dtype=float)
    if x0.shape != x.shape or not numpy.all(numpy.isfinite(x0)):
        return x, s
    s0 = h - G @ x0
    if cone.dim:
        alpha = cone.min_eig(s0)
        if alpha <= 0.0:
            s0 = s0 + (1.0 - alpha) * cone.identity()
    return x0, s0
