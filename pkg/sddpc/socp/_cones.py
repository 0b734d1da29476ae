"""Product cone R^l_+ x Q^k_1 x ... x Q^k_r and its Nesterov-Todd scaling.

A second-order cone Q^k = {x in R^k : x_0 >= ||x_1||}; J = diag(1, -1, ..., -1).
All operations act blockwise on vectors stacked in the order orthant, then cones.
"""
import numpy


class ProductCone:
    def __init__(self, l, soc_dims):
        self.l = l
        self.soc_dims = list(soc_dims)
        self.socs = []
        offset = l
        for dim in self.soc_dims:
            self.socs.append(slice(offset, offset + dim))
            offset += dim
        self.dim = offset

    @property
    def degree(self):
        return self.l + len(self.soc_dims)

    def identity(self):
        e = numpy.zeros(self.dim)
        e[: self.l] = 1.0
        for s in self.socs:
            e[s.start] = 1.0
        return e

    def min_eig(self, x):
        vals = [numpy.min(x[: self.l])] if self.l else []
        for s in self.socs:
            xs = x[s]
            vals.append(xs[0] - numpy.linalg.norm(xs[1:]))
        return min(vals) if vals else numpy.inf

    def product(self, x, y):
        """Jordan product x o y."""
        out = numpy.empty(self.dim)
        out[: self.l] = x[: self.l] * y[: self.l]
        for s in self.socs:
            xs, ys = x[s], y[s]
            out[s.start] = xs @ ys
            out[s.start + 1 : s.stop] = xs[0] * ys[1:] + ys[0] * xs[1:]
        return out

    def divide(self, lam, d):
        """The u with lam o u = d, for lam in the interior."""
        out = numpy.empty(self.dim)
        out[: self.l] = d[: self.l] / lam[: self.l]
        for s in self.socs:
            ls, ds = lam[s], d[s]
            l0, l1 = ls[0], ls[1:]
            u0 = (l0 * ds[0] - l1 @ ds[1:]) / (l0 ** 2 - l1 @ l1)
            out[s.start] = u0
            out[s.start + 1 : s.stop] = (ds[1:] - u0 * l1) / l0
        return out

    def max_step(self, x, dx):
        """Largest alpha >= 0 with x + alpha dx in the cone; inf if unbounded."""
        alpha = numpy.inf
        if self.l:
            neg = dx[: self.l] < 0.0
            if numpy.any(neg):
                alpha = min(alpha, numpy.min(-x[: self.l][neg] / dx[: self.l][neg]))
        for s in self.socs:
            alpha = min(alpha, _soc_step(x[s], dx[s]))
        return alpha


def _soc_step(x, d):
    a = d[0] ** 2 - d[1:] @ d[1:]
    b = 2.0 * (x[0] * d[0] - x[1:] @ d[1:])
    c = max(x[0] ** 2 - x[1:] @ x[1:], 0.0)
    disc = b ** 2 - 4.0 * a * c
    if disc < 0.0:
        return numpy.inf
    denom = -b + numpy.sqrt(disc)
    if denom <= 0.0:
        return numpy.inf
    return 2.0 * c / denom


class NTScaling:
    """Symmetric W with W z = W^-1 s = lam."""

    def __init__(self, cone, s, z):
        self.cone = cone
        l = cone.l
        self.d = numpy.sqrt(s[:l] / z[:l])
        self.blocks = []
        lam = numpy.empty(cone.dim)
        lam[:l] = numpy.sqrt(s[:l] * z[:l])
        for sl in cone.socs:
            ss, zs = s[sl], z[sl]
            a = numpy.sqrt(max(ss[0] ** 2 - ss[1:] @ ss[1:], 0.0))
            b = numpy.sqrt(max(zs[0] ** 2 - zs[1:] @ zs[1:], 0.0))
            sbar = ss / a
            zbar = zs / b
            gamma = numpy.sqrt(0.5 * (1.0 + sbar @ zbar))
            zbar_j = zbar.copy()
            zbar_j[1:] *= -1.0
            wbar = (sbar + zbar_j) / (2.0 * gamma)
            v = wbar.copy()
            v[0] += 1.0
            v /= numpy.sqrt(2.0 * (wbar[0] + 1.0))
            beta = numpy.sqrt(a / b)
            self.blocks.append((sl, beta, v))
        self.lam = lam
        lam[l:] = self.apply(z)[l:]

    def _apply(self, x, inverse):
        out = numpy.empty_like(x)
        l = self.cone.l
        scale = 1.0 / self.d if inverse else self.d
        if x.ndim == 1:
            out[:l] = scale * x[:l]
        else:
            out[:l] = scale[:, None] * x[:l]
        for sl, beta, v in self.blocks:
            xs = x[sl]
            Jx = xs.copy()
            Jx[1:] *= -1.0
            if inverse:
                Jv = v.copy()
                Jv[1:] *= -1.0
                out[sl] = (2.0 * numpy.multiply.outer(Jv, Jv @ xs) - Jx) / beta
            else:
                out[sl] = beta * (2.0 * numpy.multiply.outer(v, v @ xs) - Jx)
        return out

    def apply(self, x):
        return self._apply(x, inverse=False)

    def apply_inv(self, x):
        return self._apply(x, inverse=True)
