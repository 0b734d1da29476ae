import numpy

METRICS = (
    "true_total_cost",
    "total_violation",
    "per_step_violation_freq",
    "true_violation",
    "filter_rmse",
    "measured_rmse",
)


def _rmse(a, b):
    if a.size == 0:
        return 0.0
    return float(numpy.sqrt(numpy.mean((a - b) ** 2)))


def metrics(log, oc, cfg):
    """Closed-loop performance of one run.

    true_total_cost: sum_t ||u_t||_R^2 + ||y0_t - r_t||_Q^2
    total_violation: sum_t sum_i max(H_t y_t - q_t, 0)_i on the measured outputs
    per_step_violation_freq: share of steps with a positive violation
    true_violation: total_violation evaluated on the noise-free outputs y0
    filter_rmse / measured_rmse: output history used by the controller, and raw
    measurements, against y0
    """
    steps = log.steps
    if steps == 0:
        return {name: 0.0 for name in METRICS}
    u = log.array("u").reshape(steps, -1)
    y0 = log.array("y0").reshape(steps, -1)
    y = log.array("y").reshape(steps, -1)
    r = log.array("r").reshape(steps, -1)
    filtered = log.array("filtered").reshape(steps, -1)

    e = y0 - r
    cost = numpy.einsum("ti,ij,tj->", u, cfg.R, u) + numpy.einsum(
        "ti,ij,tj->", e, cfg.Q, e
    )
    violations = numpy.array([oc.violation(t, y[t]) for t in range(steps)])
    true_violations = [oc.violation(t, y0[t]) for t in range(steps)]
    return {
        "true_total_cost": float(cost),
        "total_violation": float(numpy.sum(violations)),
        "per_step_violation_freq": float(numpy.mean(violations > 0.0)),
        "true_violation": float(numpy.sum(true_violations)),
        "filter_rmse": _rmse(filtered, y0),
        "measured_rmse": _rmse(y, y0),
    }
