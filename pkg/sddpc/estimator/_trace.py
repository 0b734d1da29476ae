import collections
import csv

import numpy

TraceRecord = collections.namedtuple(
    "TraceRecord", ["t", "prior", "posterior", "measured", "true", "variance"]
)


def trace_record(t, prior_state, posterior_state, y_measured, y_true):
    s = posterior_state.newest
    return TraceRecord(
        t,
        prior_state.y_hist[s].copy(),
        posterior_state.y_hist[s].copy(),
        numpy.asarray(y_measured, dtype=float).reshape(-1),
        numpy.asarray(y_true, dtype=float).reshape(-1),
        posterior_state.newest_variance(),
    )


def trace_header(n_y):
    cols = ["t"]
    for name in ("prior", "posterior", "measured", "true", "variance"):
        cols += [f"{name}_{i}" for i in range(n_y)]
    return cols


def write_trace_csv(filename, records, n_y):
    with open(filename, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(trace_header(n_y))
        for rec in records:
            vals = numpy.concatenate(
                [rec.prior, rec.posterior, rec.measured, rec.true, rec.variance]
            )
            writer.writerow([rec.t] + ["%.17g" % v for v in vals])
