import csv

import numpy

from .._exceptions import RejectedInputError
from ._simulate import TrajectoryData


def trajectory_header(n_u, n_w, n_y):
    return (
        ["t"]
        + [f"u_{i}" for i in range(n_u)]
        + [f"w_{i}" for i in range(n_w)]
        + [f"y0_{i}" for i in range(n_y)]
        + [f"y_{i}" for i in range(n_y)]
    )


def write_trajectory_csv(filename, data):
    with open(filename, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(trajectory_header(data.n_u, data.n_w, data.n_y))
        for t in range(data.N):
            row = numpy.concatenate([data.u[t], data.w[t], data.y0[t], data.y[t]])
            writer.writerow([t] + ["%.17g" % val for val in row])


def read_trajectory_csv(filename):
    with open(filename, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise RejectedInputError(f"{filename}: empty trajectory file")
        rows = [[float(val) for val in row[1:]] for row in reader if row]

    counts = {
        prefix: sum(1 for name in header if name.startswith(prefix + "_"))
        for prefix in ("u", "w", "y0", "y")
    }
    n_u, n_w, n_y = counts["u"], counts["w"], counts["y0"]
    if header != trajectory_header(n_u, n_w, n_y):
        raise RejectedInputError(f"{filename}: unexpected header {header}")
    if not rows:
        raise RejectedInputError(f"{filename}: no samples")

    table = numpy.array(rows).reshape(len(rows), n_u + n_w + 2 * n_y)
    cols = numpy.cumsum([n_u, n_w, n_y])
    u, w, y0, y = numpy.split(table, cols, axis=1)
    return TrajectoryData(u, w, y0, y)
