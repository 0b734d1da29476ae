import csv
import json
import logging
import pathlib

import numpy

from ..controller import VARIANTS
from ..estimator import trace_header
from ._config import from_dict
from ._montecarlo import AGGREGATE_METRICS
from ._scenario import build_constraints, build_model

logger = logging.getLogger(__name__)

FILES = ("fig1_trajectories.csv", "fig2_filter.csv", "fig3_boxplot.csv")


def read_csv(filename):
    """Header and rows (as lists of strings) of a CSV file."""
    with open(filename, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        return header, list(reader)


def _columns(header, rows, base, n):
    names = [base] if n == 1 else [f"{base}_{i}" for i in range(n)]
    idx = [header.index(name) for name in names]
    return numpy.array([[float(row[i]) for i in idx] for row in rows]).reshape(-1, n)


def channel_bounds(oc, t, n):
    """Per-channel lower and upper bounds of the box rows of the polytope at time
    t; channels without a box row get -inf / inf.
    """
    H, q = oc.at(t)
    lower = numpy.full(n, -numpy.inf)
    upper = numpy.full(n, numpy.inf)
    for h, b in zip(H, q):
        nz = numpy.flatnonzero(h)
        if nz.shape[0] != 1:
            continue
        i = nz[0]
        if h[i] > 0:
            upper[i] = min(upper[i], b / h[i])
        else:
            lower[i] = max(lower[i], b / h[i])
    return lower, upper


def _run_files(run_dir):
    """{(variant, run): path} of the closed-loop logs in `run_dir`."""
    out = {}
    for path in sorted(run_dir.glob("*.csv")):
        if path.stem.endswith("_trace"):
            continue
        variant, _, run = path.stem.rpartition("_")
        if variant in VARIANTS:
            out[(variant, int(run))] = path
    return out


def _completed(filename):
    """(variant, run) pairs listed in metrics.csv, i.e. the runs without failure."""
    if not filename.is_file():
        raise FileNotFoundError(f"missing {filename}")
    _, rows = read_csv(filename)
    return {(row[0], int(row[1])) for row in rows}


def recompute(header, rows, cfg, oc):
    """True cost and total violation of one closed-loop log, from its columns."""
    Q = numpy.asarray(cfg.control.Q)
    R = numpy.asarray(cfg.control.R)
    n_y, n_u = Q.shape[0], R.shape[0]
    u = _columns(header, rows, "u", n_u)
    y = _columns(header, rows, "y", n_y)
    y0 = _columns(header, rows, "y0", n_y)
    r = _columns(header, rows, "r", n_y)
    e = y0 - r
    cost = numpy.einsum("ti,ij,tj->", u, R, u) + numpy.einsum("ti,ij,tj->", e, Q, e)
    violation = numpy.sum([oc.violation(t, y[t]) for t in range(y.shape[0])])
    return {"cost": float(cost), "violation": float(violation)}


def report(directory, plot=False):
    """Plot-data files from Monte Carlo artifacts:

    fig1_trajectories.csv  closed-loop outputs of the first run with reference and
                           output bounds
    fig2_filter.csv        filtered against measured outputs of the first run
    fig3_boxplot.csv       variant,run,metric,value recomputed from the per-run logs

    Missing artifacts raise FileNotFoundError.
    """
    directory = pathlib.Path(directory)
    run_dir = directory / "runs"
    scenario_file = directory / "scenario.json"
    if not run_dir.is_dir() or not scenario_file.is_file():
        raise FileNotFoundError(f"no Monte Carlo artifacts in {directory}")
    with open(scenario_file) as f:
        cfg = from_dict(json.load(f))
    model = build_model(cfg)
    oc, _ = build_constraints(cfg, model)
    n_y = model.n_y
    files = _run_files(run_dir)
    completed = _completed(directory / "metrics.csv")
    files = {key: path for key, path in files.items() if key in completed}
    first = min((run for _, run in files), default=None)

    suffix = [""] if n_y == 1 else [f"_{i}" for i in range(n_y)]

    def names(base):
        return [base + s for s in suffix]

    fig1 = directory / FILES[0]
    with open(fig1, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["variant", "t"]
            + names("y")
            + names("y0")
            + names("r")
            + names("lower")
            + names("upper")
        )
        for variant in VARIANTS:
            path = files.get((variant, first))
            if path is None:
                continue
            header, rows = read_csv(path)
            y = _columns(header, rows, "y", n_y)
            y0 = _columns(header, rows, "y0", n_y)
            r = _columns(header, rows, "r", n_y)
            for t in range(len(rows)):
                lower, upper = channel_bounds(oc, t, n_y)
                vals = numpy.concatenate([y[t], y0[t], r[t], lower, upper])
                writer.writerow([variant, t] + ["%.17g" % v for v in vals])

    fig2 = directory / FILES[1]
    with open(fig2, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["variant"] + trace_header(n_y))
        for variant in VARIANTS:
            path = run_dir / f"{variant}_{first:03d}_trace.csv" if files else None
            if path is None or not path.is_file():
                continue
            _, rows = read_csv(path)
            for row in rows:
                writer.writerow([variant] + row)

    fig3 = directory / FILES[2]
    with open(fig3, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["variant", "run", "metric", "value"])
        for (variant, run), path in sorted(
            files.items(), key=lambda item: (VARIANTS.index(item[0][0]), item[0][1])
        ):
            header, rows = read_csv(path)
            vals = recompute(header, rows, cfg, oc)
            for name in AGGREGATE_METRICS:
                writer.writerow([variant, run, name, "%.17g" % vals[name]])

    logger.info("report files written to %s", directory)
    out = [fig1, fig2, fig3]
    if plot:
        from ..helpers.plot import plot_report

        out += plot_report(directory)
    return out
