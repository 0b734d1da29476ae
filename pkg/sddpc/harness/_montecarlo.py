import collections
import csv
import hashlib
import json
import logging
import multiprocessing
import os
import pathlib

import numpy

from .._exceptions import DDPCError
from ..controller import METRICS, VARIANTS, draw_online, metrics, write_log_csv
from ..estimator import write_trace_csv
from ._scenario import Scenario, control_config

logger = logging.getLogger(__name__)

# metric name in the long-format table -> metric of the per-run evaluation
AGGREGATE_METRICS = {"cost": "true_total_cost", "violation": "total_violation"}

RunArtifacts = collections.namedtuple(
    "RunArtifacts", ["directory", "rows", "failures", "summary"]
)


def thread_count(threads=None):
    """Worker count: explicit value, else $DDPC_THREADS, else 1."""
    if threads is None:
        threads = os.environ.get("DDPC_THREADS", "1")
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def noise_digest(online):
    h = hashlib.sha256()
    h.update(numpy.ascontiguousarray(online.v).tobytes())
    h.update(numpy.ascontiguousarray(online.w).tobytes())
    return h.hexdigest()


def run_variants(scenario, run, seed, variants=VARIANTS):
    """One Monte Carlo run: all variants replay the same online noise and
    disturbances drawn from `seed`.
    """
    model = scenario.model
    online = draw_online(
        scenario.noise,
        model.n_y,
        model.n_w,
        scenario.cfg.control.L0 + scenario.steps,
        seed,
    )
    digest = noise_digest(online)
    results = []
    for variant in variants:
        entry = {"variant": variant, "run": run, "seed": seed, "digest": digest}
        try:
            log = scenario.run(variant, online=online)
        except DDPCError as e:
            logger.warning("run %d, variant %s failed: %s", run, variant, e)
            entry.update(log=None, metrics=None, error=str(e))
        else:
            ctrl = control_config(scenario.cfg, variant)
            entry.update(log=log, metrics=metrics(log, scenario.oc, ctrl), error=None)
            if log.aborted:
                entry["error"] = f"aborted after {log.failures} step failures"
        results.append(entry)
    return results


_worker_scenario = None


def _init_worker(cfg):
    global _worker_scenario
    _worker_scenario = Scenario(cfg)


def _task(args):
    run, seed = args
    return run_variants(_worker_scenario, run, seed)


def _execute(cfg, tasks, threads):
    if threads == 1 or len(tasks) <= 1:
        scenario = Scenario(cfg)
        return [run_variants(scenario, run, seed) for run, seed in tasks]
    with multiprocessing.Pool(min(threads, len(tasks)), _init_worker, (cfg,)) as pool:
        return pool.map(_task, tasks)


def _fmt(val):
    return "%.17g" % val


def run_montecarlo(cfg, directory=None, runs=None, threads=None):
    """Run every variant on `runs` seeds `base_seed + k` and write

        runs/<variant>_<run>.csv        closed-loop log
        runs/<variant>_<run>_trace.csv  filter trace (kf_ddpc, s_ddpc)
        metrics.csv                     one row per variant and run
        aggregate.csv                   variant,run,metric,value for cost and violation
        summary.json                    medians over the completed runs
        scenario.json                   the expanded configuration

    Runs may execute in worker processes; all files are written here.
    """
    mc = cfg.monte_carlo
    runs = mc.runs if runs is None else int(runs)
    if runs < 0:
        raise ValueError(f"run count must be nonnegative, got {runs}")
    directory = pathlib.Path(cfg.output.directory if directory is None else directory)
    run_dir = directory / "runs"
    run_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(k, mc.base_seed + k) for k in range(runs)]
    groups = _execute(cfg, tasks, thread_count(threads))
    results = [entry for group in groups for entry in group]

    n_y = len(cfg.control.Q)
    rows = []
    failures = []
    for entry in results:
        stem = f"{entry['variant']}_{entry['run']:03d}"
        log = entry["log"]
        if log is not None:
            write_log_csv(run_dir / f"{stem}.csv", log)
            if log.trace:
                write_trace_csv(run_dir / f"{stem}_trace.csv", log.trace, n_y)
        if entry["error"] is not None:
            failures.append(
                {k: entry[k] for k in ("variant", "run", "seed", "error")}
            )
            continue
        keys = ("variant", "run", "seed", "digest", "metrics")
        rows.append({k: entry[k] for k in keys})
    if failures:
        logger.warning(
            "%d of %d runs failed; aggregating the rest", len(failures), len(results)
        )

    _write_metrics(directory / "metrics.csv", rows)
    _write_aggregate(directory / "aggregate.csv", rows)
    summary = summarize(rows, failures, runs)
    with open(directory / "summary.json", "w") as f:
        json.dump(summary, f, indent=2)
    with open(directory / "scenario.json", "w") as f:
        f.write(cfg.dumps())
    logger.info("Monte Carlo artifacts written to %s", directory)
    return RunArtifacts(directory, rows, failures, summary)


def _write_metrics(filename, rows):
    with open(filename, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["variant", "run", "seed"] + list(METRICS) + ["noise_digest"])
        for row in rows:
            m = row["metrics"]
            writer.writerow(
                [row["variant"], row["run"], row["seed"]]
                + [_fmt(m[name]) for name in METRICS]
                + [row["digest"]]
            )


def _write_aggregate(filename, rows):
    with open(filename, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["variant", "run", "metric", "value"])
        for row in rows:
            for name, key in AGGREGATE_METRICS.items():
                writer.writerow(
                    [row["variant"], row["run"], name, _fmt(row["metrics"][key])]
                )


def summarize(rows, failures, runs):
    variants = {}
    for variant in VARIANTS:
        mine = [row["metrics"] for row in rows if row["variant"] == variant]
        medians = {
            name: float(numpy.median([m[name] for m in mine])) if mine else None
            for name in METRICS
        }
        variants[variant] = {"completed": len(mine), "median": medians}
    return {"runs": runs, "variants": variants, "failures": failures}
