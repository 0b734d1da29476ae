import argparse
import csv
import json
import logging
import pathlib
import sys

import numpy

from .._exceptions import (
    ConfigError,
    DDPCError,
    InsufficientDataError,
    MissingDependencyError,
    RejectedInputError,
)
from ..__about__ import __version__
from ..controller import VARIANTS, metrics, write_log_csv
from ..estimator import write_trace_csv
from ..lti import write_trajectory_csv
from ..predictor import write_predictor
from ..signal_matrix import write_signal_matrix
from ._config import load
from ._montecarlo import run_montecarlo
from ._report import report
from ._scenario import (
    Scenario,
    build_model,
    build_noise,
    build_params,
    build_signal_matrix_for,
    collect_offline_data,
    control_config,
    prediction_check,
)

logger = logging.getLogger("sddpc")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2

VALIDATION_ERRORS = (
    ConfigError,
    RejectedInputError,
    InsufficientDataError,
    MissingDependencyError,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _out_dir(args, cfg):
    path = pathlib.Path(args.out or cfg.output.directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(args):
    cfg = load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.replace("noise", seed=args.seed)
    return cfg


def cmd_simulate(args):
    cfg = _config(args)
    model = build_model(cfg)
    data = collect_offline_data(cfg, model, build_noise(cfg))
    out = _out_dir(args, cfg)
    if isinstance(data, list):
        for k, traj in enumerate(data):
            write_trajectory_csv(out / f"offline_{k:04d}.csv", traj)
    else:
        write_trajectory_csv(out / "offline.csv", data)
    logger.info("offline data written to %s", out)


def cmd_build(args):
    cfg = _config(args)
    model = build_model(cfg)
    data = collect_offline_data(cfg, model, build_noise(cfg))
    sm = build_signal_matrix_for(cfg, data, model)
    params = build_params(cfg, sm)
    out = _out_dir(args, cfg)
    write_signal_matrix(out / "signal_matrix.bin", sm)
    write_predictor(out / "predictor.bin", params)
    logger.info("signal matrix and predictor written to %s", out)


def cmd_predict(args):
    cfg = _config(args)
    if args.horizon is not None:
        cfg = cfg.replace("control", Lp=args.horizon)
    res, y0 = prediction_check(cfg)
    n_y = y0.shape[1]
    y_hat = res.y_bar.reshape(-1, n_y)
    std = numpy.sqrt(numpy.diag(res.Sigma)).reshape(-1, n_y)
    out = _out_dir(args, cfg)
    with open(out / "prediction.csv", "w", newline="") as f:
        writer = csv.writer(f)
        cols = ["k"]
        for base in ("yhat", "y0", "std"):
            cols += [f"{base}_{i}" for i in range(n_y)]
        writer.writerow(cols)
        for k in range(y0.shape[0]):
            vals = numpy.concatenate([y_hat[k], y0[k], std[k]])
            writer.writerow([k] + ["%.17g" % v for v in vals])
    logger.info("max prediction error %.3e", float(numpy.max(numpy.abs(y_hat - y0))))


def cmd_run(args):
    cfg = _config(args)
    variant = args.variant or cfg.control.variant
    scenario = Scenario(cfg)
    log = scenario.run(variant)
    out = _out_dir(args, cfg)
    write_log_csv(out / f"run_{variant}.csv", log)
    if log.trace:
        write_trace_csv(out / f"run_{variant}_trace.csv", log.trace, scenario.model.n_y)
    result = metrics(log, scenario.oc, control_config(cfg, variant))
    result.update(steps=log.steps, failures=log.failures, aborted=log.aborted)
    with open(out / f"run_{variant}_metrics.json", "w") as f:
        json.dump(result, f, indent=2)
    if log.aborted:
        raise DDPCError(f"run aborted after {log.failures} step failures")


def cmd_montecarlo(args):
    cfg = _config(args)
    if args.base_seed is not None:
        cfg = cfg.replace("monte_carlo", base_seed=args.base_seed)
    artifacts = run_montecarlo(cfg, args.out, args.runs, args.threads)
    for variant, entry in artifacts.summary["variants"].items():
        median = entry["median"]
        logger.info(
            "%s: %d runs, median cost %s, median violation %s",
            variant,
            entry["completed"],
            median["true_total_cost"],
            median["total_violation"],
        )


def cmd_report(args):
    for path in report(args.dir, plot=args.plot):
        logger.info("wrote %s", path)


def parser():
    p = _Parser(
        prog="sddpc",
        description="Stochastic indirect data-driven predictive control experiments.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    p.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        s = sub.add_parser(name, help=help)
        s.set_defaults(func=func)
        if name != "report":
            s.add_argument(
                "--config",
                required=True,
                help="scenario JSON file or builtin name (e.g. paper-sec5)",
            )
            s.add_argument("--out", help="output directory (default from config)")
        return s

    s = command("simulate", cmd_simulate, "collect offline data")
    s.add_argument("--seed", type=int, help="override noise.seed")
    s = command("build", cmd_build, "build signal matrix and predictor")
    s.add_argument("--seed", type=int, help="override noise.seed")
    s = command("predict", cmd_predict, "predict one window of a fresh trajectory")
    s.add_argument("--seed", type=int, help="override noise.seed")
    s.add_argument("--horizon", type=int, help="prediction horizon (overrides Lp)")
    s = command("run", cmd_run, "one closed-loop run")
    s.add_argument("--seed", type=int, help="override noise.seed")
    s.add_argument("--variant", choices=VARIANTS)
    s = command("montecarlo", cmd_montecarlo, "Monte Carlo campaign")
    s.add_argument("--runs", type=int)
    s.add_argument("--threads", type=int, help="worker processes (or DDPC_THREADS)")
    s.add_argument("--seed", dest="base_seed", type=int, help="override base_seed")
    s = command("report", cmd_report, "plot-data files from Monte Carlo artifacts")
    s.add_argument("--dir", required=True, help="Monte Carlo output directory")
    s.add_argument("--plot", action="store_true", help="also render PNGs")
    return p


def main(argv=None):
    args = parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        args.func(args)
    except numpy.linalg.LinAlgError as e:
        logger.error("%s", e)
        return EXIT_RUNTIME
    except VALIDATION_ERRORS as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except (DDPCError, OSError, ArithmeticError) as e:
        logger.error("%s", e)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
