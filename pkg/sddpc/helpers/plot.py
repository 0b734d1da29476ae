import csv
import pathlib

import numpy

__all__ = ["plot_trajectories", "plot_filter", "plot_boxplot", "plot_report"]

# matplotlib 2.0's color cycle, one color per variant
COLORS = {"n_ddpc": "#d62728", "kf_ddpc": "#ff7f0e", "s_ddpc": "#1f77b4"}


def _read(filename):
    with open(filename, newline="") as f:
        return list(csv.DictReader(f))


def _column(rows, name):
    return numpy.array([float(row[name]) for row in rows])


def plot_trajectories(plt, rows, channel=""):
    """Measured outputs per variant over the reference and the output bounds."""
    for variant, color in COLORS.items():
        mine = [row for row in rows if row["variant"] == variant]
        if not mine:
            continue
        t = _column(mine, "t")
        plt.plot(t, _column(mine, "y" + channel), color=color, label=variant)
    if rows:
        first = [row for row in rows if row["variant"] == rows[0]["variant"]]
        t = _column(first, "t")
        r = _column(first, "r" + channel)
        plt.step(t, r, "k--", where="post", label="reference")
        for name in ("lower", "upper"):
            bound = _column(first, name + channel)
            if numpy.all(numpy.isfinite(bound)):
                plt.plot(t, bound, color="0.5", linestyle=":")
    plt.xlabel("t")
    plt.legend()


def plot_filter(plt, rows, variant="s_ddpc", channel="0"):
    mine = [row for row in rows if row["variant"] == variant]
    t = _column(mine, "t")
    measured = _column(mine, "measured_" + channel)
    posterior = _column(mine, "posterior_" + channel)
    plt.plot(t, measured, ".", color="0.6", label="measured")
    plt.plot(t, posterior, color=COLORS[variant], label="filtered")
    plt.plot(t, _column(mine, "true_" + channel), "k", label="noise-free")
    plt.xlabel("t")
    plt.legend()


def plot_boxplot(plt, rows, metric):
    rows = [row for row in rows if row["metric"] == metric]
    data = [[float(r["value"]) for r in rows if r["variant"] == v] for v in COLORS]
    plt.boxplot(data, labels=list(COLORS))
    plt.ylabel(metric)


def plot_report(directory):
    """Render the report CSVs of `directory` to PNG files next to them."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = pathlib.Path(directory)
    out = []

    plt.figure()
    plot_trajectories(plt, _read(directory / "fig1_trajectories.csv"))
    out.append(directory / "fig1_trajectories.png")
    plt.savefig(out[-1])
    plt.close()

    rows = _read(directory / "fig2_filter.csv")
    present = {row["variant"] for row in rows}
    variants = [v for v in ("s_ddpc", "kf_ddpc") if v in present]
    if variants:
        plt.figure()
        plot_filter(plt, rows, variants[0])
        out.append(directory / "fig2_filter.png")
        plt.savefig(out[-1])
        plt.close()

    rows = _read(directory / "fig3_boxplot.csv")
    for metric in ("cost", "violation"):
        plt.figure()
        plot_boxplot(plt, rows, metric)
        out.append(directory / f"fig3_{metric}.png")
        plt.savefig(out[-1])
        plt.close()
    return out
