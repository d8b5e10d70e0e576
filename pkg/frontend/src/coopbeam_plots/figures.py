"""Aggregation and rendering of sweep results.

The input contract is the simulator's CSV: one row per
(architecture, swept value, trial) with the exact header below.  Each
figure shows per-architecture means over trials with a +-1 standard error
band.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_HEADER = ["arch", "sweep_name", "sweep_value", "trial", "seed",
                   "iterations", "sum_rate_bpshz", "p_tot_mw", "ee_bpshzw"]

ARCH_ORDER = ("fd", "fc", "fs", "ds")
ARCH_LABELS = {"fd": "FD", "fc": "FC", "fs": "FS", "ds": "DS"}

X_LABELS = {
    "power": "Transmit power (dBm)",
    "antennas": "Antennas per BS",
    "rfchains": "RF chains per BS",
}

# figure kind -> (required sweep, value column, y axis label)
FIGURE_KINDS = {
    "rate_vs_power": ("power", "sum_rate_bpshz", "Sum rate (bits/s/Hz)"),
    "rate_vs_antennas": ("antennas", "sum_rate_bpshz", "Sum rate (bits/s/Hz)"),
    "rate_vs_rf": ("rfchains", "sum_rate_bpshz", "Sum rate (bits/s/Hz)"),
    "ee_vs_power": ("power", "ee_bpshzw",
                    "Energy efficiency (bits/s/Hz/W)"),
    "ee_vs_antennas": ("antennas", "ee_bpshzw",
                       "Energy efficiency (bits/s/Hz/W)"),
    "ee_vs_rf": ("rfchains", "ee_bpshzw",
                 "Energy efficiency (bits/s/Hz/W)"),
    "convergence": (None, "iterations", "Iterations to termination"),
}


class SchemaError(ValueError):
    """The CSV header does not match the simulator contract."""


class EmptyDataError(ValueError):
    """No rows match the requested figure kind."""


@dataclass(frozen=True)
class Row:
    arch: str
    sweep_name: str
    sweep_value: float
    trial: int
    iterations: int
    sum_rate_bpshz: float
    p_tot_mw: float
    ee_bpshzw: float


def read_rows(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("CSV file is empty")
        missing = [c for c in EXPECTED_HEADER if c not in header]
        if missing:
            raise SchemaError(f"missing columns: {missing}")
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"header {header} does not match {EXPECTED_HEADER}")
        rows = []
        for rec in reader:
            d = dict(zip(header, rec))
            rows.append(Row(
                arch=d["arch"], sweep_name=d["sweep_name"],
                sweep_value=float(d["sweep_value"]), trial=int(d["trial"]),
                iterations=int(d["iterations"]),
                sum_rate_bpshz=float(d["sum_rate_bpshz"]),
                p_tot_mw=float(d["p_tot_mw"]),
                ee_bpshzw=float(d["ee_bpshzw"]),
            ))
    return rows


def aggregate(rows, kind):
    """Per-architecture series for one figure kind.

    Returns {arch: (values, means, stderrs)} with values sorted ascending.
    Rows from failed trials (negative iteration count) are dropped.
    """
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; "
                         f"choose from {sorted(FIGURE_KINDS)}")
    sweep, column, _ = FIGURE_KINDS[kind]
    keep = [r for r in rows if r.iterations >= 0
            and (sweep is None or r.sweep_name == sweep)]
    if not keep:
        raise EmptyDataError(
            f"no rows for figure {kind!r}"
            + (f" (sweep {sweep!r})" if sweep else ""))
    series = {}
    for arch in sorted({r.arch for r in keep},
                       key=lambda a: (ARCH_ORDER.index(a)
                                      if a in ARCH_ORDER else 99, a)):
        sub = [r for r in keep if r.arch == arch]
        values = sorted({r.sweep_value for r in sub})
        means, errs = [], []
        for v in values:
            ys = np.array([getattr(r, column) for r in sub
                           if r.sweep_value == v], dtype=float)
            means.append(float(np.mean(ys)))
            errs.append(float(np.std(ys, ddof=1) / np.sqrt(len(ys)))
                        if len(ys) > 1 else 0.0)
        series[arch] = (np.array(values), np.array(means), np.array(errs))
    return series


def build_figure(rows, kind):
    """Matplotlib figure for one kind; the caller owns (and closes) it."""
    sweep, _, ylabel = FIGURE_KINDS[kind]
    series = aggregate(rows, kind)
    if sweep is None:
        names = {r.sweep_name for r in rows}
        sweep = names.pop() if len(names) == 1 else "power"
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for arch, (x, mean, err) in series.items():
        label = ARCH_LABELS.get(arch, arch)
        if len(x) == 1:
            ax.errorbar(x, mean, yerr=err, marker="o", capsize=4, label=label)
        else:
            line, = ax.plot(x, mean, marker="o", label=label)
            ax.fill_between(x, mean - err, mean + err, alpha=0.2,
                            color=line.get_color())
    ax.set_xlabel(X_LABELS.get(sweep, sweep))
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig, series


def render(csv_path, kind, out_path):
    """Read a sweep CSV and write one figure; returns the plotted series."""
    rows = read_rows(csv_path)
    fig, series = build_figure(rows, kind)
    try:
        fig.savefig(out_path, dpi=150, metadata={"Software": None})
    finally:
        plt.close(fig)
    return series
