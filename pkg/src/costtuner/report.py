"""Report files for a replay: CSVs, a cost-vs-time scatter and a text summary.

Output is deterministic byte for byte: CSV rows use repr-stable floats and the
SVG is rendered with a pinned hash salt and no embedded timestamps.
"""

from __future__ import annotations

import csv
import os
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "costtuner"

import matplotlib.pyplot as plt

from .replay import ModeResult, RunReport

LATENCY_CSV = "latency.csv"
CORRELATION_CSV = "correlation.csv"
TRAJECTORY_CSV = "params_trajectory.csv"
SCATTER_SVG = "scatter_cost_time.svg"
SUMMARY_TXT = "summary.txt"


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _write_latency(report: RunReport, path: str) -> None:
    by_label: Dict[str, List[Optional[float]]] = {}
    order: List[str] = []
    for column, mode in enumerate((report.baseline, report.acm)):
        if mode is None:
            continue
        for query in mode.queries:
            if query.label not in by_label:
                by_label[query.label] = [None, None]
                order.append(query.label)
            by_label[query.label][column] = query.latency_ms
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["query", "baseline_ms", "acm_ms"])
        for label in order:
            baseline_ms, acm_ms = by_label[label]
            writer.writerow([label, _fmt(baseline_ms), _fmt(acm_ms)])


def _write_correlation(report: RunReport, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["mode", "n_nodes", "pearson"])
        for mode in report.modes():
            writer.writerow([mode.mode, len(mode.node_pairs), _fmt(mode.correlation)])


def _write_trajectory(report: RunReport, path: str) -> None:
    columns = [
        "mode",
        "kind",
        "step",
        "entity",
        "c_t",
        "c_o",
        "c_i",
        "smoothed_c_t",
        "smoothed_c_o",
        "smoothed_c_i",
        "n_samples",
        "predicted_hit_ratio",
        "random_page_cost",
    ]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for mode in report.modes():
            for row in mode.disk_trajectory:
                writer.writerow(
                    [
                        mode.mode,
                        "disk",
                        row["step"],
                        row["table"],
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        _fmt(row["predicted_hit_ratio"]),
                        _fmt(row["random_page_cost"]),
                    ]
                )
            for row in mode.cpu_trajectory:
                writer.writerow(
                    [
                        mode.mode,
                        "cpu",
                        row["step"],
                        row["op_type"],
                        _fmt(row["c_t"]),
                        _fmt(row["c_o"]),
                        _fmt(row["c_i"]),
                        _fmt(row["smoothed_c_t"]),
                        _fmt(row["smoothed_c_o"]),
                        _fmt(row["smoothed_c_i"]),
                        row["n_samples"],
                        "",
                        "",
                    ]
                )


def _write_scatter(report: RunReport, path: str) -> None:
    modes = report.modes() or [ModeResult(mode="baseline"), ModeResult(mode="acm")]
    fig, axes = plt.subplots(1, max(len(modes), 1), figsize=(5.5 * max(len(modes), 1), 4.5))
    if len(modes) == 1:
        axes = [axes]
    for axis, mode in zip(axes, modes):
        if mode.node_pairs:
            costs, times = zip(*mode.node_pairs)
            axis.scatter(costs, times, s=12, alpha=0.6)
        title = f"{mode.mode}"
        if mode.correlation is not None:
            title += f" (r={mode.correlation:.3f})"
        axis.set_title(title)
        axis.set_xlabel("estimated node cost")
        axis.set_ylabel("actual node time [ms]")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _write_summary(report: RunReport, path: str) -> None:
    lines: List[str] = []
    for mode in report.modes():
        lines.append(
            f"{mode.mode}: queries={len(mode.queries)} "
            f"total_latency_ms={mode.total_latency_ms!r} "
            f"nodes={len(mode.node_pairs)} "
            f"pearson={'' if mode.correlation is None else repr(mode.correlation)}"
        )
    improvement = report.improvement
    if improvement is not None:
        lines.append(f"improvement_pct={improvement * 100.0!r}")
    lines.append(f"plan_flips={len(report.plan_flips)}")
    if report.plan_flips:
        lines.append("flipped_queries=" + ",".join(report.plan_flips))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def write_report(report: RunReport, out_dir: str) -> List[str]:
    """Write all report files into ``out_dir``; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, writer in (
        (LATENCY_CSV, _write_latency),
        (CORRELATION_CSV, _write_correlation),
        (TRAJECTORY_CSV, _write_trajectory),
        (SCATTER_SVG, _write_scatter),
        (SUMMARY_TXT, _write_summary),
    ):
        path = os.path.join(out_dir, name)
        try:
            writer(report, path)
        except OSError as exc:
            raise OSError(f"failed writing report file {path!r}: {exc}") from exc
        written.append(path)
    return written
