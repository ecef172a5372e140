"""Benchmark report artifacts: JSON summary, per-question CSV, and
matplotlib figures rendered to files next to it."""

from __future__ import annotations

import csv
import json
import os
from typing import Sequence

from .bench import BenchReport, BenchRow


def write_bench_artifacts(
    report: BenchReport, rows: Sequence[BenchRow], out_dir: str
) -> list[str]:
    """Write bench_report.json, results.csv, and two PNG figures into
    ``out_dir``; returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    report_path = os.path.join(out_dir, "bench_report.json")
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    written.append(report_path)

    csv_path = os.path.join(out_dir, "results.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "status", "latency_ms"])
        for i, row in enumerate(rows):
            writer.writerow([i, row.status, f"{row.latency_ms:.3f}"])
    written.append(csv_path)

    latencies = [row.latency_ms for row in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(latencies, bins=40, color="#4878a8", edgecolor="white")
    ax.axvline(report.latency_p50_ms, color="#2a9d3a", linestyle="--",
               label=f"p50 = {report.latency_p50_ms:.2f} ms")
    ax.axvline(report.latency_p99_ms, color="#c03030", linestyle="--",
               label=f"p99 = {report.latency_p99_ms:.2f} ms")
    ax.set_xlabel("latency (ms)")
    ax.set_ylabel("questions")
    ax.set_title(f"Latency over {report.total} questions "
                 f"({report.throughput_qps:.0f} q/s)")
    ax.legend()
    fig.tight_layout()
    hist_path = os.path.join(out_dir, "latency_histogram.png")
    fig.savefig(hist_path, dpi=120)
    plt.close(fig)
    written.append(hist_path)

    fig, ax = plt.subplots(figsize=(5, 4))
    labels = ["answered", "no_answer", "multi_entity"]
    values = [report.answered, report.no_answer, report.multi_entity]
    ax.bar(labels, values, color=["#2a9d3a", "#888888", "#d8a02a"])
    ax.set_ylabel("questions")
    ax.set_title(f"Status breakdown (coverage = {report.coverage:.3f})")
    for x, v in enumerate(values):
        ax.text(x, v, str(v), ha="center", va="bottom")
    fig.tight_layout()
    status_path = os.path.join(out_dir, "status_counts.png")
    fig.savefig(status_path, dpi=120)
    plt.close(fig)
    written.append(status_path)

    return written
