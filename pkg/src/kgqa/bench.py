"""Benchmark harness: run a question workload through the engine (or a
running HTTP service) and report coverage and latency statistics."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from .engine import QaEngine, QaStatus


@dataclass
class BenchRow:
    question: str
    status: str
    latency_ms: float


@dataclass
class BenchReport:
    total: int
    answered: int
    no_answer: int
    multi_entity: int
    coverage: float
    latency_p50_ms: float
    latency_p90_ms: float
    latency_p99_ms: float
    latency_mean_ms: float
    throughput_qps: float
    wall_time_s: float
    warmup: int
    concurrency: int

    def to_dict(self) -> dict:
        return asdict(self)


def percentile(sorted_values: Sequence[float], p: float) -> float:
    """Nearest-rank percentile over pre-sorted values."""
    if not sorted_values:
        raise ValueError("no values")
    rank = max(1, math.ceil(p / 100.0 * len(sorted_values)))
    return sorted_values[rank - 1]


def _summarize(
    rows: list[BenchRow], wall_time_s: float, warmup: int, concurrency: int
) -> BenchReport:
    counts = {s.value: 0 for s in QaStatus}
    for row in rows:
        counts[row.status] += 1
    latencies = sorted(row.latency_ms for row in rows)
    total = len(rows)
    return BenchReport(
        total=total,
        answered=counts["answered"],
        no_answer=counts["no_answer"],
        multi_entity=counts["multi_entity"],
        coverage=counts["answered"] / total,
        latency_p50_ms=percentile(latencies, 50),
        latency_p90_ms=percentile(latencies, 90),
        latency_p99_ms=percentile(latencies, 99),
        latency_mean_ms=sum(latencies) / total,
        throughput_qps=total / wall_time_s if wall_time_s > 0 else float("inf"),
        wall_time_s=wall_time_s,
        warmup=warmup,
        concurrency=concurrency,
    )


def run_bench(
    engine: QaEngine,
    questions: Sequence[str],
    warmup: int = 0,
    concurrency: int = 1,
) -> tuple[BenchReport, list[BenchRow]]:
    """In-process benchmark measuring the engine, not the network stack.

    The first ``warmup`` questions run unmeasured; every remaining one
    is measured via the engine's own latency clock.  With concurrency
    above 1 the callers share one engine and throughput is aggregate.
    """
    if warmup < 0 or concurrency < 1:
        raise ValueError("warmup must be >= 0 and concurrency >= 1")
    measured = list(questions[warmup:])
    if not measured:
        raise ValueError("no questions to measure after warmup")
    for q in questions[:warmup]:
        engine.answer(q)

    start = time.perf_counter()
    if concurrency == 1:
        results = [engine.answer(q) for q in measured]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(engine.answer, measured))
    wall = time.perf_counter() - start

    rows = [
        BenchRow(q, r.status.value, r.latency_us / 1000.0)
        for q, r in zip(measured, results)
    ]
    return _summarize(rows, wall, warmup, concurrency), rows


def run_http_bench(
    url: str,
    questions: Sequence[str],
    warmup: int = 0,
    concurrency: int = 1,
) -> tuple[BenchReport, list[BenchRow]]:
    """Benchmark a running service over HTTP; latency is measured
    client-side so it includes the network stack."""
    import httpx

    if warmup < 0 or concurrency < 1:
        raise ValueError("warmup must be >= 0 and concurrency >= 1")
    measured = list(questions[warmup:])
    if not measured:
        raise ValueError("no questions to measure after warmup")

    ask_url = url.rstrip("/") + "/ask"

    def one(client: httpx.Client, question: str) -> BenchRow:
        t0 = time.perf_counter()
        resp = client.post(ask_url, json={"question": question})
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        resp.raise_for_status()
        return BenchRow(question, resp.json()["status"], elapsed_ms)

    with httpx.Client(timeout=30.0) as client:
        for q in questions[:warmup]:
            one(client, q)
        start = time.perf_counter()
        if concurrency == 1:
            rows = [one(client, q) for q in measured]
        else:
            run_one: Callable[[str], BenchRow] = lambda q: one(client, q)
            with ThreadPoolExecutor(max_workers=concurrency) as pool:
                rows = list(pool.map(run_one, measured))
        wall = time.perf_counter() - start
    return _summarize(rows, wall, warmup, concurrency), rows
