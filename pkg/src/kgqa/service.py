"""HTTP shell around the QA engine: /ask, /healthz, /metrics, plus an
optional fallback hook consulted when the local engine has no answer."""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field

import httpx
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .engine import QaEngine, QaResult, QaStatus

logger = logging.getLogger(__name__)

FALLBACK_TIMEOUT_S = 0.2

LATENCY_BUCKET_BOUNDS_MS = (0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)


def result_payload(result: QaResult, source: str) -> dict:
    """The wire shape shared by the CLI and the HTTP service."""
    return {
        "status": result.status.value,
        "answer": result.answer_text,
        "entity": result.entity,
        "predicate": result.predicate,
        "score": result.score,
        "latency_ms": result.latency_us / 1000.0,
        "source": source,
    }


@dataclass
class ServiceMetrics:
    """Request counters plus a fixed-bucket latency histogram.

    The three status counters always sum to the number of requests
    served; ``fallback_answered`` counts the subset of answered
    responses that came from the fallback service.
    """

    answered: int = 0
    no_answer: int = 0
    multi_entity: int = 0
    fallback_answered: int = 0
    bucket_counts: list[int] = field(
        default_factory=lambda: [0] * (len(LATENCY_BUCKET_BOUNDS_MS) + 1)
    )
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, status: str, latency_ms: float, from_fallback: bool = False) -> None:
        with self._lock:
            if status == "answered":
                self.answered += 1
                if from_fallback:
                    self.fallback_answered += 1
            elif status == "multi_entity":
                self.multi_entity += 1
            else:
                self.no_answer += 1
            for i, bound in enumerate(LATENCY_BUCKET_BOUNDS_MS):
                if latency_ms <= bound:
                    self.bucket_counts[i] += 1
                    break
            else:
                self.bucket_counts[-1] += 1

    def snapshot(self) -> dict:
        with self._lock:
            total = self.answered + self.no_answer + self.multi_entity
            buckets = [
                {"le_ms": bound, "count": self.bucket_counts[i]}
                for i, bound in enumerate(LATENCY_BUCKET_BOUNDS_MS)
            ]
            buckets.append({"le_ms": None, "count": self.bucket_counts[-1]})
            p50 = None
            if total:
                target = (total + 1) // 2
                running = 0
                for i, bound in enumerate(LATENCY_BUCKET_BOUNDS_MS):
                    running += self.bucket_counts[i]
                    if running >= target:
                        p50 = bound
                        break
            return {
                "answered": self.answered,
                "no_answer": self.no_answer,
                "multi_entity": self.multi_entity,
                "fallback_answered": self.fallback_answered,
                "total": total,
                "latency_histogram": buckets,
                "latency_p50_ms": p50,
            }


def create_app(
    engine: QaEngine,
    fallback_url: str | None = None,
    fallback_client: httpx.Client | None = None,
) -> FastAPI:
    """Build the service app around a loaded engine.

    ``fallback_client`` is injectable for tests; by default a real HTTP
    client with the 200 ms fallback timeout is created on first use.
    """
    app = FastAPI(title="kgqa", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    metrics = ServiceMetrics()
    app.state.engine = engine
    app.state.metrics = metrics
    app.state.fallback_url = fallback_url
    app.state.fallback_client = fallback_client

    def query_fallback(question: str) -> dict | None:
        client = app.state.fallback_client
        if client is None:
            client = httpx.Client(timeout=FALLBACK_TIMEOUT_S)
            app.state.fallback_client = client
        try:
            resp = client.post(app.state.fallback_url, json={"question": question})
            if resp.status_code != 200:
                return None
            body = resp.json()
        except Exception as exc:
            logger.debug("fallback unavailable: %s", exc)
            return None
        if isinstance(body, dict) and body.get("status") == "answered":
            return body
        return None

    @app.post("/ask")
    async def ask(request: Request) -> Response:
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return _json_response({"error": "body must be a JSON object"}, 400)
        if not isinstance(body, dict) or not isinstance(body.get("question"), str):
            return _json_response({"error": "missing string field 'question'"}, 400)

        started = time.perf_counter()
        result = engine.answer(body["question"])
        payload = result_payload(result, "subgraph")
        from_fallback = False
        if result.status is QaStatus.NO_ANSWER and app.state.fallback_url:
            fb = query_fallback(body["question"])
            if fb is not None:
                payload = {
                    "status": "answered",
                    "answer": fb.get("answer"),
                    "entity": fb.get("entity"),
                    "predicate": fb.get("predicate"),
                    "score": fb.get("score"),
                    "latency_ms": (time.perf_counter() - started) * 1000.0,
                    "source": "fallback",
                }
                from_fallback = True
        metrics.record(payload["status"], payload["latency_ms"], from_fallback)
        return _json_response(payload, 200)

    @app.get("/healthz")
    async def healthz() -> Response:
        return _json_response({"status": "ok", "entities": engine.index.doc_count}, 200)

    @app.get("/metrics")
    async def metrics_endpoint() -> Response:
        return _json_response(metrics.snapshot(), 200)

    return app


def _json_response(payload: dict, status_code: int) -> Response:
    return Response(
        content=json.dumps(payload, ensure_ascii=False),
        status_code=status_code,
        media_type="application/json",
    )


def serve(
    index_dir: str,
    port: int,
    fallback_url: str | None = None,
    host: str = "127.0.0.1",
) -> None:
    """Load the index and serve until interrupted."""
    import uvicorn

    from .engine import load_engine

    engine = load_engine(index_dir)
    app = create_app(engine, fallback_url=fallback_url)
    logger.info("serving %d entities on %s:%d", engine.index.doc_count, host, port)
    uvicorn.run(app, host=host, port=port, log_level="warning")
