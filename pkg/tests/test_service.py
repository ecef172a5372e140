from __future__ import annotations

import httpx
import pytest
from fastapi.testclient import TestClient

from kgqa.engine import QaEngine
from kgqa.service import (
    LATENCY_BUCKET_BOUNDS_MS,
    ServiceMetrics,
    create_app,
    result_payload,
)

RESPONSE_KEYS = {
    "status", "answer", "entity", "predicate", "score", "latency_ms", "source",
}


@pytest.fixture
def client(toy_engine: QaEngine) -> TestClient:
    return TestClient(create_app(toy_engine))


def test_healthz_reports_entities(client: TestClient) -> None:
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "entities": 4}


def test_ask_answered_schema(client: TestClient) -> None:
    resp = client.post("/ask", json={"question": "what is the height of everest"})
    assert resp.status_code == 200
    body = resp.json()
    assert set(body) == RESPONSE_KEYS
    assert body["status"] == "answered"
    assert body["answer"] == "The height of mount everest is 8848 meters."
    assert body["entity"] == "mount everest"
    assert body["predicate"] == "height"
    assert body["score"] == 1.0
    assert body["source"] == "subgraph"
    assert body["latency_ms"] >= 0


def test_ask_no_answer_and_multi_entity(client: TestClient) -> None:
    body = client.post("/ask", json={"question": "hello there"}).json()
    assert body["status"] == "no_answer"
    assert body["answer"] is None
    body = client.post("/ask", json={"question": "is everest taller than k2"}).json()
    assert body["status"] == "multi_entity"
    assert body["source"] == "subgraph"


def test_ask_rejects_malformed_bodies(client: TestClient) -> None:
    assert client.post("/ask", content=b"not json").status_code == 400
    assert client.post("/ask", json={"q": "hi"}).status_code == 400
    assert client.post("/ask", json={"question": 42}).status_code == 400
    assert client.post("/ask", json=["question"]).status_code == 400
    assert client.post("/ask", json={"question": None}).status_code == 400


def test_metrics_conservation(toy_engine: QaEngine) -> None:
    client = TestClient(create_app(toy_engine))
    questions = [
        "what is the height of everest",
        "what is the height of k2",
        "is everest taller than k2",
        "hello there",
        "what a lovely day",
    ]
    for q in questions:
        assert client.post("/ask", json={"question": q}).status_code == 200
    # malformed requests must not be counted
    client.post("/ask", content=b"broken")
    snap = client.get("/metrics").json()
    assert snap["total"] == 5
    assert snap["answered"] == 2
    assert snap["multi_entity"] == 1
    assert snap["no_answer"] == 2
    assert snap["fallback_answered"] == 0
    histogram_total = sum(b["count"] for b in snap["latency_histogram"])
    assert histogram_total == snap["total"]
    assert snap["latency_histogram"][-1]["le_ms"] is None


def test_metrics_histogram_buckets() -> None:
    metrics = ServiceMetrics()
    metrics.record("answered", 0.4)
    metrics.record("answered", 3.0)
    metrics.record("no_answer", 75.0)
    metrics.record("answered", 1e9)
    snap = metrics.snapshot()
    by_bound = {b["le_ms"]: b["count"] for b in snap["latency_histogram"]}
    assert by_bound[0.5] == 1
    assert by_bound[5] == 1
    assert by_bound[100] == 1
    assert by_bound[None] == 1
    assert snap["latency_p50_ms"] in LATENCY_BUCKET_BOUNDS_MS


def test_fallback_answers_local_miss(toy_engine: QaEngine) -> None:
    def fake_fallback(request: httpx.Request) -> httpx.Response:
        return httpx.Response(
            200,
            json={
                "status": "answered",
                "answer": "42.",
                "entity": None,
                "predicate": None,
                "score": 0.5,
                "source": "subgraph",
            },
        )

    client = TestClient(
        create_app(
            toy_engine,
            fallback_url="http://fallback.test/ask",
            fallback_client=httpx.Client(transport=httpx.MockTransport(fake_fallback)),
        )
    )
    body = client.post("/ask", json={"question": "what is six times seven"}).json()
    assert body["status"] == "answered"
    assert body["answer"] == "42."
    assert body["source"] == "fallback"
    snap = client.get("/metrics").json()
    assert snap["fallback_answered"] == 1
    assert snap["answered"] == 1


def test_fallback_skipped_when_answered_locally(toy_engine: QaEngine) -> None:
    calls = []

    def fake_fallback(request: httpx.Request) -> httpx.Response:
        calls.append(request.url)
        return httpx.Response(200, json={"status": "answered", "answer": "x"})

    client = TestClient(
        create_app(
            toy_engine,
            fallback_url="http://fallback.test/ask",
            fallback_client=httpx.Client(transport=httpx.MockTransport(fake_fallback)),
        )
    )
    body = client.post("/ask", json={"question": "what is the height of k2"}).json()
    assert body["source"] == "subgraph"
    assert calls == []
    # multi-entity responses are also not forwarded
    body = client.post("/ask", json={"question": "is everest taller than k2"}).json()
    assert body["status"] == "multi_entity"
    assert calls == []


def test_fallback_no_answer_passes_through(toy_engine: QaEngine) -> None:
    def fake_fallback(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"status": "no_answer", "answer": None})

    client = TestClient(
        create_app(
            toy_engine,
            fallback_url="http://fallback.test/ask",
            fallback_client=httpx.Client(transport=httpx.MockTransport(fake_fallback)),
        )
    )
    body = client.post("/ask", json={"question": "what is six times seven"}).json()
    assert body["status"] == "no_answer"
    assert body["source"] == "subgraph"


def test_fallback_unreachable_degrades_to_local(toy_engine: QaEngine) -> None:
    def raise_error(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectTimeout("fallback down")

    client = TestClient(
        create_app(
            toy_engine,
            fallback_url="http://fallback.test/ask",
            fallback_client=httpx.Client(transport=httpx.MockTransport(raise_error)),
        )
    )
    resp = client.post("/ask", json={"question": "what is six times seven"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "no_answer"
    assert body["source"] == "subgraph"
    snap = client.get("/metrics").json()
    assert snap["no_answer"] == 1
    assert snap["fallback_answered"] == 0


def test_fallback_http_error_degrades(toy_engine: QaEngine) -> None:
    def server_error(request: httpx.Request) -> httpx.Response:
        return httpx.Response(500, text="boom")

    client = TestClient(
        create_app(
            toy_engine,
            fallback_url="http://fallback.test/ask",
            fallback_client=httpx.Client(transport=httpx.MockTransport(server_error)),
        )
    )
    body = client.post("/ask", json={"question": "what is six times seven"}).json()
    assert body["status"] == "no_answer"
    assert body["source"] == "subgraph"


def test_cli_payload_matches_service(toy_engine: QaEngine) -> None:
    client = TestClient(create_app(toy_engine))
    question = "what is the height of everest"
    service_body = client.post("/ask", json={"question": question}).json()
    cli_body = result_payload(toy_engine.answer(question), source="subgraph")
    for key in RESPONSE_KEYS - {"latency_ms"}:
        assert cli_body[key] == service_body[key]


def test_cors_headers_present(client: TestClient) -> None:
    resp = client.post(
        "/ask",
        json={"question": "hello"},
        headers={"Origin": "http://localhost:5173"},
    )
    assert resp.headers.get("access-control-allow-origin") == "*"
