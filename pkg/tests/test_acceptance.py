"""Acceptance gate: every promise the library makes, checked end to end
at its stated scale and tolerance.  Each test finishes by printing one
[PASS] line; a failure anywhere here means the contract is broken."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import pytest

from kgqa.bench import run_bench
from kgqa.engine import QaEngine
from kgqa.index import Index, IndexParams, build_index, extract_subgraph, save_index, load_index
from kgqa.kg_store import TripleStore, store_from_triples
from kgqa.mining import MiningConfig, dedup_questions, select_high_frequency
from kgqa.synth import (
    SynthKg,
    chitchat_lines,
    factoid_question,
    generate_kg,
    judgment_question,
    records_for_all,
)
from kgqa.text import tokenize

from .conftest import make_toy_records, make_toy_store
from .test_index import oracle_bm25

DESK_SEED = 20260823


@dataclass
class DeskScale:
    kg: SynthKg
    index: Index
    engine: QaEngine
    build_seconds: float


@pytest.fixture(scope="module")
def desk() -> DeskScale:
    started = time.perf_counter()
    kg = generate_kg(n_entities=10_000, seed=DESK_SEED)
    index = build_index(kg.store, records_for_all(kg))
    engine = QaEngine(index)
    return DeskScale(kg, index, engine, time.perf_counter() - started)


@pytest.fixture(scope="module")
def medium_engine() -> QaEngine:
    kg = generate_kg(n_entities=500, seed=77, n_aliases=50)
    return QaEngine(build_index(kg.store, records_for_all(kg)))


def test_round_trip_factoid_accuracy(desk: DeskScale) -> None:
    assert len(desk.kg.entities) == 10_000
    assert 80_000 <= len(desk.kg.store) <= 120_000
    started = time.perf_counter()
    total = 0
    correct = 0
    for t in desk.kg.store.triples:
        result = desk.engine.answer(factoid_question(t))
        total += 1
        if (
            result.status.value == "answered"
            and result.answer_text == f"The {t.predicate} of {t.subject} is {t.object}."
        ):
            correct += 1
    elapsed = time.perf_counter() - started
    assert correct == total
    assert elapsed + desk.build_seconds < 60.0
    print(
        f"[PASS] round-trip factoid accuracy: {correct}/{total} answered correctly "
        f"in {elapsed:.1f}s (+{desk.build_seconds:.1f}s build)"
    )


def test_coverage_on_mixed_workload(desk: DeskScale) -> None:
    attr = set(desk.kg.attr_predicates)
    factoids = [factoid_question(t) for t in desk.kg.store.triples[:300]]
    judgments = []
    for t in desk.kg.store.triples:
        if t.predicate in attr:
            judgments.append(judgment_question(t, truthful=len(judgments) % 2 == 0))
            if len(judgments) == 300:
                break
    answerable = factoids + judgments
    assert len(answerable) == 600
    workload = answerable + chitchat_lines(400, seed=5)

    report, _ = run_bench(desk.engine, workload)
    assert report.total == 1000
    assert report.coverage == 0.600

    empty_engine = QaEngine(build_index(desk.kg.store, []))
    empty_report, _ = run_bench(empty_engine, workload)
    assert empty_report.coverage == 0.000
    assert empty_report.answered == 0
    print(
        "[PASS] coverage on mixed workload: 0.600 with the index, "
        "0.000 with it emptied"
    )


def test_latency_budget(desk: DeskScale) -> None:
    rng = random.Random(7)
    questions = [
        factoid_question(t) for t in rng.sample(desk.kg.store.triples, 10_200)
    ]
    report, _ = run_bench(desk.engine, questions, warmup=200)
    assert report.total >= 10_000
    assert report.latency_p50_ms <= 20.0
    assert report.latency_p99_ms <= 50.0
    print(
        f"[PASS] latency budget: p50 {report.latency_p50_ms:.3f} ms <= 20 ms, "
        f"p99 {report.latency_p99_ms:.3f} ms <= 50 ms over {report.total} questions"
    )


def test_subgraph_oracle_equivalence() -> None:
    rng = random.Random(4242)
    started = time.perf_counter()
    checked = 0
    for _ in range(100):
        n_entities = rng.randrange(2, 51)
        labels = [f"entity {i}" for i in range(n_entities)]
        store = TripleStore()
        for _ in range(rng.randrange(1, 301)):
            store.add_triple(
                rng.choice(labels),
                f"rel{rng.randrange(8)}",
                rng.choice(labels + [f"lit {rng.randrange(30)}"]),
            )
        for entity in sorted(store.entity_labels):
            expected = [
                t for t in store.triples
                if t.subject == entity or t.object == entity
            ]
            got = extract_subgraph(store, entity)
            assert got.center == entity
            assert got.triples == expected
            checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    print(
        f"[PASS] sub-graph oracle equivalence: {checked} sub-graphs across "
        f"100 random KGs in {elapsed:.2f}s"
    )


def test_bm25_scoring_oracle() -> None:
    store = store_from_triples([
        ("red fox", "habitat", "boreal forest"),
        ("red fox", "diet", "small mammals"),
        ("arctic fox", "habitat", "tundra"),
        ("arctic fox", "predator", "polar bear"),
        ("polar bear", "habitat", "sea ice"),
    ])
    from kgqa.mining import EntityRecord

    records = [
        EntityRecord("red fox", {"red fox", "vulpes"}, 0),
        EntityRecord("arctic fox", {"arctic fox"}, 0),
        EntityRecord("polar bear", {"polar bear", "ice bear"}, 0),
    ]
    index = build_index(store, records, IndexParams())
    vocab = [
        "fox", "red", "arctic", "polar", "bear", "habitat", "diet", "tundra",
        "forest", "ice", "sea", "mammals", "vulpes", "boreal", "small",
        "predator", "unknownzz",
    ]
    rng = random.Random(99)
    worst = 0.0
    for _ in range(1000):
        query = " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 8)))
        terms = [t.text for t in tokenize(query)]
        for doc_id in range(index.doc_count):
            delta = abs(index.bm25_score(terms, doc_id) - oracle_bm25(index, query, doc_id))
            worst = max(worst, delta)
            assert delta <= 1e-9

    solo = build_index(
        store_from_triples([("solo", "rel", "target")]),
        [EntityRecord("solo", {"solo"}, 0)],
    )
    analytic_delta = abs(solo.bm25_score(["target"], 0) - math.log(4.0 / 3.0))
    assert analytic_delta <= 1e-12
    print(
        f"[PASS] BM25 scoring oracle: worst delta {worst:.2e} <= 1e-9 over "
        f"1000 queries x 3 docs; single-doc analytic delta {analytic_delta:.2e} <= 1e-12"
    )


def test_mining_properties() -> None:
    rng = random.Random(31)
    words = ["what", "is", "the", "height", "of", "everest", "k2", "hello", "ok"]
    for _ in range(1000):
        log = []
        for _ in range(rng.randrange(0, 50)):
            q = " ".join(rng.choice(words) for _ in range(rng.randrange(0, 7)))
            if rng.random() < 0.4:
                q = q.upper() + "   "
            log.append(q)
        deduped = dedup_questions(log)
        assert dedup_questions(deduped) == deduped
        seen: list[str] = []
        for raw in log:
            norm = " ".join(raw.casefold().split())
            if norm and norm not in seen:
                seen.append(norm)
        assert deduped == seen

    store = store_from_triples([(f"e{i}", "p", "x") for i in range(1, 26)])
    counts = {f"e{i}": i for i in range(1, 26)}
    previous: set[str] | None = None
    for gate in range(1, 21):
        config = MiningConfig(min_frequency=gate)
        selected = {r.entity for r in select_high_frequency(counts, config, store)}
        if previous is not None:
            assert selected < previous
        previous = selected

    default = MiningConfig()
    assert default.min_frequency == 10
    at_gate = select_high_frequency({"e10": 10, "e11": 11}, default, store)
    assert [r.entity for r in at_gate] == ["e11"]
    print(
        "[PASS] mining properties: dedup idempotent and order-preserving on "
        "1000 logs; gate chain decreasing for 1..20; frequency 10 excluded at "
        "the default gate"
    )


def test_persistence_determinism(tmp_path) -> None:
    dirs = []
    for name in ["first", "second"]:
        kg = generate_kg(n_entities=500, seed=300, n_aliases=40)
        index = build_index(kg.store, records_for_all(kg))
        directory = tmp_path / name
        save_index(index, str(directory))
        dirs.append(directory)
    for file in ["manifest.json", "entities.jsonl", "subgraphs.jsonl", "postings.jsonl"]:
        assert (dirs[0] / file).read_bytes() == (dirs[1] / file).read_bytes()

    kg = generate_kg(n_entities=500, seed=300, n_aliases=40)
    built = build_index(kg.store, records_for_all(kg))
    loaded = load_index(str(dirs[0]))
    rng = random.Random(13)
    vocab = (
        [w for name in kg.entities[:50] for w in name.split()]
        + kg.rel_predicates
        + kg.attr_predicates
        + ["meters", "unknownzz"]
    )
    for _ in range(100):
        query = " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 6)))
        assert built.search(query, 5) == loaded.search(query, 5)
    print(
        "[PASS] persistence determinism: byte-identical directories from two "
        "builds; save/load search parity on 100 random queries"
    )


def test_routing_totality_fuzz(medium_engine: QaEngine) -> None:
    rng = random.Random(616)
    statuses = {"answered", "no_answer", "multi_entity"}
    started = time.perf_counter()
    for _ in range(100_000):
        length = rng.randrange(0, 60)
        chars = []
        for _ in range(length):
            cp = rng.randrange(0, 0x110000)
            if 0xD800 <= cp <= 0xDFFF:
                cp = rng.randrange(0, 0xD800)
            chars.append(chr(cp))
        result = medium_engine.answer("".join(chars))
        assert result.status.value in statuses
    elapsed = time.perf_counter() - started
    print(
        f"[PASS] routing totality fuzz: 100000 random UTF-8 questions, no "
        f"crash, one status each, in {elapsed:.1f}s"
    )


def test_primary_suite_standalone_sanity() -> None:
    # the acceptance fixtures never touch the optional frontend: a fresh
    # toy engine must work with nothing but this package installed
    store = make_toy_store()
    engine = QaEngine(build_index(store, make_toy_records(store)))
    assert engine.answer("what is the height of everest").status.value == "answered"
