from __future__ import annotations

import pytest

from kgqa.engine import QaEngine
from kgqa.index import Index, IndexParams, build_index
from kgqa.kg_store import TripleStore
from kgqa.mining import EntityRecord

TOY_TRIPLES = [
    ("mount everest", "height", "8848 meters"),
    ("mount everest", "location", "himalayas"),
    ("mount everest", "first ascent", "1953"),
    ("k2", "height", "8611 meters"),
    ("k2", "location", "karakoram"),
    ("himalayas", "part of", "asia"),
    ("yangtze", "length", "6300 kilometers"),
    ("yangtze", "location", "china"),
]

TOY_ALIASES = {
    "everest": "mount everest",
    "qogir": "k2",
    "chang jiang": "yangtze",
}

TOY_INDEXED = ["mount everest", "k2", "himalayas", "yangtze"]


def make_toy_store() -> TripleStore:
    store = TripleStore()
    for s, p, o in TOY_TRIPLES:
        store.add_triple(s, p, o)
    store.alias_map.update(TOY_ALIASES)
    return store


def make_toy_records(store: TripleStore) -> list[EntityRecord]:
    by_entity: dict[str, set[str]] = {e: {e} for e in TOY_INDEXED}
    for alias, canonical in store.alias_map.items():
        by_entity[canonical].add(alias)
    return [EntityRecord(e, by_entity[e], 0) for e in TOY_INDEXED]


@pytest.fixture
def toy_store() -> TripleStore:
    return make_toy_store()


@pytest.fixture
def toy_records(toy_store: TripleStore) -> list[EntityRecord]:
    return make_toy_records(toy_store)


@pytest.fixture
def toy_index(toy_store: TripleStore, toy_records: list[EntityRecord]) -> Index:
    return build_index(toy_store, toy_records, IndexParams())


@pytest.fixture
def toy_engine(toy_index: Index) -> QaEngine:
    return QaEngine(toy_index, predicate_aliases={"altitude": "height"})
