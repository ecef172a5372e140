"""Offline mining of high-frequency entities from question logs.

The pipeline is: normalize and deduplicate the raw log, extract entity
mentions per question (dictionary matches plus pattern captures that
ground to a known label), count per-question frequencies, and keep the
entities above the frequency gate.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .kg_store import TripleStore, normalize_label
from .patterns import QuestionPattern, capture_entity
from .text import Dictionary, recognize_entities, tokenize


@dataclass
class MiningConfig:
    min_frequency: int = 10
    capture_patterns: list[QuestionPattern] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.min_frequency < 1:
            raise ValueError("min_frequency must be >= 1")


@dataclass
class EntityRecord:
    entity: str
    aliases: set[str]
    frequency: int


def dedup_questions(questions: Iterable[str]) -> list[str]:
    """Normalize all questions and drop exact duplicates, keeping first
    occurrence order.  Single pass; memory grows with unique questions."""
    seen: set[str] = set()
    unique: list[str] = []
    for raw in questions:
        q = normalize_label(raw)
        if q and q not in seen:
            seen.add(q)
            unique.append(q)
    return unique


def extract_question_entities(
    question: str,
    dictionary: Dictionary,
    config: MiningConfig,
    store: TripleStore,
) -> set[str]:
    """Canonical labels mentioned in one normalized question.

    Union of dictionary recognition and capture-pattern extraction; a
    captured phrase only counts if it is a knowledge-graph label itself
    or an alias of one, since ungrounded mentions have no sub-graph.
    """
    found = {m.entity for m in recognize_entities(question, dictionary)}
    if config.capture_patterns:
        tokens = tokenize(question)
        for pattern in config.capture_patterns:
            captured = capture_entity(question, tokens, pattern)
            if not captured:
                continue
            if captured in store.entity_labels:
                found.add(captured)
            else:
                canonical = store.alias_map.get(captured)
                if canonical is not None:
                    found.add(canonical)
    return found


def count_frequencies(
    questions: Iterable[str],
    dictionary: Dictionary,
    config: MiningConfig,
    store: TripleStore,
) -> dict[str, int]:
    """Per-entity count of distinct questions mentioning it.

    Counting is per question, not per occurrence, so a question that
    repeats an entity contributes once.  Callers pass deduplicated
    questions; duplicates would otherwise inflate the counts.
    """
    counts: Counter[str] = Counter()
    for question in questions:
        counts.update(extract_question_entities(question, dictionary, config, store))
    return dict(counts)


def select_high_frequency(
    counts: dict[str, int],
    config: MiningConfig,
    store: TripleStore,
) -> list[EntityRecord]:
    """Entities whose count strictly exceeds the gate, most frequent
    first (ties by ascending label).

    Each record carries every alias mapping to the entity plus the
    canonical label itself.
    """
    aliases_by_entity: dict[str, set[str]] = defaultdict(set)
    for alias, canonical in store.alias_map.items():
        aliases_by_entity[canonical].add(alias)
    selected = [(e, c) for e, c in counts.items() if c > config.min_frequency]
    selected.sort(key=lambda ec: (-ec[1], ec[0]))
    return [
        EntityRecord(entity=e, aliases=aliases_by_entity[e] | {e}, frequency=c)
        for e, c in selected
    ]


def dump_entity_frequencies(records: Iterable[EntityRecord], path: str) -> None:
    """Debug output: ``entity<TAB>frequency`` per line, selection order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(f"{rec.entity}\t{rec.frequency}\n")
