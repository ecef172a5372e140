"""Online question answering pipeline.

One call runs: normalize, recognize entities, route by entity count,
recall the sub-graph (direct lookup first, index search as fallback),
match a question pattern, resolve the predicate inside the sub-graph,
and render a templated answer.  The engine deliberately holds no
reference to the full triple store; every answer is generated from the
recalled sub-graph alone.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .index import Index, SubGraph
from .kg_store import normalize_label
from .mining import EntityRecord
from .patterns import (
    PatternKind,
    PatternMatch,
    QuestionPattern,
    default_patterns,
    load_patterns,
    match_pattern,
)
from .text import Dictionary, build_dictionary, recognize_entities, tokenize

logger = logging.getLogger(__name__)

# surface phrase -> predicate label; consulted between exact match and
# fuzzy fallback when resolving a predicate.
PredicateAliasTable = Mapping[str, str]

JACCARD_THRESHOLD = 0.5

DIRECT_HIT_SCORE = 1.0


class QaStatus(str, Enum):
    ANSWERED = "answered"
    NO_ANSWER = "no_answer"
    MULTI_ENTITY = "multi_entity"


@dataclass(frozen=True)
class QaResult:
    status: QaStatus
    answer_text: str | None = None
    entity: str | None = None
    predicate: str | None = None
    score: float | None = None
    latency_us: int = 0


def load_predicate_aliases(path: str) -> dict[str, str]:
    """Load a ``phrase<TAB>predicate`` file; both sides are normalized.
    Malformed lines are logged and skipped."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\r\n").split("\t")
            if not line.strip():
                continue
            if len(parts) != 2:
                logger.warning("%s:%d: expected phrase<TAB>predicate, skipping", path, lineno)
                continue
            phrase = normalize_label(parts[0])
            predicate = normalize_label(parts[1])
            if phrase and predicate:
                table[phrase] = predicate
    return table


def resolve_predicate(
    phrase: str,
    subgraph: SubGraph,
    aliases: PredicateAliasTable,
) -> str | None:
    """Map a captured predicate phrase to a predicate of the sub-graph.

    Tried in order: exact label match, alias-table lookup (only if the
    aliased predicate occurs here), then token-set Jaccard similarity
    with a 0.5 acceptance threshold (ties go to the lexicographically
    smallest label).
    """
    norm = normalize_label(phrase)
    if not norm:
        return None
    present = {t.predicate for t in subgraph.triples}
    if norm in present:
        return norm
    aliased = aliases.get(norm)
    if aliased is not None and aliased in present:
        return aliased
    phrase_tokens = {t.text for t in tokenize(norm)}
    if not phrase_tokens:
        return None
    best: str | None = None
    best_sim = 0.0
    for predicate in sorted(present):
        pred_tokens = {t.text for t in tokenize(predicate)}
        union = phrase_tokens | pred_tokens
        if not union:
            continue
        sim = len(phrase_tokens & pred_tokens) / len(union)
        if sim > best_sim:
            best, best_sim = predicate, sim
    if best_sim >= JACCARD_THRESHOLD:
        return best
    return None


def generate_answer(
    match: PatternMatch,
    subgraph: SubGraph,
    predicate: str,
    record: EntityRecord,
) -> str | None:
    """Render the answer from the sub-graph's triples.

    Factoid: prefer outgoing (center, predicate, o) triples, first in
    store order; fall back to incoming (s, predicate, center).  Judgment
    needs an outgoing triple and compares its object with the asserted
    one.  Returns None when no triple points the required way.
    """
    center = subgraph.center
    name = record.entity
    outgoing = next(
        (t for t in subgraph.triples if t.subject == center and t.predicate == predicate),
        None,
    )
    if match.pattern.kind is PatternKind.FACTOID:
        if outgoing is not None:
            return f"The {predicate} of {name} is {outgoing.object}."
        incoming = next(
            (t for t in subgraph.triples if t.object == center and t.predicate == predicate),
            None,
        )
        if incoming is not None:
            return f"The {predicate} of {incoming.subject} is {name}."
        return None
    # judgment
    if outgoing is None:
        return None
    asserted = normalize_label(match.object_phrase or "")
    if normalize_label(outgoing.object) == asserted:
        return f"Yes, the {predicate} of {name} is {outgoing.object}."
    return f"No, the {predicate} of {name} is {outgoing.object}."


class QaEngine:
    """Loaded engine state: dictionary, index with sub-graphs, patterns,
    and predicate aliases.  Immutable after construction; ``answer`` is
    safe for unrestricted concurrent calls."""

    def __init__(
        self,
        index: Index,
        patterns: Sequence[QuestionPattern] | None = None,
        predicate_aliases: PredicateAliasTable | None = None,
        dictionary: Dictionary | None = None,
    ) -> None:
        self.index = index
        self.patterns = list(patterns) if patterns is not None else default_patterns()
        self.predicate_aliases = dict(predicate_aliases or {})
        if dictionary is None:
            surfaces: dict[str, str] = {}
            for rec in index.records:
                for alias in sorted(rec.aliases):
                    surfaces[alias] = rec.entity
            dictionary = build_dictionary(surfaces)
        self.dictionary = dictionary

    def answer(self, question: str) -> QaResult:
        """Answer one raw question; never raises on arbitrary input."""
        started = time.perf_counter_ns()

        def done(result: QaResult) -> QaResult:
            latency_us = (time.perf_counter_ns() - started) // 1000
            return QaResult(
                status=result.status,
                answer_text=result.answer_text,
                entity=result.entity,
                predicate=result.predicate,
                score=result.score,
                latency_us=int(latency_us),
            )

        text = normalize_label(question)
        matches = recognize_entities(text, self.dictionary)
        distinct = {m.entity for m in matches}
        if not distinct:
            return done(QaResult(QaStatus.NO_ANSWER))
        if len(distinct) > 1:
            return done(QaResult(QaStatus.MULTI_ENTITY))

        recognized = next(iter(distinct))
        if recognized in self.index.doc_ids:
            candidates = [(recognized, DIRECT_HIT_SCORE)]
        else:
            candidates = self.index.search(text, self.index.params.top_k)

        tokens = tokenize(text)
        for entity, score in candidates:
            doc_id = self.index.doc_ids[entity]
            subgraph = self.index.subgraphs[doc_id]
            record = self.index.records[doc_id]
            for entity_match in matches:
                pattern_match = match_pattern(text, tokens, entity_match, self.patterns)
                if pattern_match is None:
                    continue
                predicate = resolve_predicate(
                    pattern_match.predicate_phrase, subgraph, self.predicate_aliases
                )
                if predicate is None:
                    continue
                answer_text = generate_answer(pattern_match, subgraph, predicate, record)
                if answer_text is not None:
                    return done(
                        QaResult(QaStatus.ANSWERED, answer_text, entity, predicate, score)
                    )
        return done(QaResult(QaStatus.NO_ANSWER, entity=recognized))


def load_engine(index_dir: str) -> QaEngine:
    """Build an engine from an index directory.

    Uses ``patterns.tsv`` and ``predicate_aliases.tsv`` inside the
    directory when present (the build CLI writes them), otherwise the
    packaged default patterns and an empty alias table.
    """
    from .index import load_index

    index = load_index(index_dir)
    patterns_path = os.path.join(index_dir, "patterns.tsv")
    patterns = load_patterns(patterns_path) if os.path.exists(patterns_path) else None
    aliases_path = os.path.join(index_dir, "predicate_aliases.tsv")
    aliases = load_predicate_aliases(aliases_path) if os.path.exists(aliases_path) else None
    return QaEngine(index, patterns=patterns, predicate_aliases=aliases)
