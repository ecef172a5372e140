"""Per-entity 1-hop sub-graphs and an inverted index over them.

Each indexed document is one entity's sub-graph, flattened into four
token fields (name, alias, predicate, object) and scored with
field-boosted BM25.  Sub-graphs are stored whole alongside the postings
so the online path never needs the full knowledge graph.

The on-disk format is plain JSON lines, byte-deterministic for
identical inputs: no timestamps, terms in lexicographic order, postings
by ascending doc id, aliases sorted.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .kg_store import Triple, TripleStore, normalize_label
from .mining import EntityRecord
from .text import tokenize

FORMAT_VERSION = 1
FIELDS = ("name", "alias", "predicate", "object")

_MANIFEST_NAME = "manifest.json"
_DATA_FILES = ("entities.jsonl", "subgraphs.jsonl", "postings.jsonl")


class IndexFormatError(Exception):
    """An index directory is missing, corrupt, or from another version."""


@dataclass(frozen=True)
class SubGraph:
    center: str
    triples: list[Triple]


@dataclass(frozen=True)
class IndexParams:
    k1: float = 1.2
    b: float = 0.75
    boosts: dict[str, float] = field(
        default_factory=lambda: {"name": 3.0, "alias": 2.0, "predicate": 1.0, "object": 1.0}
    )
    top_k: int = 3

    def __post_init__(self) -> None:
        if self.k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")
        if set(self.boosts) != set(FIELDS):
            raise ValueError(f"boosts must cover exactly the fields {FIELDS}")
        if any(v <= 0 for v in self.boosts.values()):
            raise ValueError("boosts must be > 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


@dataclass
class IndexDocument:
    doc_id: int
    entity: str
    field_tokens: dict[str, Counter]
    field_lengths: dict[str, int]


@dataclass
class PostingList:
    term: str
    postings: list[tuple[int, dict[str, int]]]

    @property
    def df(self) -> int:
        return len(self.postings)


def extract_subgraph(store: TripleStore, entity: str) -> SubGraph:
    """The 1-hop sub-graph of ``entity``: every directly linked triple,
    in store order.  An unknown entity yields an empty sub-graph."""
    return SubGraph(center=entity, triples=store.incident_triples(entity))


def _field_token_lists(record: EntityRecord, subgraph: SubGraph) -> dict[str, list[str]]:
    tokens: dict[str, list[str]] = {f: [] for f in FIELDS}
    tokens["name"] = [t.text for t in tokenize(record.entity)]
    for alias in sorted(record.aliases):
        tokens["alias"].extend(t.text for t in tokenize(alias))
    for triple in subgraph.triples:
        tokens["predicate"].extend(t.text for t in tokenize(triple.predicate))
        tokens["object"].extend(t.text for t in tokenize(triple.object))
    return tokens


class Index:
    """Built or loaded inverted index; immutable, safe for concurrent reads."""

    def __init__(
        self,
        params: IndexParams,
        records: list[EntityRecord],
        subgraphs: list[SubGraph],
        docs: list[IndexDocument],
        postings: dict[str, list[tuple[int, dict[str, int]]]],
        avgdl: float,
    ) -> None:
        self.params = params
        self.records = records
        self.subgraphs = subgraphs
        self.docs = docs
        self.postings = postings
        self.avgdl = avgdl
        self.doc_ids = {rec.entity: i for i, rec in enumerate(records)}
        boosts = params.boosts
        self._dl = [
            sum(boosts[f] * doc.field_lengths[f] for f in FIELDS) for doc in docs
        ]

    @property
    def doc_count(self) -> int:
        return len(self.docs)

    @property
    def term_count(self) -> int:
        return len(self.postings)

    def posting_list(self, term: str) -> PostingList | None:
        entries = self.postings.get(term)
        return PostingList(term, entries) if entries is not None else None

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def subgraph_for(self, entity: str) -> SubGraph | None:
        doc_id = self.doc_ids.get(entity)
        return self.subgraphs[doc_id] if doc_id is not None else None

    def _idf(self, df: int) -> float:
        n = self.doc_count
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def _tf_weight(self, wtf: float, doc_id: int) -> float:
        k1 = self.params.k1
        b = self.params.b
        norm = k1 * (1.0 - b + b * self._dl[doc_id] / self.avgdl)
        return wtf * (k1 + 1.0) / (wtf + norm)

    def bm25_score(self, query_tokens: Sequence[str], doc_id: int) -> float:
        """Field-boosted BM25 over distinct query tokens.

        Term frequency is the boost-weighted sum over fields, document
        length the boost-weighted token count, and idf the standard
        ln(1 + (N - df + 0.5)/(df + 0.5)).  Unknown tokens contribute 0.
        """
        if not 0 <= doc_id < self.doc_count:
            raise IndexError(f"doc_id {doc_id} out of range (0..{self.doc_count - 1})")
        boosts = self.params.boosts
        score = 0.0
        for term in dict.fromkeys(query_tokens):
            entries = self.postings.get(term)
            if not entries:
                continue
            pos = bisect_left(entries, doc_id, key=lambda e: e[0])
            if pos == len(entries) or entries[pos][0] != doc_id:
                continue
            wtf = sum(boosts[f] * tf for f, tf in entries[pos][1].items())
            score += self._idf(len(entries)) * self._tf_weight(wtf, doc_id)
        return score

    def search(self, query: str, k: int) -> list[tuple[str, float]]:
        """Top-k documents by BM25, ties broken by ascending doc id.

        Only documents sharing at least one token with the query are
        scored; zero scores never occur for those (idf is strictly
        positive), so every hit returned carries a positive score.
        """
        if k < 1 or self.doc_count == 0:
            return []
        query_tokens = [t.text for t in tokenize(normalize_label(query))]
        boosts = self.params.boosts
        scores: dict[int, float] = {}
        for term in dict.fromkeys(query_tokens):
            entries = self.postings.get(term)
            if not entries:
                continue
            idf = self._idf(len(entries))
            for doc_id, tf_by_field in entries:
                wtf = sum(boosts[f] * tf for f, tf in tf_by_field.items())
                scores[doc_id] = scores.get(doc_id, 0.0) + idf * self._tf_weight(wtf, doc_id)
        ranked = sorted(
            ((doc_id, s) for doc_id, s in scores.items() if s > 0.0),
            key=lambda item: (-item[1], item[0]),
        )
        return [(self.records[doc_id].entity, s) for doc_id, s in ranked[:k]]


def build_index(
    store: TripleStore,
    records: list[EntityRecord],
    params: IndexParams | None = None,
) -> Index:
    """Index one document per record, doc ids assigned in record order.

    Duplicate entities in ``records`` signal a caller bug and raise.
    """
    params = params or IndexParams()
    seen: set[str] = set()
    for rec in records:
        if rec.entity in seen:
            raise ValueError(f"duplicate entity in records: {rec.entity!r}")
        seen.add(rec.entity)

    subgraphs: list[SubGraph] = []
    docs: list[IndexDocument] = []
    postings: dict[str, list[tuple[int, dict[str, int]]]] = {}
    for doc_id, rec in enumerate(records):
        sg = extract_subgraph(store, rec.entity)
        subgraphs.append(sg)
        token_lists = _field_token_lists(rec, sg)
        field_tokens = {f: Counter(token_lists[f]) for f in FIELDS}
        field_lengths = {f: len(token_lists[f]) for f in FIELDS}
        docs.append(IndexDocument(doc_id, rec.entity, field_tokens, field_lengths))
        doc_terms: dict[str, dict[str, int]] = {}
        for f in FIELDS:
            for term, tf in field_tokens[f].items():
                doc_terms.setdefault(term, {})[f] = tf
        for term, tf_by_field in doc_terms.items():
            # fixed field order inside each posting entry
            ordered = {f: tf_by_field[f] for f in FIELDS if f in tf_by_field}
            postings.setdefault(term, []).append((doc_id, ordered))

    boosts = params.boosts
    if docs:
        total_dl = sum(
            sum(boosts[f] * doc.field_lengths[f] for f in FIELDS) for doc in docs
        )
        avgdl = total_dl / len(docs)
    else:
        avgdl = 0.0
    return Index(params, list(records), subgraphs, docs, postings, avgdl)


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def save_index(index: Index, directory: str) -> None:
    """Write the index as a deterministic directory of JSON files.

    Layout: ``manifest.json`` (version, stats, params, checksums),
    ``entities.jsonl`` and ``subgraphs.jsonl`` in doc-id order, and
    ``postings.jsonl`` with terms in lexicographic order.  ``avgdl`` is
    the only float on disk and is written with 17 significant digits so
    it reloads bit-exactly.
    """
    os.makedirs(directory, exist_ok=True)

    with open(os.path.join(directory, "entities.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
        for rec in index.records:
            fh.write(_dumps({
                "entity": rec.entity,
                "aliases": sorted(rec.aliases),
                "frequency": rec.frequency,
            }) + "\n")

    with open(os.path.join(directory, "subgraphs.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
        for sg in index.subgraphs:
            fh.write(_dumps({
                "center": sg.center,
                "triples": [[t.subject, t.predicate, t.object] for t in sg.triples],
            }) + "\n")

    with open(os.path.join(directory, "postings.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
        for term in sorted(index.postings):
            entries = index.postings[term]
            fh.write(_dumps({
                "term": term,
                "postings": [[doc_id, tf_by_field] for doc_id, tf_by_field in entries],
            }) + "\n")

    checksums = {name: _sha256(os.path.join(directory, name)) for name in _DATA_FILES}
    manifest = {
        "format_version": FORMAT_VERSION,
        "doc_count": index.doc_count,
        "avgdl": "@AVGDL@",
        "params": {
            "k1": index.params.k1,
            "b": index.params.b,
            "boosts": {f: index.params.boosts[f] for f in FIELDS},
            "top_k": index.params.top_k,
        },
        "counts": {
            "entities": index.doc_count,
            "triples": sum(len(sg.triples) for sg in index.subgraphs),
            "terms": index.term_count,
        },
        "checksums": checksums,
    }
    text = json.dumps(manifest, ensure_ascii=False, indent=2)
    text = text.replace('"@AVGDL@"', format(index.avgdl, ".17g"))
    with open(os.path.join(directory, _MANIFEST_NAME), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")


def load_index(directory: str) -> Index:
    """Load an index directory written by :func:`save_index`.

    Verifies the format version and the content checksums before
    parsing; any missing or tampered file raises IndexFormatError.
    """
    manifest_path = os.path.join(directory, _MANIFEST_NAME)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise IndexFormatError(f"cannot read index manifest {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"corrupt index manifest {manifest_path}: {exc}") from exc

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise IndexFormatError(
            f"unsupported index format version {version!r} (expected {FORMAT_VERSION})"
        )
    for name, expected in manifest.get("checksums", {}).items():
        path = os.path.join(directory, name)
        if not os.path.exists(path):
            raise IndexFormatError(f"index file missing: {name}")
        actual = _sha256(path)
        if actual != expected:
            raise IndexFormatError(f"checksum mismatch for {name}")

    p = manifest["params"]
    params = IndexParams(k1=p["k1"], b=p["b"], boosts=dict(p["boosts"]), top_k=p["top_k"])

    records: list[EntityRecord] = []
    with open(os.path.join(directory, "entities.jsonl"), encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            records.append(EntityRecord(row["entity"], set(row["aliases"]), row["frequency"]))

    subgraphs: list[SubGraph] = []
    with open(os.path.join(directory, "subgraphs.jsonl"), encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            subgraphs.append(SubGraph(row["center"], [Triple(*t) for t in row["triples"]]))

    postings: dict[str, list[tuple[int, dict[str, int]]]] = {}
    field_tokens: list[dict[str, Counter]] = [
        {f: Counter() for f in FIELDS} for _ in records
    ]
    with open(os.path.join(directory, "postings.jsonl"), encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            entries = [(doc_id, tf_by_field) for doc_id, tf_by_field in row["postings"]]
            postings[row["term"]] = entries
            for doc_id, tf_by_field in entries:
                for f, tf in tf_by_field.items():
                    field_tokens[doc_id][f][row["term"]] = tf

    docs = [
        IndexDocument(
            doc_id,
            rec.entity,
            field_tokens[doc_id],
            {f: sum(field_tokens[doc_id][f].values()) for f in FIELDS},
        )
        for doc_id, rec in enumerate(records)
    ]
    if len(subgraphs) != len(records) or manifest.get("doc_count") != len(records):
        raise IndexFormatError("document count mismatch between manifest and data files")
    return Index(params, records, subgraphs, docs, postings, float(manifest["avgdl"]))
