"""Triple store: load a knowledge graph from flat files and answer
incidence queries over it.

The store is built once offline and treated as immutable afterwards;
all lookups are plain dict reads and safe for concurrent use.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, NamedTuple

logger = logging.getLogger(__name__)


class LoadError(Exception):
    """A data file could not be read at all (I/O failure, bad encoding)."""


def normalize_label(raw: str) -> str:
    """Case-fold, strip, and collapse internal whitespace runs to one space.

    Used for every label, alias, and query so that matching stays
    consistent across the offline and online paths.  May return "" for
    whitespace-only input; callers reject empty labels.
    """
    return " ".join(raw.casefold().split())


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: str


class TripleStore:
    """All triples of the knowledge graph plus incidence and alias maps.

    ``triples`` keeps deduplicated input order.  ``warnings`` tallies
    skipped input lines (malformed rows, empty fields, aliases pointing
    at unknown entities).
    """

    def __init__(self) -> None:
        self.triples: list[Triple] = []
        self.by_subject: dict[str, list[int]] = defaultdict(list)
        self.by_object: dict[str, list[int]] = defaultdict(list)
        self.alias_map: dict[str, str] = {}
        self.entity_labels: set[str] = set()
        self.warnings = 0
        self._seen: set[Triple] = set()

    def __len__(self) -> int:
        return len(self.triples)

    def add_triple(self, subject: str, predicate: str, object: str) -> bool:
        """Normalize and insert one triple.

        Returns False for duplicates.  Raises ValueError if any field is
        empty after normalization (file loaders pre-filter and count
        those as warnings instead).
        """
        t = Triple(normalize_label(subject), normalize_label(predicate), normalize_label(object))
        if not t.subject or not t.predicate or not t.object:
            raise ValueError(f"empty field in triple {t!r}")
        if t in self._seen:
            return False
        pos = len(self.triples)
        self.triples.append(t)
        self._seen.add(t)
        self.by_subject[t.subject].append(pos)
        self.by_object[t.object].append(pos)
        self.entity_labels.add(t.subject)
        self.entity_labels.add(t.object)
        return True

    def incident_triples(self, entity: str) -> list[Triple]:
        """Every triple whose subject or object equals ``entity``, in store
        order, each at most once (self-loops are not double-counted)."""
        positions = set(self.by_subject.get(entity, ()))
        positions.update(self.by_object.get(entity, ()))
        return [self.triples[i] for i in sorted(positions)]

    def predicate_labels(self) -> set[str]:
        return {t.predicate for t in self.triples}

    def surface_forms(self) -> dict[str, str]:
        """Surface -> canonical map covering every entity label and every
        loaded alias.  A label that is also someone else's alias resolves
        to itself."""
        forms = dict(self.alias_map)
        for label in sorted(self.entity_labels):
            forms[label] = label
        return forms


def load_triples(path: str) -> TripleStore:
    """Load a UTF-8 ``subject<TAB>predicate<TAB>object`` file.

    Lines with a wrong field count or any empty field (after
    normalization) are skipped and counted in ``store.warnings``.
    Duplicate triples are silently merged.
    """
    store = TripleStore()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read triple file {path}: {exc}") from exc
    with fh:
        for line in fh:
            parts = line.rstrip("\r\n").split("\t")
            if len(parts) != 3:
                store.warnings += 1
                continue
            s, p, o = (normalize_label(x) for x in parts)
            if not s or not p or not o:
                store.warnings += 1
                continue
            store.add_triple(s, p, o)
    logger.info("loaded %d triples from %s (%d lines skipped)", len(store), path, store.warnings)
    return store


def load_aliases(path: str, store: TripleStore) -> TripleStore:
    """Extend ``store.alias_map`` from a UTF-8 ``entity<TAB>alias`` file.

    Aliases whose canonical label never occurs in the graph are skipped
    and counted as warnings, so the invariant "every alias resolves to a
    known label" holds by construction.
    """
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read alias file {path}: {exc}") from exc
    with fh:
        for line in fh:
            parts = line.rstrip("\r\n").split("\t")
            if len(parts) != 2:
                store.warnings += 1
                continue
            entity = normalize_label(parts[0])
            alias = normalize_label(parts[1])
            if not entity or not alias:
                store.warnings += 1
                continue
            if entity not in store.entity_labels:
                store.warnings += 1
                continue
            store.alias_map[alias] = entity
    return store


def dump_triples(store: TripleStore, path: str) -> None:
    """Write the store's triples back out in the input file format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in store.triples:
            fh.write(f"{t.subject}\t{t.predicate}\t{t.object}\n")


def store_from_triples(rows: Iterable[tuple[str, str, str]]) -> TripleStore:
    """Build a store directly from (subject, predicate, object) rows."""
    store = TripleStore()
    for s, p, o in rows:
        store.add_triple(s, p, o)
    return store
