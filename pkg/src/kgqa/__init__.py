"""Knowledge-graph question answering: store, mining, index, engine,
service, and benchmarking."""

from .engine import QaEngine, QaResult, QaStatus, load_engine, resolve_predicate
from .index import Index, IndexParams, SubGraph, build_index, load_index, save_index
from .kg_store import Triple, TripleStore, load_aliases, load_triples, normalize_label
from .mining import EntityRecord, MiningConfig, dedup_questions, select_high_frequency
from .patterns import PatternKind, QuestionPattern, match_pattern, parse_patterns
from .text import Dictionary, build_dictionary, recognize_entities, tokenize

__version__ = "0.1.0"

__all__ = [
    "Dictionary",
    "EntityRecord",
    "Index",
    "IndexParams",
    "MiningConfig",
    "PatternKind",
    "QaEngine",
    "QaResult",
    "QaStatus",
    "QuestionPattern",
    "SubGraph",
    "Triple",
    "TripleStore",
    "build_dictionary",
    "build_index",
    "dedup_questions",
    "load_aliases",
    "load_engine",
    "load_index",
    "load_triples",
    "match_pattern",
    "normalize_label",
    "parse_patterns",
    "recognize_entities",
    "resolve_predicate",
    "save_index",
    "select_high_frequency",
    "tokenize",
]
