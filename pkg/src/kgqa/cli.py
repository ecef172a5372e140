"""Command line interface.

Subcommands cover the full lifecycle: ``synth`` writes a demo corpus,
``build-index`` mines entities and persists the index, ``ask`` answers
one question, ``serve`` exposes the HTTP API, and ``bench`` measures
latency, optionally rendering report figures next to the CSV output.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .bench import run_bench, run_http_bench
from .engine import load_engine, load_predicate_aliases
from .index import IndexParams, build_index, save_index
from .kg_store import TripleStore, load_aliases, load_triples
from .mining import (
    EntityRecord,
    MiningConfig,
    count_frequencies,
    dedup_questions,
    dump_entity_frequencies,
    select_high_frequency,
)
from .patterns import default_patterns, load_patterns
from .text import build_dictionary

LOG_LEVEL_ENV = "KGQA_LOG_LEVEL"

logger = logging.getLogger(__name__)


def _setup_logging() -> None:
    name = os.environ.get(LOG_LEVEL_ENV, "INFO").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _records_for_store(store: TripleStore) -> list[EntityRecord]:
    """One record per entity label, frequency gate bypassed."""
    aliases_by_entity: dict[str, set[str]] = {e: {e} for e in store.entity_labels}
    for alias, canonical in store.alias_map.items():
        if canonical in aliases_by_entity:
            aliases_by_entity[canonical].add(alias)
    return [
        EntityRecord(entity=e, aliases=aliases_by_entity[e], frequency=0)
        for e in sorted(store.entity_labels)
    ]


def cmd_build_index(args: argparse.Namespace) -> int:
    store = load_triples(args.triples)
    if args.aliases:
        load_aliases(args.aliases, store)
    logger.info(
        "loaded %d triples, %d entities, %d aliases, %d warnings",
        len(store), len(store.entity_labels), len(store.alias_map), store.warnings,
    )
    patterns = load_patterns(args.patterns) if args.patterns else default_patterns()

    if args.logs:
        questions = dedup_questions(_read_lines(args.logs))
        dictionary = build_dictionary(store.surface_forms())
        config = MiningConfig(min_frequency=args.min_freq, capture_patterns=patterns)
        counts = count_frequencies(questions, dictionary, config, store)
        records = select_high_frequency(counts, config, store)
        logger.info(
            "mined %d questions -> %d entities above frequency %d",
            len(questions), len(records), args.min_freq,
        )
    elif args.all_entities:
        records = _records_for_store(store)
    else:
        logger.error("either --logs or --all-entities is required")
        return 2
    if not records:
        logger.error("no entities selected; nothing to index")
        return 1

    index = build_index(store, records, IndexParams())
    save_index(index, args.out)
    # Sidecar files make the directory self-contained for ask/serve.
    with open(os.path.join(args.out, "patterns.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        for p in patterns:
            fh.write(f"{p.kind.value}\t{p.template}\n")
    if args.predicate_aliases:
        table = load_predicate_aliases(args.predicate_aliases)
        with open(
            os.path.join(args.out, "predicate_aliases.tsv"), "w", encoding="utf-8", newline="\n"
        ) as fh:
            for phrase in sorted(table):
                fh.write(f"{phrase}\t{table[phrase]}\n")
    dump_entity_frequencies(records, os.path.join(args.out, "mined_entities.tsv"))
    logger.info("wrote index with %d documents to %s", index.doc_count, args.out)
    print(json.dumps({"entities": index.doc_count, "terms": index.term_count, "out": args.out}))
    return 0


def cmd_ask(args: argparse.Namespace) -> int:
    from .service import result_payload

    engine = load_engine(args.index)
    result = engine.answer(args.question)
    print(json.dumps(result_payload(result, source="subgraph"), ensure_ascii=False, indent=2))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(args.index, args.port, fallback_url=args.fallback_url, host=args.host)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    questions = [q for q in _read_lines(args.questions) if q.strip()]
    if args.http:
        report, rows = run_http_bench(
            args.http, questions, warmup=args.warmup, concurrency=args.concurrency
        )
    else:
        engine = load_engine(args.index)
        report, rows = run_bench(
            engine, questions, warmup=args.warmup, concurrency=args.concurrency
        )
    print(json.dumps(report.to_dict(), indent=2))
    if args.report_dir:
        from .report import write_bench_artifacts

        for path in write_bench_artifacts(report, rows, args.report_dir):
            logger.info("wrote %s", path)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    from . import synth
    from .kg_store import dump_triples

    os.makedirs(args.out, exist_ok=True)
    kg = synth.generate_kg(
        n_entities=args.entities, seed=args.seed, n_aliases=args.aliases
    )
    dump_triples(kg.store, os.path.join(args.out, "triples.tsv"))
    synth.write_aliases(os.path.join(args.out, "aliases.tsv"), kg.aliases)
    synth.write_lines(
        os.path.join(args.out, "logs.txt"), synth.mining_log(kg, seed=args.seed)
    )
    questions = [q for q, _ in synth.factoid_questions(kg.store)]
    synth.write_lines(os.path.join(args.out, "questions.txt"), questions)
    synth.write_lines(
        os.path.join(args.out, "chitchat.txt"),
        synth.chitchat_lines(args.entities, seed=args.seed + 2),
    )
    print(
        json.dumps(
            {
                "entities": len(kg.entities),
                "triples": len(kg.store),
                "aliases": len(kg.aliases),
                "questions": len(questions),
                "out": args.out,
            }
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgqa", description="Knowledge-graph question answering toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-index", help="mine entities and build the index")
    p.add_argument("--triples", required=True, help="TSV file of subject/predicate/object")
    p.add_argument("--aliases", help="TSV file of entity/alias rows")
    p.add_argument("--logs", help="question log, one question per line")
    p.add_argument("--all-entities", action="store_true", help="index every entity, skip mining")
    p.add_argument("--min-freq", type=int, default=10, help="frequency gate (strictly greater)")
    p.add_argument("--patterns", help="pattern file overriding the built-in inventory")
    p.add_argument("--predicate-aliases", help="phrase/predicate TSV copied into the index")
    p.add_argument("--out", required=True, help="output index directory")
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("ask", help="answer one question against an index")
    p.add_argument("--index", required=True, help="index directory")
    p.add_argument("question", help="the question text")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("serve", help="run the HTTP question answering service")
    p.add_argument("--index", required=True, help="index directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--fallback-url", help="remote /ask endpoint consulted on local misses")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="measure answer latency over a question file")
    p.add_argument("--index", help="index directory (in-process mode)")
    p.add_argument("--http", help="base URL of a running service (HTTP mode)")
    p.add_argument("--questions", required=True, help="question file, one per line")
    p.add_argument("--warmup", type=int, default=0, help="unmeasured leading questions")
    p.add_argument("--concurrency", type=int, default=1)
    p.add_argument("--report-dir", help="write JSON, CSV, and PNG artifacts here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic corpus for demos and benchmarks")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--entities", type=int, default=500)
    p.add_argument("--aliases", type=int, default=50, help="number of aliased entities")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and not args.http and not args.index:
        parser.error("bench requires --index or --http")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
