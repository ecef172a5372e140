"""Deterministic synthetic corpora: knowledge graphs, question
workloads, and chit-chat noise for fixtures, benchmarks, and demos.

Entity names are two-word combinations over a synthetic vocabulary that
is kept disjoint from predicate words, pattern literals, and chit-chat
vocabulary, so a synthesized question mentions exactly one entity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .kg_store import Triple, TripleStore
from .mining import EntityRecord

_CONSONANTS = "bdfgjklmnprstvz"
_VOWELS = "aeiou"

# Words that must never become entity or predicate names: template
# literals, chit-chat vocabulary, units, judgment answers.
_TABOO = {
    "what", "is", "the", "of", "s", "tell", "me", "equal", "to",
    "yes", "no", "does", "have", "a", "an",
    "meters", "kilograms", "degrees", "years",
    "hello", "there", "hi", "thanks", "lot", "thank", "you", "so", "much",
    "good", "morning", "evening", "night", "how", "are", "doing", "lovely",
    "day", "see", "later", "goodbye", "bye", "nice", "talking", "funny",
    "sing", "song", "that", "cool", "i", "am", "bored", "haha", "one",
    "joke", "please", "ok", "great", "wow", "today", "friend",
}

CHITCHAT_PHRASES = (
    "hello there",
    "hi how are you",
    "thanks a lot",
    "thank you so much",
    "good morning friend",
    "good evening",
    "how are you doing",
    "see you later",
    "goodbye bye bye",
    "nice talking to you",
    "you are so funny",
    "sing me a song please",
    "that is so cool",
    "i am bored today",
    "haha good one",
    "tell me a joke please",
    "ok great wow",
    "good night",
)


@dataclass
class SynthKg:
    store: TripleStore
    entities: list[str]
    aliases: dict[str, str]
    rel_predicates: list[str]
    attr_predicates: list[str]


def _make_words(rng: random.Random, count: int) -> list[str]:
    syllables = [c + v for c in _CONSONANTS for v in _VOWELS]
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < count:
        word = "".join(rng.choice(syllables) for _ in range(3))
        if word in seen or word in _TABOO:
            continue
        seen.add(word)
        words.append(word)
    return words


def generate_kg(
    n_entities: int = 10_000,
    seed: int = 0,
    degree: tuple[int, int] = (6, 14),
    n_aliases: int = 0,
) -> SynthKg:
    """Generate a KG with ~``n_entities * mean(degree)`` triples.

    Every entity gets a distinct predicate per outgoing triple, so each
    (subject, predicate) pair is unique and factoid round-trips have a
    single correct object.  Relational objects are other entities;
    attribute objects are ``<number> <unit>`` literals.
    """
    rng = random.Random(seed)
    n_words = max(12, int(n_entities ** 0.5 * 1.3) + 2)
    words = _make_words(rng, n_words)
    pred_words = _make_words(random.Random(seed + 1), 60)
    # p35 keeps the predicate vocabulary disjoint from entity words
    pred_words = [w for w in pred_words if w not in set(words)][:60]
    rel_predicates = pred_words[:40]
    attr_predicates = pred_words[40:]
    units = ("meters", "kilograms", "degrees", "years")

    slots = rng.sample(range(n_words * n_words), n_entities + n_aliases)
    names = [f"{words[s // n_words]} {words[s % n_words]}" for s in slots]
    entities = names[:n_entities]
    alias_surfaces = names[n_entities:]
    aliases = {alias_surfaces[i]: entities[i % n_entities] for i in range(n_aliases)}

    store = TripleStore()
    pool = rel_predicates + attr_predicates
    for i, entity in enumerate(entities):
        out_degree = rng.randint(*degree)
        for predicate in rng.sample(pool, out_degree):
            if predicate in attr_predicates:
                obj = f"{rng.randint(10, 99_999)} {rng.choice(units)}"
            else:
                j = rng.randrange(n_entities - 1)
                obj = entities[j if j < i else j + 1]
            store.add_triple(entity, predicate, obj)
    for alias, canonical in aliases.items():
        store.alias_map[alias] = canonical
    return SynthKg(store, entities, aliases, rel_predicates, attr_predicates)


def records_for_all(kg: SynthKg) -> list[EntityRecord]:
    """One index record per entity, aliases included, no frequency gate."""
    alias_sets: dict[str, set[str]] = {e: {e} for e in kg.entities}
    for alias, canonical in kg.aliases.items():
        alias_sets[canonical].add(alias)
    return [EntityRecord(e, alias_sets[e], 0) for e in kg.entities]


def factoid_question(triple: Triple) -> str:
    return f"what is the {triple.predicate} of {triple.subject}"


def factoid_questions(store: TripleStore) -> list[tuple[str, Triple]]:
    """One synthesized factoid per triple, asking for the object."""
    return [(factoid_question(t), t) for t in store.triples]


def judgment_question(triple: Triple, truthful: bool, wrong_object: str = "0 nowhere") -> str:
    obj = triple.object if truthful else wrong_object
    return f"is the {triple.predicate} of {triple.subject} {obj}"


def chitchat_lines(n: int, seed: int = 0) -> list[str]:
    """Distinct small-talk lines guaranteed to contain no KG entity."""
    rng = random.Random(seed)
    lines = []
    for i in range(n):
        phrase = CHITCHAT_PHRASES[rng.randrange(len(CHITCHAT_PHRASES))]
        lines.append(f"{phrase} {i}")
    return lines


def mining_log(kg: SynthKg, seed: int = 0, repeat_max: int = 3) -> list[str]:
    """A question log for the mining pipeline demo.

    Each entity is asked about through its factoid (and some judgment)
    questions, each line repeated up to ``repeat_max`` times so the
    deduplication step has work to do; alias surfaces are substituted in
    occasionally.  Chit-chat noise is mixed in and the log shuffled.
    """
    rng = random.Random(seed)
    alias_of = {canonical: alias for alias, canonical in kg.aliases.items()}
    lines: list[str] = []
    for entity in kg.entities:
        for t in kg.store.incident_triples(entity):
            if t.subject != entity:
                continue
            subject = entity
            if entity in alias_of and rng.random() < 0.3:
                subject = alias_of[entity]
            question = f"what is the {t.predicate} of {subject}"
            lines.extend([question] * rng.randint(1, repeat_max))
            if rng.random() < 0.5:
                lines.append(judgment_question(t, truthful=rng.random() < 0.5))
    lines.extend(chitchat_lines(max(10, len(kg.entities) // 2), seed=seed + 1))
    rng.shuffle(lines)
    return lines


def write_lines(path: str, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def write_aliases(path: str, aliases: dict[str, str]) -> None:
    """Alias file rows are ``entity<TAB>alias``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for alias, canonical in aliases.items():
            fh.write(f"{canonical}\t{alias}\n")
