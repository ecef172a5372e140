"""Question patterns: parsing, validation, and token-level matching.

A pattern is a template such as ``what is the {p} of {e}`` whose slots
are filled from a question.  The same matcher serves two modes: online
answering (the entity span is already recognized and pinned) and
offline capture (the {e} slot itself captures a candidate entity).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Sequence

from .kg_store import normalize_label
from .text import EntityMatch, Token, tokenize


class PatternError(Exception):
    """A pattern file or template is malformed."""


class PatternKind(str, Enum):
    FACTOID = "factoid"
    JUDGMENT = "judgment"


# Template item kinds: ("lit", token_text) or ("slot", "e"|"p"|"o").
_SLOT_RE = re.compile(r"\{([epo])\}")

# Question item kinds: ("tok", text, start, end) or ("ent", surface, start, end).
_TOK = "tok"
_ENT = "ent"


@dataclass(frozen=True)
class QuestionPattern:
    kind: PatternKind
    template: str
    priority: int
    items: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class PatternMatch:
    pattern: QuestionPattern
    predicate_phrase: str
    object_phrase: str | None = None


def _parse_template(kind: PatternKind, template: str) -> tuple[tuple[str, str], ...]:
    items: list[tuple[str, str]] = []
    counts = {"e": 0, "p": 0, "o": 0}
    pos = 0
    for m in _SLOT_RE.finditer(template):
        for tok in tokenize(normalize_label(template[pos:m.start()])):
            items.append(("lit", tok.text))
        slot = m.group(1)
        counts[slot] += 1
        items.append(("slot", slot))
        pos = m.end()
    for tok in tokenize(normalize_label(template[pos:])):
        items.append(("lit", tok.text))
    if counts["e"] != 1:
        raise PatternError(f"template needs exactly one {{e}} slot, found {counts['e']}")
    if counts["p"] != 1:
        raise PatternError(f"template needs exactly one {{p}} slot, found {counts['p']}")
    expected_o = 1 if kind is PatternKind.JUDGMENT else 0
    if counts["o"] != expected_o:
        raise PatternError(
            f"{kind.value} template must have {expected_o} {{o}} slot(s), found {counts['o']}"
        )
    return tuple(items)


def make_pattern(kind: PatternKind, template: str, priority: int = 0) -> QuestionPattern:
    return QuestionPattern(kind, template, priority, _parse_template(kind, template))


def parse_patterns(lines: Sequence[str], source: str = "<patterns>") -> list[QuestionPattern]:
    patterns: list[QuestionPattern] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise PatternError(f"{source}:{lineno}: expected kind<TAB>template")
        kind_raw, template = parts
        try:
            kind = PatternKind(kind_raw.strip().lower())
        except ValueError:
            raise PatternError(f"{source}:{lineno}: unknown pattern kind {kind_raw!r}") from None
        try:
            patterns.append(make_pattern(kind, template, priority=len(patterns)))
        except PatternError as exc:
            raise PatternError(f"{source}:{lineno}: {exc}") from None
    return patterns


def load_patterns(path: str) -> list[QuestionPattern]:
    """Load a ``kind<TAB>template`` file; file order is match priority."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise PatternError(f"cannot read pattern file {path}: {exc}") from exc
    return parse_patterns(lines, source=str(path))


def default_patterns() -> list[QuestionPattern]:
    """The English pattern inventory shipped with the package."""
    text = resources.files("kgqa.data").joinpath("patterns_default.tsv").read_text("utf-8")
    return parse_patterns(text.splitlines(), source="patterns_default.tsv")


def _match_items(
    template: Sequence[tuple[str, str]],
    items: Sequence[tuple],
    ti: int,
    qi: int,
    binds: dict[str, tuple[int, int]],
) -> dict[str, tuple[int, int]] | None:
    """Lazy left-to-right alignment of template items against question items.

    Literals must match exactly; {e} consumes the single entity marker
    when one is present, otherwise it captures a token run like the
    other slots.  Slot runs take the shortest length that lets the rest
    of the template match, so captures are deterministic; a trailing
    slot therefore takes the whole remainder.
    """
    if ti == len(template):
        return dict(binds) if qi == len(items) else None
    kind, value = template[ti]
    if kind == "lit":
        if qi < len(items) and items[qi][0] == _TOK and items[qi][1] == value:
            return _match_items(template, items, ti + 1, qi + 1, binds)
        return None
    if value == "e" and qi < len(items) and items[qi][0] == _ENT:
        binds["e"] = (qi, qi + 1)
        result = _match_items(template, items, ti + 1, qi + 1, binds)
        if result is None:
            del binds["e"]
        return result
    # Slot over plain tokens ({p}, {o}, or {e} in capture mode): the run
    # may not cross the entity marker.
    for end in range(qi + 1, len(items) + 1):
        if items[end - 1][0] != _TOK:
            break
        binds[value] = (qi, end)
        result = _match_items(template, items, ti + 1, end, binds)
        if result is not None:
            return result
        del binds[value]
    return None


def _question_items(
    text: str, tokens: Sequence[Token], entity_match: EntityMatch | None
) -> list[tuple]:
    items: list[tuple] = []
    marker_emitted = False
    for tok in tokens:
        if entity_match is not None and entity_match.start <= tok.start and tok.end <= entity_match.end:
            if not marker_emitted:
                items.append((_ENT, entity_match.surface, entity_match.start, entity_match.end))
                marker_emitted = True
            continue
        items.append((_TOK, tok.text, tok.start, tok.end))
    return items


def _slice(text: str, items: Sequence[tuple], span: tuple[int, int]) -> str:
    start = items[span[0]][2]
    end = items[span[1] - 1][3]
    return text[start:end]


def match_pattern(
    text: str,
    tokens: Sequence[Token],
    entity_match: EntityMatch,
    patterns: Sequence[QuestionPattern],
) -> PatternMatch | None:
    """Try patterns in priority order against a question whose entity span
    is already recognized; first match wins.

    The entity span is replaced by a marker that only the {e} slot can
    consume, so substituting the entity surface back into {e} (and the
    captured phrases into {p}/{o}) reproduces the question.
    """
    items = _question_items(text, tokens, entity_match)
    for pattern in patterns:
        binds = _match_items(pattern.items, items, 0, 0, {})
        if binds is None:
            continue
        predicate_phrase = _slice(text, items, binds["p"])
        object_phrase = _slice(text, items, binds["o"]) if "o" in binds else None
        return PatternMatch(pattern, predicate_phrase, object_phrase)
    return None


def capture_entity(text: str, tokens: Sequence[Token], pattern: QuestionPattern) -> str | None:
    """Offline capture mode: the {e} slot captures a candidate entity
    phrase when the rest of the template matches the whole question."""
    items = _question_items(text, tokens, None)
    if not items:
        return None
    binds = _match_items(pattern.items, items, 0, 0, {})
    if binds is None:
        return None
    return _slice(text, items, binds["e"])
