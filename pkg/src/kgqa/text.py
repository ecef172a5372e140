"""Shared text machinery: tokenization and longest-match dictionary
entity recognition.

Both the offline miner and the online engine run on the same tokenizer
and the same recognizer so an entity mined from a log line is found
again, byte for byte, in a live question.
"""

from __future__ import annotations

import logging
from typing import Mapping, NamedTuple

logger = logging.getLogger(__name__)

MIN_SURFACE_LEN = 2

# Han ideographs, kana, and Hangul all tokenize as one character per
# token; everything else alphanumeric tokenizes as maximal runs.
_CJK_RANGES = (
    (0x3040, 0x30FF),   # hiragana, katakana
    (0x3400, 0x4DBF),   # CJK extension A
    (0x4E00, 0x9FFF),   # CJK unified ideographs
    (0xAC00, 0xD7AF),   # hangul syllables
    (0xF900, 0xFAFF),   # CJK compatibility ideographs
    (0x20000, 0x2FA1F),  # CJK extensions B..F + compatibility supplement
)


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    for lo, hi in _CJK_RANGES:
        if lo <= cp <= hi:
            return True
    return False


class Token(NamedTuple):
    text: str
    start: int
    end: int


class EntityMatch(NamedTuple):
    start: int
    end: int
    surface: str
    entity: str


def tokenize(text: str) -> list[Token]:
    """Split normalized text into tokens with character offsets.

    Maximal alphanumeric runs in non-CJK scripts form one token each;
    every CJK character is its own token; all other characters are
    separators.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if _is_cjk(ch):
            tokens.append(Token(ch, i, i + 1))
            i += 1
        elif ch.isalnum():
            j = i + 1
            while j < n and text[j].isalnum() and not _is_cjk(text[j]):
                j += 1
            tokens.append(Token(text[i:j], i, j))
            i = j
        else:
            i += 1
    return tokens


class Dictionary:
    """Immutable multi-pattern matcher over normalized surface forms.

    Backed by a character trie; terminal nodes carry the canonical
    entity label under a ``None`` key (no character can collide with it).
    """

    __slots__ = ("surfaces", "warnings", "_root", "_max_len")

    def __init__(self, surfaces: dict[str, str], warnings: int = 0) -> None:
        self.surfaces = surfaces
        self.warnings = warnings
        self._root: dict = {}
        self._max_len = 0
        for surface, canonical in surfaces.items():
            node = self._root
            for ch in surface:
                node = node.setdefault(ch, {})
            node[None] = canonical
            if len(surface) > self._max_len:
                self._max_len = len(surface)

    def __len__(self) -> int:
        return len(self.surfaces)


def build_dictionary(surface_forms: Mapping[str, str]) -> Dictionary:
    """Build a Dictionary from a surface -> canonical label map.

    Surfaces shorter than MIN_SURFACE_LEN characters are rejected and
    counted in ``Dictionary.warnings``; single characters are too noisy
    to recognize.
    """
    accepted: dict[str, str] = {}
    warnings = 0
    for surface, canonical in surface_forms.items():
        if len(surface) < MIN_SURFACE_LEN:
            warnings += 1
            continue
        accepted[surface] = canonical
    return Dictionary(accepted, warnings)


def recognize_entities(text: str, dictionary: Dictionary) -> list[EntityMatch]:
    """Find non-overlapping, token-aligned dictionary matches.

    All occurrences are enumerated by walking the trie from every token
    start; an occurrence counts only if it also ends on a token end.
    Selection is greedy: repeatedly keep the longest occurrence (ties go
    to the smallest start offset) and drop everything overlapping it.
    The result is sorted by start offset.
    """
    if not dictionary.surfaces:
        return []
    tokens = tokenize(text)
    if not tokens:
        return []
    ends = {t.end for t in tokens}
    root = dictionary._root
    max_len = dictionary._max_len
    occurrences: list[tuple[int, int, str]] = []
    for tok in tokens:
        start = tok.start
        node = root
        limit = min(len(text), start + max_len)
        j = start
        while j < limit:
            node = node.get(text[j])
            if node is None:
                break
            j += 1
            canonical = node.get(None)
            if canonical is not None and j in ends:
                occurrences.append((start, j, canonical))
    occurrences.sort(key=lambda occ: (occ[0] - occ[1], occ[0]))
    chosen: list[EntityMatch] = []
    for start, end, canonical in occurrences:
        if all(end <= m.start or start >= m.end for m in chosen):
            chosen.append(EntityMatch(start, end, text[start:end], canonical))
    chosen.sort(key=lambda m: m.start)
    return chosen
