"""Split a surah/ayah/word/selection into words or letters (Figure-3 style).

Letters "with tashkeel" are letter+combining-marks clusters; grouped output
is ordered by first occurrence and never merges tokens that differ in any
mark when tashkeel is considered.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import CorpusIndex, Selection, WordRecord
from .errors import NotFoundError

UNITS = ("letters", "words")
TASHKEEL_MODES = ("with", "without")
GROUPINGS = ("none", "grouped")


@dataclass(frozen=True)
class SplitRequest:
    """Exactly one of surah_no / ayah_serial_no / word_serial_no / selection."""

    unit: str
    tashkeel: str
    grouping: str
    surah_no: int | None = None
    ayah_serial_no: int | None = None
    word_serial_no: int | None = None
    selection: Selection | None = None

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise NotFoundError(f"unit must be one of {UNITS}")
        if self.tashkeel not in TASHKEEL_MODES:
            raise NotFoundError(f"tashkeel must be one of {TASHKEEL_MODES}")
        if self.grouping not in GROUPINGS:
            raise NotFoundError(f"grouping must be one of {GROUPINGS}")
        targets = [
            t
            for t in (self.surah_no, self.ayah_serial_no, self.word_serial_no, self.selection)
            if t is not None
        ]
        if len(targets) != 1:
            raise NotFoundError("split request needs exactly one target")


@dataclass(frozen=True)
class SplitResult:
    grouped: bool
    tokens: tuple[str, ...] = ()
    groups: tuple[tuple[str, int], ...] = ()

    @property
    def total(self) -> int:
        if self.grouped:
            return sum(count for _, count in self.groups)
        return len(self.tokens)

    def to_dict(self) -> dict:
        if self.grouped:
            return {
                "grouping": "grouped",
                "rows": [{"token": token, "count": count} for token, count in self.groups],
            }
        return {
            "grouping": "none",
            "rows": [{"row_no": i, "token": token} for i, token in enumerate(self.tokens, 1)],
        }


def _target_words(index: CorpusIndex, request: SplitRequest) -> list[WordRecord]:
    if request.surah_no is not None:
        span = index.surah(request.surah_no).word_range
    elif request.ayah_serial_no is not None:
        span = index.ayah(request.ayah_serial_no).word_range
    else:
        return [index.word(request.word_serial_no)]
    return index.words[span.start - 1 : span.end]


def split(index: CorpusIndex, request: SplitRequest) -> SplitResult:
    """Tokens ordered by corpus position; grouped counts by first occurrence."""
    tok = index.tokenizer
    if request.selection is not None:
        text = index.selection_text(request.selection)
        if request.unit == "words":
            tokens = tok.tokenize_ayah(text) if request.tashkeel == "with" else [
                t for t in tok.strip_tashkeel(text).split() if t
            ]
        elif request.tashkeel == "with":
            tokens = [c for word in tok.tokenize_ayah(text) for c in tok.letter_clusters(word)]
        else:
            tokens = tok.letters_of(text)
    else:
        words = _target_words(index, request)
        if request.unit == "words":
            tokens = [
                w.text_with_tashkeel if request.tashkeel == "with" else w.text_no_tashkeel
                for w in words
            ]
        elif request.tashkeel == "with":
            tokens = [c for w in words for c in tok.letter_clusters(w.text_with_tashkeel)]
        else:
            tokens = [ch for w in words for ch in tok.letters_of(w.text_with_tashkeel)]

    if request.grouping == "none":
        return SplitResult(grouped=False, tokens=tuple(tokens))
    counts: dict[str, int] = {}
    for token in tokens:
        counts[token] = counts.get(token, 0) + 1
    return SplitResult(grouped=True, groups=tuple(counts.items()))
