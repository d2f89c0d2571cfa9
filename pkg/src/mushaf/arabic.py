"""Arabic letter classification, tashkeel stripping and tokenization.

The default letter and mark sets are fixed conventions of this engine:

* letters: U+0621..U+063A, U+0641..U+064A and U+0671 (alef wasla);
* tashkeel/annotation marks (stripped when counting letters): U+064B..U+065F,
  U+0670 (dagger alef), U+06D6..U+06ED and U+0640 (tatweel).

All text is NFC-normalized before classification so that decomposed
letter+hamza/madda sequences compose into the single letter codepoints the
sets are defined over.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

LETTER_SET: frozenset[str] = frozenset(
    [chr(cp) for cp in range(0x0621, 0x063B)]
    + [chr(cp) for cp in range(0x0641, 0x064B)]
    + ["ٱ"]
)

TASHKEEL_SET: frozenset[str] = frozenset(
    [chr(cp) for cp in range(0x064B, 0x0660)]
    + ["ٰ", "ـ"]
    + [chr(cp) for cp in range(0x06D6, 0x06EE)]
)


def normalize(text: str) -> str:
    """NFC-normalize; composition folds e.g. alef+madda into U+0622."""
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class Tokenizer:
    """Letter/mark classification bundle used by ingestion and splitting."""

    letters: frozenset[str] = field(default=LETTER_SET)
    marks: frozenset[str] = field(default=TASHKEEL_SET)

    def is_letter(self, ch: str) -> bool:
        return ch in self.letters

    def is_mark(self, ch: str) -> bool:
        return ch in self.marks

    def unknown_codepoints(self, text: str) -> list[str]:
        """Codepoints outside letters, marks and whitespace (ingest checks)."""
        return [
            ch
            for ch in normalize(text)
            if ch not in self.letters and ch not in self.marks and not ch.isspace()
        ]

    def strip_tashkeel(self, text: str) -> str:
        """Remove marks, keeping letters in order.

        Whitespace is preserved as plain spaces; codepoints outside both sets
        pass through untouched (the ingester rejects them before they get
        here).
        """
        out = []
        for ch in normalize(text):
            if ch in self.marks:
                continue
            out.append(" " if ch.isspace() else ch)
        return "".join(out)

    def letters_of(self, text: str) -> list[str]:
        """The bare letters of ``text`` in order, marks and whitespace dropped."""
        return [ch for ch in normalize(text) if ch in self.letters]

    def tokenize_ayah(self, text: str) -> list[str]:
        """Split ayah text into word tokens on whitespace runs.

        Tokens that contain no letters at all (stray annotation signs) are not
        words and are dropped; real corpus lines normally contain none.
        """
        return [tok for tok, _, _ in self.tokenize_with_spans(text)]

    def tokenize_with_spans(self, text: str) -> list[tuple[str, int, int]]:
        """Word tokens with their half-open character spans in NFC text."""
        text = normalize(text)
        spans: list[tuple[str, int, int]] = []
        start = None
        for i, ch in enumerate(text + " "):
            if ch.isspace():
                if start is not None:
                    tok = text[start:i]
                    if any(c in self.letters for c in tok):
                        spans.append((tok, start, i))
                    start = None
            elif start is None:
                start = i
        return spans

    def letter_clusters(self, word: str) -> list[str]:
        """Segment a word into letter+trailing-marks clusters.

        This is the "letters with tashkeel" view: each cluster is one letter
        carrying its combining marks. Marks appearing before the first letter
        are folded into the first cluster so the clusters concatenate back to
        the word.
        """
        clusters: list[str] = []
        prefix = ""
        for ch in normalize(word):
            if ch in self.letters:
                clusters.append(ch)
            elif clusters:
                clusters[-1] += ch
            else:
                prefix += ch
        if clusters:
            clusters[0] = prefix + clusters[0]
        elif prefix:
            clusters.append(prefix)
        return clusters


DEFAULT_TOKENIZER = Tokenizer()


def is_letter(ch: str) -> bool:
    return DEFAULT_TOKENIZER.is_letter(ch)


def is_mark(ch: str) -> bool:
    return DEFAULT_TOKENIZER.is_mark(ch)


def strip_tashkeel(text: str) -> str:
    return DEFAULT_TOKENIZER.strip_tashkeel(text)


def letters_of(text: str) -> list[str]:
    return DEFAULT_TOKENIZER.letters_of(text)


def tokenize_ayah(text: str) -> list[str]:
    return DEFAULT_TOKENIZER.tokenize_ayah(text)


def letter_clusters(word: str) -> list[str]:
    return DEFAULT_TOKENIZER.letter_clusters(word)
