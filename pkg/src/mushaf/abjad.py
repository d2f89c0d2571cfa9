"""Jummal (abjad) numeric values of letters, words and arbitrary texts."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .arabic import LETTER_SET, is_letter, is_mark, normalize
from .errors import AbjadError

# Mashriqi abjad values over the 28 base letters.
MASHRIQI_VALUES: dict[str, int] = {
    "ا": 1, "ب": 2, "ج": 3, "د": 4, "ه": 5, "و": 6, "ز": 7, "ح": 8, "ط": 9,
    "ي": 10, "ك": 20, "ل": 30, "م": 40, "ن": 50, "س": 60, "ع": 70, "ف": 80,
    "ص": 90, "ق": 100, "ر": 200, "ش": 300, "ت": 400, "ث": 500, "خ": 600,
    "ذ": 700, "ض": 800, "ظ": 900, "غ": 1000,
}

# Orthographic variants folded onto base letters before lookup. The
# standalone hamza fold is a convention of this engine (value 1 via alef).
DEFAULT_FOLDS: dict[str, str] = {
    "أ": "ا", "إ": "ا", "آ": "ا", "ٱ": "ا",
    "ة": "ه",
    "ى": "ي", "ئ": "ي",
    "ؤ": "و",
    "ء": "ا",
}


@dataclass(frozen=True)
class AbjadTable:
    """Letter-to-value mapping plus the variant fold map applied first."""

    values: dict[str, int] = field(default_factory=lambda: dict(MASHRIQI_VALUES))
    folds: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FOLDS))

    def __post_init__(self) -> None:
        missing = [ch for ch in sorted(LETTER_SET) if self.fold(ch) not in self.values]
        if missing:
            raise AbjadError(f"letters without a value after folding: {missing}")

    def fold(self, letter: str) -> str:
        return self.folds.get(letter, letter)

    def value(self, letter: str) -> int:
        return self.values[self.fold(letter)]

    @classmethod
    def from_tsv(cls, path: str | Path) -> "AbjadTable":
        """Load a value override table: one `letter<TAB>value` row per line."""
        values = dict(MASHRIQI_VALUES)
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                    raise AbjadError(f"{path}:{line_no}: expected `letter<TAB>value`")
                letter, value = parts[0], int(parts[1])
                if value <= 0:
                    raise AbjadError(f"{path}:{line_no}: value must be positive")
                values[letter] = value
        return cls(values=values)


DEFAULT_TABLE = AbjadTable()


def jummal(text: str, table: AbjadTable = DEFAULT_TABLE) -> int:
    """Sum of abjad values over the letters of ``text``.

    Tashkeel marks and whitespace contribute nothing; any other codepoint is
    an error.
    """
    total = 0
    for ch in normalize(text):
        if is_letter(ch):
            total += table.value(ch)
        elif not (is_mark(ch) or ch.isspace()):
            raise AbjadError(f"codepoint outside letter/tashkeel/space sets: {ch!r} (U+{ord(ch):04X})")
    return total
