"""Corpus ingestion and the four-granularity serial-number index.

The corpus file is Tanzil-compatible: one ayah per line, ``surah|ayah|text``,
UTF-8, comment lines starting with ``#``. Surah names and the mushaf layout
(page/juz/rub starts) come from separate TSV metadata because pagination is
editorial, not derivable from the text.

Serial numbers are global and 1-based at every granularity; the backward
serial of element ``e`` is ``total - forward(e) + 1`` so that
``forward + backward = total + 1`` always holds.
"""

from __future__ import annotations

import hashlib
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .arabic import DEFAULT_TOKENIZER, Tokenizer, normalize
from .errors import IngestError, NotFoundError, SelectionError


@dataclass(frozen=True)
class Span:
    """Inclusive interval of global serial numbers."""

    start: int
    end: int

    @property
    def count(self) -> int:
        return self.end - self.start + 1

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.end + 1))


@dataclass(frozen=True)
class SurahRecord:
    surah_serial_no: int
    surah_serial_no_backward: int
    name: str
    full_name: str
    revelation_sequence_no: int
    ayah_range: Span
    word_range: Span
    letter_range: Span


@dataclass(frozen=True)
class AyahRecord:
    ayah_serial_no: int
    ayah_no_in_surah: int
    surah_serial_no: int
    text_with_tashkeel: str
    text_no_tashkeel: str
    word_range: Span
    letter_range: Span
    page_no: int
    juz_no: int
    rub_no: int
    # half-open character spans of the indexed words within text_with_tashkeel
    word_char_spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WordRecord:
    word_serial_no: int
    word_no_in_ayah: int
    word_no_in_surah: int
    ayah_serial_no: int
    surah_serial_no: int
    text_with_tashkeel: str
    text_no_tashkeel: str
    unique_word_id: int
    letter_range: Span


@dataclass(frozen=True)
class LetterRecord:
    letter_serial_no: int
    word_serial_no: int
    letter: str


@dataclass(frozen=True)
class UniqueWord:
    unique_word_id: int
    text_with_tashkeel: str
    text_no_tashkeel: str
    occurrence_count: int


@dataclass(frozen=True)
class Selection:
    """A highlighted character range (half-open) inside one ayah's text."""

    ayah_serial_no: int
    start_offset: int
    end_offset: int


@dataclass(frozen=True)
class SurahMeta:
    name: str
    full_name: str
    revelation_sequence_no: int


@dataclass(frozen=True)
class CorpusMetadata:
    """Surah table plus layout tables; layout rows mark each unit's first ayah."""

    surahs: tuple[SurahMeta, ...]
    pages: tuple[tuple[int, int], ...]
    juzs: tuple[tuple[int, int], ...]
    rubs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class NavigationTarget:
    page_no: int
    ayah_serial_no: int


class CorpusIndex:
    """Immutable indexed corpus; safe to share across concurrent readers."""

    def __init__(
        self,
        surahs: list[SurahRecord],
        ayahs: list[AyahRecord],
        words: list[WordRecord],
        letter_chars: list[str],
        letter_word_serials: list[int],
        unique_words: list[UniqueWord],
        page_starts: list[int],
        juz_starts: list[int],
        rub_starts: list[int],
        content_hash: str,
        tokenizer: Tokenizer = DEFAULT_TOKENIZER,
    ):
        self._surahs = surahs
        self._ayahs = ayahs
        self._words = words
        self._letter_chars = letter_chars
        self._letter_word_serials = letter_word_serials
        self._unique_words = unique_words
        self._page_starts = page_starts
        self._juz_starts = juz_starts
        self._rub_starts = rub_starts
        self.content_hash = content_hash
        self.tokenizer = tokenizer
        self._surah_occurrences: dict[tuple[int, int], int] = {}
        for w in words:
            key = (w.unique_word_id, w.surah_serial_no)
            self._surah_occurrences[key] = self._surah_occurrences.get(key, 0) + 1

    # -- totals ------------------------------------------------------------

    @property
    def total_surahs(self) -> int:
        return len(self._surahs)

    @property
    def total_ayahs(self) -> int:
        return len(self._ayahs)

    @property
    def total_words(self) -> int:
        return len(self._words)

    @property
    def total_letters(self) -> int:
        return len(self._letter_chars)

    @property
    def total_pages(self) -> int:
        return len(self._page_starts)

    @property
    def total_juzs(self) -> int:
        return len(self._juz_starts)

    @property
    def total_rubs(self) -> int:
        return len(self._rub_starts)

    # -- element accessors ---------------------------------------------------

    def surah(self, surah_no: int) -> SurahRecord:
        if not 1 <= surah_no <= len(self._surahs):
            raise NotFoundError(f"surah {surah_no} out of range 1..{len(self._surahs)}")
        return self._surahs[surah_no - 1]

    def ayah(self, serial: int) -> AyahRecord:
        if not 1 <= serial <= len(self._ayahs):
            raise NotFoundError(f"ayah serial {serial} out of range 1..{len(self._ayahs)}")
        return self._ayahs[serial - 1]

    def word(self, serial: int) -> WordRecord:
        if not 1 <= serial <= len(self._words):
            raise NotFoundError(f"word serial {serial} out of range 1..{len(self._words)}")
        return self._words[serial - 1]

    def letter(self, serial: int) -> LetterRecord:
        if not 1 <= serial <= len(self._letter_chars):
            raise NotFoundError(f"letter serial {serial} out of range 1..{len(self._letter_chars)}")
        return LetterRecord(serial, self._letter_word_serials[serial - 1], self._letter_chars[serial - 1])

    def unique_word(self, unique_word_id: int) -> UniqueWord:
        if not 1 <= unique_word_id <= len(self._unique_words):
            raise NotFoundError(f"unique word id {unique_word_id} unknown")
        return self._unique_words[unique_word_id - 1]

    @property
    def surahs(self) -> list[SurahRecord]:
        return self._surahs

    @property
    def ayahs(self) -> list[AyahRecord]:
        return self._ayahs

    @property
    def words(self) -> list[WordRecord]:
        return self._words

    @property
    def unique_words(self) -> list[UniqueWord]:
        return self._unique_words

    def letters(self) -> Iterator[LetterRecord]:
        for serial in range(1, len(self._letter_chars) + 1):
            yield self.letter(serial)

    def occurrences_in_surah(self, unique_word_id: int, surah_no: int) -> int:
        return self._surah_occurrences.get((unique_word_id, surah_no), 0)

    # -- backward serials ----------------------------------------------------

    def backward(self, granularity: str, serial: int) -> int:
        totals = {
            "surah": self.total_surahs,
            "ayah": self.total_ayahs,
            "word": self.total_words,
            "letter": self.total_letters,
        }
        return totals[granularity] - serial + 1

    # -- navigation ----------------------------------------------------------

    def locate_ayah(self, surah_no: int, ayah_no_in_surah: int) -> int:
        surah = self.surah(surah_no)
        serial = surah.ayah_range.start + ayah_no_in_surah - 1
        if not (ayah_no_in_surah >= 1 and serial <= surah.ayah_range.end):
            raise NotFoundError(
                f"surah {surah_no} has {surah.ayah_range.count} ayahs, not {ayah_no_in_surah}"
            )
        return serial

    def resolve_ayah(self, ayah_serial_no: int) -> tuple[int, int]:
        ayah = self.ayah(ayah_serial_no)
        return ayah.surah_serial_no, ayah.ayah_no_in_surah

    def page_of_ayah(self, ayah_serial_no: int) -> int:
        self.ayah(ayah_serial_no)
        return bisect_right(self._page_starts, ayah_serial_no)

    def juz_of_ayah(self, ayah_serial_no: int) -> int:
        self.ayah(ayah_serial_no)
        return bisect_right(self._juz_starts, ayah_serial_no)

    def rub_of_ayah(self, ayah_serial_no: int) -> int:
        self.ayah(ayah_serial_no)
        return bisect_right(self._rub_starts, ayah_serial_no)

    def navigate(
        self,
        surah: int | None = None,
        juz: int | None = None,
        rub: int | None = None,
        page: int | None = None,
    ) -> NavigationTarget:
        """Resolve an anchor to the page holding its first ayah."""
        anchors = {"surah": surah, "juz": juz, "rub": rub, "page": page}
        given = {k: v for k, v in anchors.items() if v is not None}
        if len(given) != 1:
            raise NotFoundError(f"navigate needs exactly one anchor, got {sorted(given) or 'none'}")
        kind, value = next(iter(given.items()))
        if kind == "surah":
            serial = self.surah(value).ayah_range.start
        elif kind == "page":
            if not 1 <= value <= len(self._page_starts):
                raise NotFoundError(f"page {value} out of range 1..{len(self._page_starts)}")
            serial = self._page_starts[value - 1]
        elif kind == "juz":
            if not 1 <= value <= len(self._juz_starts):
                raise NotFoundError(f"juz {value} out of range 1..{len(self._juz_starts)}")
            serial = self._juz_starts[value - 1]
        else:
            if not 1 <= value <= len(self._rub_starts):
                raise NotFoundError(f"rub {value} out of range 1..{len(self._rub_starts)}")
            serial = self._rub_starts[value - 1]
        return NavigationTarget(page_no=self.page_of_ayah(serial), ayah_serial_no=serial)

    def step_page(self, current: int, delta: int) -> int:
        """Step from a valid page by ``delta`` pages, clamped to [1, max]."""
        if not 1 <= current <= len(self._page_starts):
            raise NotFoundError(f"page {current} out of range 1..{len(self._page_starts)}")
        return max(1, min(len(self._page_starts), current + delta))

    def ayah_serials_on_page(self, page_no: int) -> Span:
        if not 1 <= page_no <= len(self._page_starts):
            raise NotFoundError(f"page {page_no} out of range 1..{len(self._page_starts)}")
        start = self._page_starts[page_no - 1]
        if page_no < len(self._page_starts):
            end = self._page_starts[page_no] - 1
        else:
            end = self.total_ayahs
        return Span(start, end)

    # -- selections ------------------------------------------------------------

    def check_selection(self, selection: Selection) -> AyahRecord:
        ayah = self.ayah(selection.ayah_serial_no)
        n = len(ayah.text_with_tashkeel)
        if not 0 <= selection.start_offset < selection.end_offset <= n:
            raise SelectionError(
                f"selection [{selection.start_offset}, {selection.end_offset}) invalid "
                f"for ayah of length {n}"
            )
        return ayah

    def selection_text(self, selection: Selection) -> str:
        ayah = self.check_selection(selection)
        return ayah.text_with_tashkeel[selection.start_offset : selection.end_offset]


# -- metadata loading ----------------------------------------------------------


def _read_tsv_rows(path: str | Path) -> list[tuple[int, list[str]]]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            rows.append((line_no, line.split("\t")))
    return rows


def load_surah_table(path: str | Path) -> tuple[SurahMeta, ...]:
    surahs: list[SurahMeta] = []
    for line_no, cols in _read_tsv_rows(path):
        if len(cols) != 4:
            raise IngestError(f"{path}:{line_no}: expected 4 columns, got {len(cols)}")
        serial_s, name, full_name, rev_s = cols
        if not serial_s.isdigit() or not rev_s.isdigit():
            raise IngestError(f"{path}:{line_no}: serial and revelation number must be integers")
        if int(serial_s) != len(surahs) + 1:
            raise IngestError(f"{path}:{line_no}: surah serials must be dense from 1")
        surahs.append(SurahMeta(name=name, full_name=full_name, revelation_sequence_no=int(rev_s)))
    if not surahs:
        raise IngestError(f"{path}: empty surah table")
    return tuple(surahs)


def load_layout_table(path: str | Path) -> tuple[tuple[int, int], ...]:
    rows: list[tuple[int, int]] = []
    for line_no, cols in _read_tsv_rows(path):
        if len(cols) != 3 or not all(c.isdigit() for c in cols):
            raise IngestError(f"{path}:{line_no}: expected `unit_no<TAB>surah_no<TAB>ayah_no`")
        unit_no, surah_no, ayah_no = (int(c) for c in cols)
        if unit_no != len(rows) + 1:
            raise IngestError(f"{path}:{line_no}: unit numbers must be dense from 1")
        rows.append((surah_no, ayah_no))
    if not rows:
        raise IngestError(f"{path}: empty layout table")
    return tuple(rows)


def load_metadata(
    surahs_path: str | Path,
    pages_path: str | Path,
    juzs_path: str | Path,
    rubs_path: str | Path,
) -> CorpusMetadata:
    return CorpusMetadata(
        surahs=load_surah_table(surahs_path),
        pages=load_layout_table(pages_path),
        juzs=load_layout_table(juzs_path),
        rubs=load_layout_table(rubs_path),
    )


def load_metadata_dir(directory: str | Path) -> CorpusMetadata:
    d = Path(directory)
    return load_metadata(d / "surahs.tsv", d / "pages.tsv", d / "juzs.tsv", d / "rubs.tsv")


# -- ingestion ------------------------------------------------------------------


def _parse_corpus_lines(
    lines: Iterable[str], tokenizer: Tokenizer
) -> list[tuple[int, int, str]]:
    """Parse, validate ordering and codepoints; returns (surah, ayah, nfc_text)."""
    entries: list[tuple[int, int, str]] = []
    prev = (0, 0)
    for line_no, raw in enumerate(lines, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("|", 2)
        if len(parts) != 3:
            raise IngestError(f"line {line_no}: expected `surah|ayah|text`")
        s_str, a_str, text = parts
        if not s_str.isdigit() or not a_str.isdigit():
            raise IngestError(f"line {line_no}: surah and ayah must be positive integers")
        surah_no, ayah_no = int(s_str), int(a_str)
        if surah_no < 1 or ayah_no < 1:
            raise IngestError(f"line {line_no}: surah and ayah must be positive integers")
        if not text.strip():
            raise IngestError(f"line {line_no}: empty ayah text")
        expected = [(prev[0], prev[1] + 1), (prev[0] + 1, 1)]
        if (surah_no, ayah_no) not in expected:
            raise IngestError(
                f"line {line_no}: ({surah_no}, {ayah_no}) breaks ascending order after {prev} "
                "(gap, duplicate or disorder)"
            )
        unknown = tokenizer.unknown_codepoints(text)
        if unknown:
            cps = ", ".join(f"U+{ord(c):04X}" for c in sorted(set(unknown)))
            raise IngestError(f"line {line_no}: codepoints outside letter/tashkeel sets: {cps}")
        entries.append((surah_no, ayah_no, normalize(text)))
        prev = (surah_no, ayah_no)
    if not entries:
        raise IngestError("empty corpus")
    return entries


def _layout_starts(
    table: tuple[tuple[int, int], ...],
    label: str,
    surah_first_serial: list[int],
    surah_ayah_counts: list[int],
) -> list[int]:
    starts: list[int] = []
    for unit_no, (surah_no, ayah_no) in enumerate(table, 1):
        if not 1 <= surah_no <= len(surah_first_serial):
            raise IngestError(f"{label} {unit_no}: unknown surah {surah_no}")
        if not 1 <= ayah_no <= surah_ayah_counts[surah_no - 1]:
            raise IngestError(f"{label} {unit_no}: surah {surah_no} has no ayah {ayah_no}")
        starts.append(surah_first_serial[surah_no - 1] + ayah_no - 1)
    if starts[0] != 1:
        raise IngestError(f"{label} table must start at the first ayah")
    for i in range(1, len(starts)):
        if starts[i] <= starts[i - 1]:
            raise IngestError(f"{label} {i + 1}: start serials must be strictly increasing")
    return starts


def _content_hash(entries: list[tuple[int, int, str]], metadata: CorpusMetadata) -> str:
    h = hashlib.sha256()
    for surah_no, ayah_no, text in entries:
        h.update(f"{surah_no}|{ayah_no}|{text}\n".encode("utf-8"))
    for meta in metadata.surahs:
        h.update(f"S\t{meta.name}\t{meta.full_name}\t{meta.revelation_sequence_no}\n".encode("utf-8"))
    for label, table in (("P", metadata.pages), ("J", metadata.juzs), ("R", metadata.rubs)):
        for surah_no, ayah_no in table:
            h.update(f"{label}\t{surah_no}\t{ayah_no}\n".encode("utf-8"))
    return h.hexdigest()


def ingest(
    corpus_lines: Iterable[str],
    metadata: CorpusMetadata,
    tokenizer: Tokenizer = DEFAULT_TOKENIZER,
) -> CorpusIndex:
    """Build the full index from corpus lines and metadata tables.

    Deterministic: identical inputs produce an identical index (and identical
    serialized stores).
    """
    entries = _parse_corpus_lines(corpus_lines, tokenizer)

    total_surahs = entries[-1][0]
    if len(metadata.surahs) != total_surahs:
        raise IngestError(
            f"metadata covers {len(metadata.surahs)} surahs, corpus has {total_surahs}"
        )

    # First pass over ayahs: counts per surah for layout resolution.
    surah_ayah_counts = [0] * total_surahs
    for surah_no, _, _ in entries:
        surah_ayah_counts[surah_no - 1] += 1
    surah_first_serial = [1] * total_surahs
    for i in range(1, total_surahs):
        surah_first_serial[i] = surah_first_serial[i - 1] + surah_ayah_counts[i - 1]

    page_starts = _layout_starts(metadata.pages, "page", surah_first_serial, surah_ayah_counts)
    juz_starts = _layout_starts(metadata.juzs, "juz", surah_first_serial, surah_ayah_counts)
    rub_starts = _layout_starts(metadata.rubs, "rub", surah_first_serial, surah_ayah_counts)

    ayahs: list[AyahRecord] = []
    words: list[WordRecord] = []
    letter_chars: list[str] = []
    letter_word_serials: list[int] = []
    unique_ids: dict[str, int] = {}
    unique_forms: list[str] = []
    unique_counts: list[int] = []
    word_no_in_surah = 0
    current_surah = 0

    for ayah_serial, (surah_no, ayah_no, text) in enumerate(entries, 1):
        if surah_no != current_surah:
            current_surah = surah_no
            word_no_in_surah = 0
        tokens = tokenizer.tokenize_with_spans(text)
        if not tokens:
            raise IngestError(f"surah {surah_no} ayah {ayah_no}: no words after tokenization")
        ayah_word_start = len(words) + 1
        ayah_letter_start = len(letter_chars) + 1
        char_spans: list[tuple[int, int]] = []
        for word_no_in_ayah, (token, char_start, char_end) in enumerate(tokens, 1):
            word_no_in_surah += 1
            word_serial = len(words) + 1
            letters = tokenizer.letters_of(token)
            letter_start = len(letter_chars) + 1
            letter_chars.extend(letters)
            letter_word_serials.extend([word_serial] * len(letters))
            uid = unique_ids.get(token)
            if uid is None:
                uid = len(unique_forms) + 1
                unique_ids[token] = uid
                unique_forms.append(token)
                unique_counts.append(0)
            unique_counts[uid - 1] += 1
            words.append(
                WordRecord(
                    word_serial_no=word_serial,
                    word_no_in_ayah=word_no_in_ayah,
                    word_no_in_surah=word_no_in_surah,
                    ayah_serial_no=ayah_serial,
                    surah_serial_no=surah_no,
                    text_with_tashkeel=token,
                    text_no_tashkeel=tokenizer.strip_tashkeel(token),
                    unique_word_id=uid,
                    letter_range=Span(letter_start, len(letter_chars)),
                )
            )
            char_spans.append((char_start, char_end))
        ayahs.append(
            AyahRecord(
                ayah_serial_no=ayah_serial,
                ayah_no_in_surah=ayah_no,
                surah_serial_no=surah_no,
                text_with_tashkeel=text,
                text_no_tashkeel=tokenizer.strip_tashkeel(text),
                word_range=Span(ayah_word_start, len(words)),
                letter_range=Span(ayah_letter_start, len(letter_chars)),
                page_no=bisect_right(page_starts, ayah_serial),
                juz_no=bisect_right(juz_starts, ayah_serial),
                rub_no=bisect_right(rub_starts, ayah_serial),
                word_char_spans=tuple(char_spans),
            )
        )

    surahs: list[SurahRecord] = []
    for surah_no in range(1, total_surahs + 1):
        first_ayah = surah_first_serial[surah_no - 1]
        last_ayah = first_ayah + surah_ayah_counts[surah_no - 1] - 1
        meta = metadata.surahs[surah_no - 1]
        surahs.append(
            SurahRecord(
                surah_serial_no=surah_no,
                surah_serial_no_backward=total_surahs - surah_no + 1,
                name=meta.name,
                full_name=meta.full_name,
                revelation_sequence_no=meta.revelation_sequence_no,
                ayah_range=Span(first_ayah, last_ayah),
                word_range=Span(
                    ayahs[first_ayah - 1].word_range.start, ayahs[last_ayah - 1].word_range.end
                ),
                letter_range=Span(
                    ayahs[first_ayah - 1].letter_range.start, ayahs[last_ayah - 1].letter_range.end
                ),
            )
        )

    unique_words = [
        UniqueWord(
            unique_word_id=i + 1,
            text_with_tashkeel=form,
            text_no_tashkeel=tokenizer.strip_tashkeel(form),
            occurrence_count=unique_counts[i],
        )
        for i, form in enumerate(unique_forms)
    ]

    return CorpusIndex(
        surahs=surahs,
        ayahs=ayahs,
        words=words,
        letter_chars=letter_chars,
        letter_word_serials=letter_word_serials,
        unique_words=unique_words,
        page_starts=page_starts,
        juz_starts=juz_starts,
        rub_starts=rub_starts,
        content_hash=_content_hash(entries, metadata),
        tokenizer=tokenizer,
    )


def ingest_files(
    corpus_path: str | Path,
    metadata_dir: str | Path,
    tokenizer: Tokenizer = DEFAULT_TOKENIZER,
) -> CorpusIndex:
    corpus_path = Path(corpus_path)
    if not corpus_path.exists():
        raise IngestError(f"corpus file not found: {corpus_path}")
    metadata = load_metadata_dir(metadata_dir)
    with open(corpus_path, encoding="utf-8") as f:
        return ingest(f, metadata, tokenizer)
