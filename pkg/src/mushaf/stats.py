"""Label/value statistics reports for surah, ayah, word and selection.

Row labels and their order are frozen per granularity so reports are
bit-stable for a given corpus. The surah matrix follows the published
23-row layout; the ayah/word/selection matrices are this engine's fixed
conventions, composed to mirror it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abjad import DEFAULT_TABLE, AbjadTable, jummal
from .corpus import CorpusIndex, Selection

Value = int | str


@dataclass(frozen=True)
class StatsReport:
    granularity: str
    rows: tuple[tuple[str, Value], ...]

    def value(self, label: str) -> Value:
        for row_label, value in self.rows:
            if row_label == label:
                return value
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [label for label, _ in self.rows]

    def to_dict(self) -> dict:
        return {
            "granularity": self.granularity,
            "rows": [{"label": label, "value": value} for label, value in self.rows],
        }


def surah_stats(index: CorpusIndex, surah_no: int, table: AbjadTable = DEFAULT_TABLE) -> StatsReport:
    s = index.surah(surah_no)
    surah_text = " ".join(
        index.ayah(serial).text_with_tashkeel for serial in s.ayah_range
    )
    rows = (
        ("Surah Serial No", s.surah_serial_no),
        ("Surah Serial No (Backward)", s.surah_serial_no_backward),
        ("Surah Name", s.name),
        ("Jummal Value of Surah Name", jummal(s.name, table)),
        ("Surah Full Name", s.full_name),
        ("Jummal Value of Full Surah Name", jummal(s.full_name, table)),
        ("Jummal Value of Surah Text", jummal(surah_text, table)),
        ("Revelation Sequence No", s.revelation_sequence_no),
        ("First Ayah in Surah Serial No", s.ayah_range.start),
        ("First Ayah in Surah Serial No (Backward)", index.backward("ayah", s.ayah_range.start)),
        ("Last Ayah in Surah Serial No", s.ayah_range.end),
        ("Last Ayah in Surah Serial No (Backward)", index.backward("ayah", s.ayah_range.end)),
        ("Ayah Count", s.ayah_range.count),
        ("First Word in Surah Serial No", s.word_range.start),
        ("First Word in Surah Serial No (Backward)", index.backward("word", s.word_range.start)),
        ("Last Word in Surah Serial No", s.word_range.end),
        ("Last Word in Surah Serial No (Backward)", index.backward("word", s.word_range.end)),
        ("Word Count", s.word_range.count),
        ("First Letter in Surah Serial No", s.letter_range.start),
        ("First Letter in Surah Serial No (Backward)", index.backward("letter", s.letter_range.start)),
        ("Last Letter in Surah Serial No", s.letter_range.end),
        ("Last Letter in Surah Serial No (Backward)", index.backward("letter", s.letter_range.end)),
        ("Letter Count", s.letter_range.count),
    )
    return StatsReport(granularity="surah", rows=rows)


def ayah_stats(index: CorpusIndex, ayah_serial_no: int, table: AbjadTable = DEFAULT_TABLE) -> StatsReport:
    a = index.ayah(ayah_serial_no)
    surah = index.surah(a.surah_serial_no)
    rows = (
        ("Ayah Serial No", a.ayah_serial_no),
        ("Ayah Serial No (Backward)", index.backward("ayah", a.ayah_serial_no)),
        ("Ayah No in Surah", a.ayah_no_in_surah),
        ("Ayah No in Surah (Backward)", surah.ayah_range.count - a.ayah_no_in_surah + 1),
        ("Surah Serial No", a.surah_serial_no),
        ("Surah Name", surah.name),
        ("Jummal Value of Ayah Text", jummal(a.text_with_tashkeel, table)),
        ("First Word in Ayah Serial No", a.word_range.start),
        ("First Word in Ayah Serial No (Backward)", index.backward("word", a.word_range.start)),
        ("Last Word in Ayah Serial No", a.word_range.end),
        ("Last Word in Ayah Serial No (Backward)", index.backward("word", a.word_range.end)),
        ("Word Count", a.word_range.count),
        ("First Letter in Ayah Serial No", a.letter_range.start),
        ("First Letter in Ayah Serial No (Backward)", index.backward("letter", a.letter_range.start)),
        ("Last Letter in Ayah Serial No", a.letter_range.end),
        ("Last Letter in Ayah Serial No (Backward)", index.backward("letter", a.letter_range.end)),
        ("Letter Count", a.letter_range.count),
        ("Page No", a.page_no),
        ("Juz No", a.juz_no),
        ("Rub No", a.rub_no),
    )
    return StatsReport(granularity="ayah", rows=rows)


def word_stats(index: CorpusIndex, word_serial_no: int, table: AbjadTable = DEFAULT_TABLE) -> StatsReport:
    w = index.word(word_serial_no)
    surah = index.surah(w.surah_serial_no)
    unique = index.unique_word(w.unique_word_id)
    rows = (
        ("Word Serial No", w.word_serial_no),
        ("Word Serial No (Backward)", index.backward("word", w.word_serial_no)),
        ("Word No in Ayah", w.word_no_in_ayah),
        ("Word No in Surah", w.word_no_in_surah),
        ("Unique Word Id", w.unique_word_id),
        ("Occurrence Count", unique.occurrence_count),
        ("Occurrence Count in Surah", index.occurrences_in_surah(w.unique_word_id, w.surah_serial_no)),
        ("Jummal Value of Word", jummal(w.text_with_tashkeel, table)),
        ("Letter Count", w.letter_range.count),
        ("First Letter in Word Serial No", w.letter_range.start),
        ("First Letter in Word Serial No (Backward)", index.backward("letter", w.letter_range.start)),
        ("Last Letter in Word Serial No", w.letter_range.end),
        ("Last Letter in Word Serial No (Backward)", index.backward("letter", w.letter_range.end)),
        ("Ayah Serial No", w.ayah_serial_no),
        ("Surah Serial No", w.surah_serial_no),
        ("Surah Name", surah.name),
    )
    return StatsReport(granularity="word", rows=rows)


def selection_stats(index: CorpusIndex, selection: Selection, table: AbjadTable = DEFAULT_TABLE) -> StatsReport:
    """Stats over a highlighted span; a word counts if any character overlaps."""
    ayah = index.check_selection(selection)
    text = ayah.text_with_tashkeel[selection.start_offset : selection.end_offset]
    word_count = sum(
        1
        for start, end in ayah.word_char_spans
        if start < selection.end_offset and selection.start_offset < end
    )
    letter_count = len(index.tokenizer.letters_of(text))
    rows = (
        ("Selected Text", text),
        ("Word Count", word_count),
        ("Letter Count", letter_count),
        ("Jummal Value of Selection", jummal(text, table)),
    )
    return StatsReport(granularity="selection", rows=rows)
