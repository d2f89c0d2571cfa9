import pytest
from hypothesis import given
from hypothesis import strategies as st

from mushaf import Selection
from mushaf.errors import NotFoundError
from mushaf.splitter import SplitRequest, split


def test_surah_letters_without_tashkeel_ungrouped(toy_index):
    result = split(toy_index, SplitRequest("letters", "without", "none", surah_no=1))
    assert result.tokens[:3] == ("ب", "س", "م")
    assert len(result.tokens) == 23


def test_split_length_matches_stats_letter_count(toy_index):
    from mushaf.stats import ayah_stats

    for serial in (1, 2, 3):
        result = split(toy_index, SplitRequest("letters", "without", "none", ayah_serial_no=serial))
        assert len(result.tokens) == ayah_stats(toy_index, serial).value("Letter Count")


def test_single_word_target_words_unit_identity(toy_index):
    result = split(toy_index, SplitRequest("words", "with", "none", word_serial_no=3))
    assert result.tokens == (toy_index.word(3).text_with_tashkeel,)


def test_words_concat_reproduces_text(toy_index):
    for serial in (1, 2, 3):
        a = toy_index.ayah(serial)
        result = split(toy_index, SplitRequest("words", "with", "none", ayah_serial_no=serial))
        assert " ".join(result.tokens) == " ".join(a.text_with_tashkeel.split())


def test_grouped_counts_sum_to_ungrouped_length(toy_index):
    requests = [
        SplitRequest(unit, tashkeel, "grouped", surah_no=1)
        for unit in ("letters", "words")
        for tashkeel in ("with", "without")
    ]
    for grouped_req in requests:
        ungrouped_req = SplitRequest(
            grouped_req.unit, grouped_req.tashkeel, "none", surah_no=1
        )
        grouped = split(toy_index, grouped_req)
        ungrouped = split(toy_index, ungrouped_req)
        assert grouped.total == len(ungrouped.tokens)


def test_grouped_first_occurrence_order(toy_index):
    # surah 1 letters: ب س م ٱ ل ل ه ٱ ل ر ح م ن | ٱ ل ح م د ل ل ه ر ب
    result = split(toy_index, SplitRequest("letters", "without", "grouped", surah_no=1))
    tokens = [token for token, _ in result.groups]
    assert tokens[:4] == ["ب", "س", "م", "ٱ"]
    counts = dict(result.groups)
    assert counts["ل"] == 6
    assert counts["م"] == 3


def test_grouped_with_tashkeel_never_merges_distinct_marks(toy_index):
    # the two lam-heavy words differ in marks; with-tashkeel grouping keeps them apart
    with_marks = split(toy_index, SplitRequest("letters", "with", "grouped", ayah_serial_no=2))
    without = split(toy_index, SplitRequest("letters", "without", "grouped", ayah_serial_no=2))
    assert len(with_marks.groups) >= len(without.groups)
    for token, _ in with_marks.groups:
        assert len([c for c in token if toy_index.tokenizer.is_letter(c)]) == 1


def test_word_grouping_merges_identical_forms(toy_index):
    result = split(toy_index, SplitRequest("words", "with", "grouped", surah_no=2))
    assert dict(result.groups)[toy_index.word(7).text_with_tashkeel] == 1
    full = split(
        toy_index, SplitRequest("words", "with", "grouped", ayah_serial_no=2)
    )
    assert full.total == 3


def test_selection_split(toy_index):
    text = toy_index.ayah(1).text_with_tashkeel
    sel = Selection(1, 0, len(text))
    result = split(toy_index, SplitRequest("letters", "without", "none", selection=sel))
    assert len(result.tokens) == toy_index.ayah(1).letter_range.count
    words = split(toy_index, SplitRequest("words", "with", "none", selection=sel))
    assert len(words.tokens) == 3


def test_invalid_targets(toy_index):
    with pytest.raises(NotFoundError):
        split(toy_index, SplitRequest("letters", "without", "none", surah_no=99))
    with pytest.raises(NotFoundError):
        SplitRequest("letters", "without", "none")
    with pytest.raises(NotFoundError):
        SplitRequest("letters", "without", "none", surah_no=1, ayah_serial_no=1)
    with pytest.raises(NotFoundError):
        SplitRequest("phonemes", "without", "none", surah_no=1)


def test_result_serialization(toy_index):
    ungrouped = split(toy_index, SplitRequest("letters", "without", "none", word_serial_no=1))
    d = ungrouped.to_dict()
    assert d["grouping"] == "none"
    assert d["rows"][0] == {"row_no": 1, "token": "ب"}
    grouped = split(toy_index, SplitRequest("letters", "without", "grouped", word_serial_no=2))
    d = grouped.to_dict()
    assert d["grouping"] == "grouped"
    assert {"token": "ل", "count": 2} in d["rows"]


@given(
    unit=st.sampled_from(["letters", "words"]),
    tashkeel=st.sampled_from(["with", "without"]),
    serial=st.integers(min_value=1, max_value=3),
)
def test_group_sum_property(unit, tashkeel, serial):
    grouped = split(_INDEX, SplitRequest(unit, tashkeel, "grouped", ayah_serial_no=serial))
    ungrouped = split(_INDEX, SplitRequest(unit, tashkeel, "none", ayah_serial_no=serial))
    assert grouped.total == len(ungrouped.tokens)
    assert all(count >= 1 for _, count in grouped.groups)


# -- full-corpus splits ----------------------------------------------------


def test_full_surah1_letters_begin_with_basmala(full_index):
    result = split(full_index, SplitRequest("letters", "without", "none", surah_no=1))
    assert result.tokens[:3] == ("ب", "س", "م")
    assert len(result.tokens) == 139


def test_full_basmala_grouped_letters(full_index):
    result = split(full_index, SplitRequest("letters", "without", "grouped", ayah_serial_no=1))
    counts = dict(result.groups)
    assert result.total == 19
    assert len(result.groups) == 10
    assert counts["ل"] == 4


def _make_index():
    from conftest import toy_corpus_lines, toy_metadata
    from mushaf import ingest

    return ingest(toy_corpus_lines(), toy_metadata())


_INDEX = _make_index()
