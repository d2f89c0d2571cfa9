import pytest

from mushaf import Selection
from mushaf.errors import NotFoundError, SelectionError
from mushaf.stats import ayah_stats, selection_stats, surah_stats, word_stats

SURAH_LABELS = [
    "Surah Serial No",
    "Surah Serial No (Backward)",
    "Surah Name",
    "Jummal Value of Surah Name",
    "Surah Full Name",
    "Jummal Value of Full Surah Name",
    "Jummal Value of Surah Text",
    "Revelation Sequence No",
    "First Ayah in Surah Serial No",
    "First Ayah in Surah Serial No (Backward)",
    "Last Ayah in Surah Serial No",
    "Last Ayah in Surah Serial No (Backward)",
    "Ayah Count",
    "First Word in Surah Serial No",
    "First Word in Surah Serial No (Backward)",
    "Last Word in Surah Serial No",
    "Last Word in Surah Serial No (Backward)",
    "Word Count",
    "First Letter in Surah Serial No",
    "First Letter in Surah Serial No (Backward)",
    "Last Letter in Surah Serial No",
    "Last Letter in Surah Serial No (Backward)",
    "Letter Count",
]


def test_surah_report_labels_fixed(toy_index):
    assert surah_stats(toy_index, 1).labels() == SURAH_LABELS
    assert len(SURAH_LABELS) == 23


def test_toy_surah2_rows_hand_computed(toy_index):
    report = surah_stats(toy_index, 2)
    expected = {
        "Surah Serial No": 2,
        "Surah Serial No (Backward)": 1,
        "Surah Name": "الفلق",
        "Jummal Value of Surah Name": 241,
        "Surah Full Name": "سورة الفلق",
        "Jummal Value of Full Surah Name": 512,
        "Jummal Value of Surah Text": 443,
        "Revelation Sequence No": 20,
        "First Ayah in Surah Serial No": 3,
        "First Ayah in Surah Serial No (Backward)": 1,
        "Last Ayah in Surah Serial No": 3,
        "Last Ayah in Surah Serial No (Backward)": 1,
        "Ayah Count": 1,
        "First Word in Surah Serial No": 7,
        "First Word in Surah Serial No (Backward)": 2,
        "Last Word in Surah Serial No": 8,
        "Last Word in Surah Serial No (Backward)": 1,
        "Word Count": 2,
        "First Letter in Surah Serial No": 24,
        "First Letter in Surah Serial No (Backward)": 7,
        "Last Letter in Surah Serial No": 30,
        "Last Letter in Surah Serial No (Backward)": 1,
        "Letter Count": 7,
    }
    assert dict(report.rows) == expected


def test_toy_ayah3_rows_hand_computed(toy_index):
    report = ayah_stats(toy_index, 3)
    expected = {
        "Ayah Serial No": 3,
        "Ayah Serial No (Backward)": 1,
        "Ayah No in Surah": 1,
        "Ayah No in Surah (Backward)": 1,
        "Surah Serial No": 2,
        "Surah Name": "الفلق",
        "Jummal Value of Ayah Text": 443,
        "First Word in Ayah Serial No": 7,
        "First Word in Ayah Serial No (Backward)": 2,
        "Last Word in Ayah Serial No": 8,
        "Last Word in Ayah Serial No (Backward)": 1,
        "Word Count": 2,
        "First Letter in Ayah Serial No": 24,
        "First Letter in Ayah Serial No (Backward)": 7,
        "Last Letter in Ayah Serial No": 30,
        "Last Letter in Ayah Serial No (Backward)": 1,
        "Letter Count": 7,
        "Page No": 2,
        "Juz No": 2,
        "Rub No": 3,
    }
    assert dict(report.rows) == expected


def test_toy_word5_rows_hand_computed(toy_index):
    report = word_stats(toy_index, 5)
    expected = {
        "Word Serial No": 5,
        "Word Serial No (Backward)": 4,
        "Word No in Ayah": 2,
        "Word No in Surah": 5,
        "Unique Word Id": 5,
        "Occurrence Count": 1,
        "Occurrence Count in Surah": 1,
        "Jummal Value of Word": 65,
        "Letter Count": 3,
        "First Letter in Word Serial No": 19,
        "First Letter in Word Serial No (Backward)": 12,
        "Last Letter in Word Serial No": 21,
        "Last Letter in Word Serial No (Backward)": 10,
        "Ayah Serial No": 2,
        "Surah Serial No": 1,
        "Surah Name": "الفاتحة",
    }
    assert dict(report.rows) == expected


def test_word_stats_repeated_word(toy_index):
    report = word_stats(toy_index, 7)
    assert report.value("Unique Word Id") == 6
    assert report.value("Occurrence Count") == 2
    assert report.value("Occurrence Count in Surah") == 1


def test_ayah1_forward_serials_all_one(toy_index):
    report = ayah_stats(toy_index, 1)
    assert report.value("Ayah Serial No") == 1
    assert report.value("First Word in Ayah Serial No") == 1
    assert report.value("First Letter in Ayah Serial No") == 1


def test_word1_forward_serials_all_one(toy_index):
    report = word_stats(toy_index, 1)
    assert report.value("Word Serial No") == 1
    assert report.value("Word No in Ayah") == 1
    assert report.value("First Letter in Word Serial No") == 1


def test_fwd_bwd_pairs_sum_to_total_plus_one(toy_index):
    totals = {
        "Surah": toy_index.total_surahs,
        "Ayah": toy_index.total_ayahs,
        "Word": toy_index.total_words,
        "Letter": toy_index.total_letters,
    }
    reports = [surah_stats(toy_index, 1), surah_stats(toy_index, 2)]
    reports += [ayah_stats(toy_index, s) for s in (1, 2, 3)]
    reports += [word_stats(toy_index, s) for s in range(1, 9)]
    for report in reports:
        for label, value in report.rows:
            if not label.endswith("(Backward)"):
                continue
            fwd = report.value(label.removesuffix(" (Backward)"))
            if label == "Ayah No in Surah (Backward)":
                # within-surah pair: sums to the containing surah's ayah count + 1
                surah = toy_index.surah(int(report.value("Surah Serial No")))
                total = surah.ayah_range.count
            else:
                # the serial-numbered granularity is the first one named in the label
                granularity = min(
                    (g for g in totals if g in label), key=lambda g: label.index(g)
                )
                total = totals[granularity]
            assert value + fwd == total + 1, (report.granularity, label)


def test_surah_counts_equal_sum_of_ayah_counts(toy_index):
    for surah_no in (1, 2):
        s_report = surah_stats(toy_index, surah_no)
        spans = toy_index.surah(surah_no).ayah_range
        a_reports = [ayah_stats(toy_index, serial) for serial in spans]
        assert s_report.value("Word Count") == sum(r.value("Word Count") for r in a_reports)
        assert s_report.value("Letter Count") == sum(r.value("Letter Count") for r in a_reports)


def test_reports_pure(toy_index):
    assert surah_stats(toy_index, 1) == surah_stats(toy_index, 1)
    assert word_stats(toy_index, 3) == word_stats(toy_index, 3)


def test_out_of_range(toy_index):
    with pytest.raises(NotFoundError):
        surah_stats(toy_index, 3)
    with pytest.raises(NotFoundError):
        ayah_stats(toy_index, 4)
    with pytest.raises(NotFoundError):
        word_stats(toy_index, 9)


def test_selection_first_word(toy_index):
    # first word of the first ayah: 1 word, 3 letters, jummal 2+60+40
    report = selection_stats(toy_index, Selection(1, 0, 6))
    assert report.value("Selected Text") == "بِسۡمِ"
    assert report.value("Word Count") == 1
    assert report.value("Letter Count") == 3
    assert report.value("Jummal Value of Selection") == 102


def test_selection_partial_words_count(toy_index):
    # span straddling the first space touches both words
    report = selection_stats(toy_index, Selection(1, 5, 8))
    assert report.value("Word Count") == 2


def test_selection_full_ayah_matches_ayah_stats(toy_index):
    for serial in (1, 2, 3):
        text = toy_index.ayah(serial).text_with_tashkeel
        sel = selection_stats(toy_index, Selection(serial, 0, len(text)))
        ayah = ayah_stats(toy_index, serial)
        assert sel.value("Word Count") == ayah.value("Word Count")
        assert sel.value("Letter Count") == ayah.value("Letter Count")
        assert sel.value("Jummal Value of Selection") == ayah.value("Jummal Value of Ayah Text")


def test_selection_empty_span_rejected(toy_index):
    with pytest.raises(SelectionError):
        selection_stats(toy_index, Selection(1, 3, 3))
