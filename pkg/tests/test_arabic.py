import unicodedata

from hypothesis import given
from hypothesis import strategies as st

from mushaf.arabic import (
    LETTER_SET,
    TASHKEEL_SET,
    letter_clusters,
    letters_of,
    strip_tashkeel,
    tokenize_ayah,
)

BASMALA = "بِسۡمِ ٱللَّهِ ٱلرَّحۡمَٰنِ ٱلرَّحِيمِ"

arabic_text = st.text(
    alphabet=sorted(LETTER_SET | TASHKEEL_SET | {" "}), max_size=60
)


def test_strip_tashkeel_basic():
    assert strip_tashkeel("بِسْمِ") == "بسم"


def test_strip_tashkeel_empty():
    assert strip_tashkeel("") == ""


def test_strip_tashkeel_dagger_alef_removed():
    # 6-letter form: the dagger alef is a mark, not a letter
    assert letters_of("ٱلرَّحْمَٰنِ") == ["ٱ", "ل", "ر", "ح", "م", "ن"]


def test_strip_tashkeel_preserves_spaces():
    assert strip_tashkeel(BASMALA) == "بسم ٱلله ٱلرحمن ٱلرحيم"


def test_strip_tashkeel_normalizes_nfc():
    # decomposed alef+madda composes to U+0622 before classification
    assert strip_tashkeel("آ") == "آ"


@given(arabic_text)
def test_strip_output_alphabet(text):
    assert all(ch in LETTER_SET or ch == " " for ch in strip_tashkeel(text))


@given(arabic_text)
def test_strip_idempotent(text):
    once = strip_tashkeel(text)
    assert strip_tashkeel(once) == once


@given(arabic_text)
def test_strip_preserves_letter_order(text):
    normalized = unicodedata.normalize("NFC", text)
    assert letters_of(strip_tashkeel(text)) == [c for c in normalized if c in LETTER_SET]


def test_tokenize_basmala():
    assert len(tokenize_ayah(BASMALA)) == 4


def test_tokenize_single_word():
    assert tokenize_ayah("بِسۡمِ") == ["بِسۡمِ"]


def test_tokenize_no_empty_tokens():
    assert tokenize_ayah("  بِسۡمِ   ٱللَّهِ  ") == ["بِسۡمِ", "ٱللَّهِ"]


def test_tokenize_drops_letterless_tokens():
    # a stray annotation sign is not a word
    assert tokenize_ayah("۞ بِسۡمِ") == ["بِسۡمِ"]


def test_tokenize_empty():
    assert tokenize_ayah("") == []


@given(arabic_text)
def test_tokenize_round_trip(text):
    tokens = tokenize_ayah(text)
    rejoined = " ".join(tokens)
    # round-trips modulo whitespace normalization and letterless tokens
    assert tokenize_ayah(rejoined) == tokens


def test_letter_clusters_attach_marks():
    assert letter_clusters("رَبِّ") == ["رَ", "بِّ"]


def test_letter_clusters_concat_identity():
    word = "ٱلرَّحۡمَٰنِ"
    clusters = letter_clusters(word)
    assert "".join(clusters) == unicodedata.normalize("NFC", word)
    assert len(clusters) == 6


def test_letter_clusters_leading_marks_fold_into_first():
    # orphan leading marks (as in corpus tokens split mid-word) join the first letter
    assert letter_clusters("ٰٔتُمۡ") == ["ٰٔتُ", "مۡ"]


@given(arabic_text)
def test_letter_clusters_count_matches_letters(text):
    for token in tokenize_ayah(text):
        assert len(letter_clusters(token)) == len(letters_of(token))
