"""SQLite-backed relational store: the serialized index and query substrate.

One file holds the published query schema (Surahs/Ayahs/Words/UniqueWords/
Letters), the layout tables and a Meta table with format version and the
content hash of the ingested inputs. Building a store is deterministic:
identical indexes produce byte-identical files.

Read access for query execution is hardened in three layers: the connection
is opened read-only, ``query_only`` is set, and an authorizer denies every
operation other than reading.
"""

from __future__ import annotations

import hashlib
import sqlite3
from pathlib import Path

from .abjad import DEFAULT_TABLE, AbjadTable, jummal
from .corpus import CorpusIndex, CorpusMetadata, SurahMeta, ingest
from .errors import IngestError, QueryError

FORMAT_VERSION = "1"

# Tables query authors may rely on; column names are part of the public contract.
PUBLIC_SCHEMA = {
    "Surahs": [
        "SurahSerialNo", "SurahSerialNoBackward", "SurahName", "SurahFullName",
        "RevelationSequenceNo", "AyahCount", "WordCount", "LetterCount",
    ],
    "Ayahs": [
        "AyahSerialNo", "SurahSerialNo", "AyahNoInSurah", "Ayah", "AyahNoTashkeel",
        "PageNo", "JuzNo", "RubNo", "WordCount", "LetterCount", "JummalValue",
    ],
    "Words": [
        "WordSerialNo", "AyahSerialNo", "SurahSerialNo", "WordNoInAyah", "Word",
        "WordNoTashkeel", "UniqueWordId", "LetterCount", "JummalValue",
    ],
    "UniqueWords": ["UniqueWordId", "Word", "WordNoTashkeel", "OccurrenceCount"],
    "Letters": ["LetterSerialNo", "WordSerialNo", "Letter"],
}

_DDL = """
CREATE TABLE Meta (Key TEXT PRIMARY KEY, Value TEXT NOT NULL) WITHOUT ROWID;
CREATE TABLE Surahs (
    SurahSerialNo INTEGER PRIMARY KEY,
    SurahSerialNoBackward INTEGER NOT NULL,
    SurahName TEXT NOT NULL,
    SurahFullName TEXT NOT NULL,
    RevelationSequenceNo INTEGER NOT NULL,
    AyahCount INTEGER NOT NULL,
    WordCount INTEGER NOT NULL,
    LetterCount INTEGER NOT NULL
);
CREATE TABLE Ayahs (
    AyahSerialNo INTEGER PRIMARY KEY,
    SurahSerialNo INTEGER NOT NULL REFERENCES Surahs(SurahSerialNo),
    AyahNoInSurah INTEGER NOT NULL,
    Ayah TEXT NOT NULL,
    AyahNoTashkeel TEXT NOT NULL,
    PageNo INTEGER NOT NULL,
    JuzNo INTEGER NOT NULL,
    RubNo INTEGER NOT NULL,
    WordCount INTEGER NOT NULL,
    LetterCount INTEGER NOT NULL,
    JummalValue INTEGER NOT NULL
);
CREATE TABLE Words (
    WordSerialNo INTEGER PRIMARY KEY,
    AyahSerialNo INTEGER NOT NULL REFERENCES Ayahs(AyahSerialNo),
    SurahSerialNo INTEGER NOT NULL REFERENCES Surahs(SurahSerialNo),
    WordNoInAyah INTEGER NOT NULL,
    Word TEXT NOT NULL,
    WordNoTashkeel TEXT NOT NULL,
    UniqueWordId INTEGER NOT NULL REFERENCES UniqueWords(UniqueWordId),
    LetterCount INTEGER NOT NULL,
    JummalValue INTEGER NOT NULL
);
CREATE TABLE UniqueWords (
    UniqueWordId INTEGER PRIMARY KEY,
    Word TEXT NOT NULL,
    WordNoTashkeel TEXT NOT NULL,
    OccurrenceCount INTEGER NOT NULL
);
CREATE TABLE Letters (
    LetterSerialNo INTEGER PRIMARY KEY,
    WordSerialNo INTEGER NOT NULL REFERENCES Words(WordSerialNo),
    Letter TEXT NOT NULL
);
CREATE TABLE LayoutPages (PageNo INTEGER PRIMARY KEY, SurahNo INTEGER NOT NULL, AyahNo INTEGER NOT NULL);
CREATE TABLE LayoutJuzs (JuzNo INTEGER PRIMARY KEY, SurahNo INTEGER NOT NULL, AyahNo INTEGER NOT NULL);
CREATE TABLE LayoutRubs (RubNo INTEGER PRIMARY KEY, SurahNo INTEGER NOT NULL, AyahNo INTEGER NOT NULL);
CREATE INDEX IxAyahsSurah ON Ayahs(SurahSerialNo);
CREATE INDEX IxWordsAyah ON Words(AyahSerialNo);
CREATE INDEX IxWordsUnique ON Words(UniqueWordId);
CREATE INDEX IxWordsSurah ON Words(SurahSerialNo);
CREATE INDEX IxLettersWord ON Letters(WordSerialNo);
"""


def build_store(
    index: CorpusIndex, path: str | Path, table: AbjadTable = DEFAULT_TABLE
) -> None:
    """Write the index to ``path``, replacing any existing file."""
    path = Path(path)
    if path.exists():
        path.unlink()
    path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(path)
    try:
        conn.execute("PRAGMA journal_mode=OFF")
        conn.execute("PRAGMA synchronous=OFF")
        conn.executescript(_DDL)
        conn.executemany(
            "INSERT INTO Surahs VALUES (?,?,?,?,?,?,?,?)",
            (
                (
                    s.surah_serial_no, s.surah_serial_no_backward, s.name, s.full_name,
                    s.revelation_sequence_no, s.ayah_range.count, s.word_range.count,
                    s.letter_range.count,
                )
                for s in index.surahs
            ),
        )
        conn.executemany(
            "INSERT INTO Ayahs VALUES (?,?,?,?,?,?,?,?,?,?,?)",
            (
                (
                    a.ayah_serial_no, a.surah_serial_no, a.ayah_no_in_surah,
                    a.text_with_tashkeel, a.text_no_tashkeel, a.page_no, a.juz_no,
                    a.rub_no, a.word_range.count, a.letter_range.count,
                    jummal(a.text_with_tashkeel, table),
                )
                for a in index.ayahs
            ),
        )
        conn.executemany(
            "INSERT INTO Words VALUES (?,?,?,?,?,?,?,?,?)",
            (
                (
                    w.word_serial_no, w.ayah_serial_no, w.surah_serial_no,
                    w.word_no_in_ayah, w.text_with_tashkeel, w.text_no_tashkeel,
                    w.unique_word_id, w.letter_range.count,
                    jummal(w.text_with_tashkeel, table),
                )
                for w in index.words
            ),
        )
        conn.executemany(
            "INSERT INTO UniqueWords VALUES (?,?,?,?)",
            (
                (u.unique_word_id, u.text_with_tashkeel, u.text_no_tashkeel, u.occurrence_count)
                for u in index.unique_words
            ),
        )
        conn.executemany(
            "INSERT INTO Letters VALUES (?,?,?)",
            ((l.letter_serial_no, l.word_serial_no, l.letter) for l in index.letters()),
        )
        for table_name, unit_count, resolver in (
            ("LayoutPages", index.total_pages, lambda n: index.navigate(page=n)),
            ("LayoutJuzs", index.total_juzs, lambda n: index.navigate(juz=n)),
            ("LayoutRubs", index.total_rubs, lambda n: index.navigate(rub=n)),
        ):
            rows = []
            for unit_no in range(1, unit_count + 1):
                serial = resolver(unit_no).ayah_serial_no
                surah_no, ayah_no = index.resolve_ayah(serial)
                rows.append((unit_no, surah_no, ayah_no))
            conn.executemany(f"INSERT INTO {table_name} VALUES (?,?,?)", rows)
        conn.executemany(
            "INSERT INTO Meta VALUES (?,?)",
            [
                ("format_version", FORMAT_VERSION),
                ("content_hash", index.content_hash),
                ("total_surahs", str(index.total_surahs)),
                ("total_ayahs", str(index.total_ayahs)),
                ("total_words", str(index.total_words)),
                ("total_letters", str(index.total_letters)),
            ],
        )
        conn.commit()
    finally:
        conn.close()


def load_index(path: str | Path) -> CorpusIndex:
    """Rebuild the in-memory index from a store file.

    Reconstructs corpus lines and metadata from the stored tables and re-runs
    ingestion, then cross-checks the embedded content hash. One code path for
    fresh and loaded indexes keeps them provably identical.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"index store not found: {path}")
    conn = sqlite3.connect(f"file:{path}?mode=ro", uri=True)
    try:
        meta = dict(conn.execute("SELECT Key, Value FROM Meta"))
        if meta.get("format_version") != FORMAT_VERSION:
            raise IngestError(
                f"unsupported store format {meta.get('format_version')!r} (want {FORMAT_VERSION})"
            )
        lines = [
            f"{surah_no}|{ayah_no}|{text}"
            for surah_no, ayah_no, text in conn.execute(
                "SELECT SurahSerialNo, AyahNoInSurah, Ayah FROM Ayahs ORDER BY AyahSerialNo"
            )
        ]
        surahs = tuple(
            SurahMeta(name=name, full_name=full_name, revelation_sequence_no=rev)
            for name, full_name, rev in conn.execute(
                "SELECT SurahName, SurahFullName, RevelationSequenceNo FROM Surahs ORDER BY SurahSerialNo"
            )
        )
        layouts = {}
        for table_name, label in (("LayoutPages", "PageNo"), ("LayoutJuzs", "JuzNo"), ("LayoutRubs", "RubNo")):
            layouts[table_name] = tuple(
                (surah_no, ayah_no)
                for surah_no, ayah_no in conn.execute(
                    f"SELECT SurahNo, AyahNo FROM {table_name} ORDER BY {label}"
                )
            )
    finally:
        conn.close()
    metadata = CorpusMetadata(
        surahs=surahs,
        pages=layouts["LayoutPages"],
        juzs=layouts["LayoutJuzs"],
        rubs=layouts["LayoutRubs"],
    )
    index = ingest(lines, metadata)
    if index.content_hash != meta.get("content_hash"):
        raise IngestError(
            f"store content hash mismatch: file says {meta.get('content_hash')}, "
            f"rebuilt index has {index.content_hash}"
        )
    return index


def file_hash(path: str | Path) -> str:
    """sha256 of the store file bytes; used to prove executions never write."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


_READONLY_ALLOWED = frozenset(
    {sqlite3.SQLITE_SELECT, sqlite3.SQLITE_READ, sqlite3.SQLITE_FUNCTION, sqlite3.SQLITE_RECURSIVE}
)


def _deny_writes(action: int, *args: object) -> int:
    return sqlite3.SQLITE_OK if action in _READONLY_ALLOWED else sqlite3.SQLITE_DENY


def open_read_connection(path: str | Path) -> sqlite3.Connection:
    """Read-only connection hardened against any state mutation."""
    path = Path(path)
    if not path.exists():
        raise QueryError(f"relational store not found: {path}")
    conn = sqlite3.connect(f"file:{path}?mode=ro", uri=True, check_same_thread=False)
    conn.execute("PRAGMA query_only=ON")
    conn.set_authorizer(_deny_writes)
    return conn
