"""Corpus-indexing and query-publishing engine for the Quranic text."""

__version__ = "0.1.0"

from .abjad import DEFAULT_TABLE, AbjadTable, jummal
from .arabic import Tokenizer, letter_clusters, letters_of, strip_tashkeel, tokenize_ayah
from .corpus import (
    AyahRecord,
    CorpusIndex,
    CorpusMetadata,
    LetterRecord,
    Selection,
    Span,
    SurahRecord,
    UniqueWord,
    WordRecord,
    ingest,
    ingest_files,
    load_metadata_dir,
)
from .errors import MushafError
from .querylab import (
    ExecutionLimits,
    HyperlinkColumn,
    ParameterSpec,
    QueryDefinition,
    RelationalStore,
    ResultGrid,
    bind_parameters,
    execute_detail,
    execute_main,
    validate_query,
)
from .splitter import SplitRequest, SplitResult, split
from .stats import StatsReport, ayah_stats, selection_stats, surah_stats, word_stats
from .store import build_store, file_hash, load_index
from .wiki import Principal, PublicationRecord, WikiStore, WikiTopic

__all__ = [
    "AbjadTable",
    "AyahRecord",
    "CorpusIndex",
    "CorpusMetadata",
    "DEFAULT_TABLE",
    "ExecutionLimits",
    "HyperlinkColumn",
    "LetterRecord",
    "MushafError",
    "ParameterSpec",
    "Principal",
    "PublicationRecord",
    "QueryDefinition",
    "RelationalStore",
    "ResultGrid",
    "Selection",
    "Span",
    "SplitRequest",
    "SplitResult",
    "StatsReport",
    "SurahRecord",
    "Tokenizer",
    "UniqueWord",
    "WikiStore",
    "WikiTopic",
    "WordRecord",
    "ayah_stats",
    "bind_parameters",
    "build_store",
    "execute_detail",
    "execute_main",
    "file_hash",
    "ingest",
    "ingest_files",
    "jummal",
    "letter_clusters",
    "letters_of",
    "load_index",
    "load_metadata_dir",
    "selection_stats",
    "split",
    "stats",
    "strip_tashkeel",
    "surah_stats",
    "tokenize_ayah",
    "validate_query",
    "word_stats",
]
