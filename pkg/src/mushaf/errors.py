"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class MushafError(Exception):
    """Base class for all engine errors."""

    code = "error"


class IngestError(MushafError):
    """Malformed corpus or metadata input."""

    code = "ingest_error"


class NotFoundError(MushafError):
    """A surah/ayah/word/letter/page/query/job that does not exist."""

    code = "not_found"


class SelectionError(MushafError):
    """Invalid selection offsets."""

    code = "invalid_selection"


class AbjadError(MushafError):
    """Text contains codepoints the abjad table cannot value."""

    code = "abjad_error"


class QueryError(MushafError):
    """Query definition, binding or execution failure."""

    code = "query_error"


class QueryTimeout(QueryError):
    """Execution exceeded the configured wall-clock budget."""

    code = "query_timeout"


class BindingError(QueryError):
    """Parameter values could not be bound."""

    code = "binding_error"


class WikiError(MushafError):
    """Lifecycle or topic-tree violation."""

    code = "wiki_error"


class WrongStateError(WikiError):
    """State transition attempted from an illegal state."""

    code = "wrong_state"


class AuthError(MushafError):
    """Missing or insufficient credentials."""

    code = "not_authorized"


class BackpressureError(MushafError):
    """Job queue is full."""

    code = "queue_full"
