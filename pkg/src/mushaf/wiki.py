"""Query lifecycle, topic-tree table of contents and publication records.

State machine (the only legal transitions):

    Draft -> Submitted        (developer submits a validating draft)
    Submitted -> Published    (admin decision; query enters the topic tree)
    Submitted -> Rejected     (admin decision with a reason)
    Rejected -> Draft         (owner revises; editing a rejected query reopens it)

The store is single-writer multi-reader: every mutation happens under one
lock and is flushed atomically (write temp file, rename over).
"""

from __future__ import annotations

import base64
import json
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .errors import AuthError, NotFoundError, WikiError, WrongStateError
from .querylab import QueryDefinition, ValidationReport

ROLES = ("public", "developer", "admin")

MAX_DOCUMENTATION_BYTES = 10 * 1024 * 1024

LEGAL_TRANSITIONS = {
    ("Draft", "Submitted"),
    ("Submitted", "Published"),
    ("Submitted", "Rejected"),
    ("Rejected", "Draft"),
}


@dataclass(frozen=True)
class Principal:
    name: str
    role: str = "public"

    @property
    def is_admin(self) -> bool:
        return self.role == "admin"

    @property
    def is_developer(self) -> bool:
        return self.role in ("developer", "admin")


PUBLIC = Principal(name="anonymous", role="public")


@dataclass
class WikiTopic:
    name: str
    children: list["WikiTopic"] = field(default_factory=list)
    query_ids: list[str] = field(default_factory=list)

    def child(self, name: str) -> "WikiTopic | None":
        for c in self.children:
            if c.name == name:
                return c
        return None

    def ensure_path(self, path: tuple[str, ...]) -> "WikiTopic":
        node = self
        for name in path:
            nxt = node.child(name)
            if nxt is None:
                nxt = WikiTopic(name=name)
                node.children.append(nxt)
            node = nxt
        return node

    def leaf_ids(self) -> list[str]:
        ids = list(self.query_ids)
        for c in self.children:
            ids.extend(c.leaf_ids())
        return ids

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "children": [c.to_dict() for c in self.children],
            "query_ids": list(self.query_ids),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WikiTopic":
        return cls(
            name=d["name"],
            children=[cls.from_dict(c) for c in d.get("children", [])],
            query_ids=list(d.get("query_ids", [])),
        )


@dataclass(frozen=True)
class PublicationRecord:
    query_id: str
    submitted_at: float
    decided_at: float | None = None
    decider: str | None = None
    decision: str | None = None  # Published | Rejected
    topic_path: tuple[str, ...] = ()
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "submitted_at": self.submitted_at,
            "decided_at": self.decided_at,
            "decider": self.decider,
            "decision": self.decision,
            "topic_path": list(self.topic_path),
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PublicationRecord":
        return cls(
            query_id=d["query_id"],
            submitted_at=d["submitted_at"],
            decided_at=d.get("decided_at"),
            decider=d.get("decider"),
            decision=d.get("decision"),
            topic_path=tuple(d.get("topic_path", [])),
            reason=d.get("reason"),
        )


class WikiStore:
    """Persistent store of definitions, records, topics and doc blobs."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.RLock()
        self._queries: dict[str, QueryDefinition] = {}
        self._records: list[PublicationRecord] = []
        self._root = WikiTopic(name="")
        self._docs: dict[str, dict] = {}  # query id -> {filename, content_b64}
        self._next_id = 1
        if self.path is not None and self.path.exists():
            with open(self.path, encoding="utf-8") as f:
                self._load(json.load(f))

    # -- persistence -----------------------------------------------------

    def _load(self, data: dict) -> None:
        self._queries = {
            q["id"]: QueryDefinition.from_dict(q) for q in data.get("queries", [])
        }
        self._records = [PublicationRecord.from_dict(r) for r in data.get("records", [])]
        self._root = WikiTopic.from_dict(data.get("topics", {"name": ""}))
        self._docs = dict(data.get("documentation", {}))
        self._next_id = data.get("next_id", len(self._queries) + 1)

    def export_archive(self) -> dict:
        with self._lock:
            return {
                "format": "mushaf-wiki/1",
                "next_id": self._next_id,
                "queries": [q.to_dict() for q in self._queries.values()],
                "records": [r.to_dict() for r in self._records],
                "topics": self._root.to_dict(),
                "documentation": dict(self._docs),
            }

    def import_archive(self, data: dict) -> None:
        if data.get("format") != "mushaf-wiki/1":
            raise WikiError(f"unknown archive format {data.get('format')!r}")
        with self._lock:
            self._load(data)
            self._flush()

    def _flush(self) -> None:
        if self.path is None:
            return
        payload = json.dumps(self.export_archive(), ensure_ascii=False, indent=1)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(payload)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- lookups -----------------------------------------------------------

    def get(self, query_id: str) -> QueryDefinition:
        with self._lock:
            defn = self._queries.get(query_id)
            if defn is None:
                raise NotFoundError(f"query {query_id!r} not found")
            return defn

    def list_queries(self, principal: Principal = PUBLIC) -> list[QueryDefinition]:
        """Published queries, plus the caller's own and everything for admins."""
        with self._lock:
            return [
                q
                for q in self._queries.values()
                if q.state == "Published" or principal.is_admin or q.owner == principal.name
            ]

    def records_for(self, query_id: str) -> list[PublicationRecord]:
        with self._lock:
            return [r for r in self._records if r.query_id == query_id]

    def toc(self) -> WikiTopic:
        """The topic tree; its leaves are exactly the Published query ids."""
        with self._lock:
            return WikiTopic.from_dict(self._root.to_dict())

    # -- developer CRUD --------------------------------------------------------

    def create_query(self, principal: Principal, **fields) -> QueryDefinition:
        if not principal.is_developer:
            raise AuthError("developer role required to author queries")
        with self._lock:
            query_id = f"q{self._next_id:04d}"
            self._next_id += 1
            defn = QueryDefinition(id=query_id, owner=principal.name, state="Draft", **fields)
            self._queries[query_id] = defn
            self._flush()
            return defn

    def _editable(self, defn: QueryDefinition, principal: Principal) -> None:
        if defn.owner != principal.name and not principal.is_admin:
            raise AuthError(f"query {defn.id} belongs to {defn.owner}")
        if defn.state not in ("Draft", "Rejected"):
            raise WrongStateError(f"query {defn.id} is {defn.state}; editable only in Draft or Rejected")

    def update_query(self, principal: Principal, query_id: str, **fields) -> QueryDefinition:
        """Edit a draft; editing a Rejected query reopens it as a Draft."""
        with self._lock:
            defn = self.get(query_id)
            self._editable(defn, principal)
            fields.pop("id", None)
            fields.pop("owner", None)
            fields.pop("state", None)
            updated = replace(defn, **fields)
            if defn.state == "Rejected":
                updated = replace(updated, state="Draft", rejection_reason=None)
            self._queries[query_id] = updated
            self._flush()
            return updated

    def delete_query(self, principal: Principal, query_id: str) -> None:
        with self._lock:
            defn = self.get(query_id)
            self._editable(defn, principal)
            del self._queries[query_id]
            self._docs.pop(query_id, None)
            self._flush()

    def set_documentation(
        self, principal: Principal, query_id: str, filename: str, content: bytes
    ) -> QueryDefinition:
        if len(content) > MAX_DOCUMENTATION_BYTES:
            raise WikiError(
                f"documentation exceeds {MAX_DOCUMENTATION_BYTES // (1024 * 1024)} MB cap"
            )
        with self._lock:
            defn = self.get(query_id)
            self._editable(defn, principal)
            self._docs[query_id] = {
                "filename": filename,
                "content_b64": base64.b64encode(content).decode("ascii"),
            }
            updated = replace(defn, documentation_name=filename)
            if defn.state == "Rejected":
                updated = replace(updated, state="Draft", rejection_reason=None)
            self._queries[query_id] = updated
            self._flush()
            return updated

    def get_documentation(self, query_id: str) -> tuple[str, bytes]:
        with self._lock:
            self.get(query_id)
            doc = self._docs.get(query_id)
            if doc is None:
                raise NotFoundError(f"query {query_id} has no documentation")
            return doc["filename"], base64.b64decode(doc["content_b64"])

    # -- lifecycle ----------------------------------------------------------------

    def submit(
        self,
        principal: Principal,
        query_id: str,
        validator: Callable[[QueryDefinition], ValidationReport],
    ) -> QueryDefinition:
        """Draft -> Submitted, gated on a clean validation report."""
        with self._lock:
            defn = self.get(query_id)
            if defn.owner != principal.name and not principal.is_admin:
                raise AuthError(f"query {query_id} belongs to {defn.owner}")
            if defn.state != "Draft":
                raise WrongStateError(f"cannot submit from state {defn.state}")
            report = validator(defn)
            if not report.ok:
                messages = "; ".join(v.message for v in report.violations)
                raise WikiError(f"validation failed: {messages}")
            updated = replace(defn, state="Submitted")
            self._queries[query_id] = updated
            self._records.append(
                PublicationRecord(query_id=query_id, submitted_at=time.time())
            )
            self._flush()
            return updated

    def decide(
        self,
        principal: Principal,
        query_id: str,
        decision: str,
        topic_path: tuple[str, ...] = (),
        reason: str | None = None,
    ) -> QueryDefinition:
        """Submitted -> Published (into the ToC) or Submitted -> Rejected."""
        if not principal.is_admin:
            raise AuthError("admin role required to decide publications")
        if decision not in ("Published", "Rejected"):
            raise WikiError(f"decision must be Published or Rejected, got {decision!r}")
        with self._lock:
            defn = self.get(query_id)
            if defn.state != "Submitted":
                raise WrongStateError(f"cannot decide a query in state {defn.state}")
            record_idx = next(
                (
                    i
                    for i in range(len(self._records) - 1, -1, -1)
                    if self._records[i].query_id == query_id and self._records[i].decision is None
                ),
                None,
            )
            if record_idx is None:
                raise WikiError(f"no open submission record for {query_id}")
            if decision == "Published":
                if not topic_path or not all(name.strip() for name in topic_path):
                    raise WikiError("publication requires a non-empty topic path")
                node = self._root.ensure_path(tuple(topic_path))
                node.query_ids.append(query_id)
                updated = replace(defn, state="Published", topic_path=tuple(topic_path))
            else:
                updated = replace(defn, state="Rejected", rejection_reason=reason or "")
            self._queries[query_id] = updated
            self._records[record_idx] = replace(
                self._records[record_idx],
                decided_at=time.time(),
                decider=principal.name,
                decision=decision,
                topic_path=tuple(topic_path),
                reason=reason,
            )
            self._flush()
            return updated

    def revise(self, principal: Principal, query_id: str) -> QueryDefinition:
        """Rejected -> Draft without content changes."""
        with self._lock:
            defn = self.get(query_id)
            if defn.owner != principal.name and not principal.is_admin:
                raise AuthError(f"query {query_id} belongs to {defn.owner}")
            if defn.state != "Rejected":
                raise WrongStateError(f"cannot revise a query in state {defn.state}")
            updated = replace(defn, state="Draft", rejection_reason=None)
            self._queries[query_id] = updated
            self._flush()
            return updated

    # -- pages ------------------------------------------------------------------

    def query_page(self, principal: Principal, query_id: str) -> dict:
        """Page bundle: description, documentation link, source SQL, runnable form."""
        with self._lock:
            defn = self.get(query_id)
            if defn.state != "Published" and defn.owner != principal.name and not principal.is_admin:
                raise AuthError(f"query {query_id} is not published")
            return {
                "id": defn.id,
                "title": defn.title,
                "description": defn.description,
                "state": defn.state,
                "topic_path": list(defn.topic_path),
                "documentation_name": defn.documentation_name,
                "main_sql": defn.main_sql,
                "detail_sql": defn.detail_sql,
                "parameters": [p.to_dict() for p in defn.parameters],
                "hyperlink_columns": [h.to_dict() for h in defn.hyperlink_columns],
                "rejection_reason": defn.rejection_reason,
            }

    def published_ids(self) -> set[str]:
        with self._lock:
            return {q.id for q in self._queries.values() if q.state == "Published"}
