"""HTTP JSON API over the corpus index, query lab and wiki.

Corpus reads are lock-free over the immutable index; wiki mutations are
serialized by the store; query executions run on a bounded worker pool.
Queries finishing inside the sync budget return their grid directly, slower
ones return a job handle to poll.
"""

from __future__ import annotations

import base64
import concurrent.futures
import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import CorpusIndex, Selection
from .errors import (
    AuthError,
    BackpressureError,
    BindingError,
    MushafError,
    NotFoundError,
    QueryError,
    QueryTimeout,
    WrongStateError,
)
from .querylab import (
    ExecutionLimits,
    HyperlinkColumn,
    ParameterSpec,
    QueryDefinition,
    RelationalStore,
    bind_parameters,
    execute_detail,
    execute_main,
    referenced_parameters,
    validate_query,
)
from .splitter import SplitRequest, split
from .stats import ayah_stats, selection_stats, surah_stats, word_stats
from .wiki import PUBLIC, Principal, WikiStore

API_VERSION = "1"


@dataclass
class ServiceConfig:
    workers: int = field(default_factory=lambda: os.cpu_count() or 4)
    queue_depth: int = 64
    retention_seconds: float = 3600.0
    row_limit: int = 10_000
    timeout_seconds: float = 30.0
    sync_budget_seconds: float = 2.0
    tokens: dict[str, Principal] = field(default_factory=dict)
    webui_dir: Path | None = None


class Job:
    """One queued query execution; terminal states never change again."""

    TERMINAL = ("Done", "Failed", "TimedOut")

    def __init__(self, job_id: str, query_id: str, bindings: dict):
        self.job_id = job_id
        self.query_id = query_id
        self.bindings = bindings
        self.state = "Pending"
        self.created_at = time.time()
        self.started_at: float | None = None
        self.finished_at: float | None = None
        self.result: dict | None = None
        self.error: dict | None = None
        self.future: concurrent.futures.Future | None = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "query_id": self.query_id,
            "state": self.state,
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "result": self.result,
            "error": self.error,
        }


class JobManager:
    """Bounded pool; beyond the queue depth submissions are rejected, never dropped."""

    def __init__(self, workers: int, queue_depth: int, retention_seconds: float):
        self.queue_depth = queue_depth
        self.retention_seconds = retention_seconds
        self._executor = concurrent.futures.ThreadPoolExecutor(max_workers=workers)
        self._jobs: dict[str, Job] = {}
        self._by_key: dict[str, str] = {}
        self._lock = threading.Lock()

    def _purge_expired(self) -> None:
        cutoff = time.time() - self.retention_seconds
        expired = [jid for jid, j in self._jobs.items() if j.created_at < cutoff]
        for job_id in expired:
            del self._jobs[job_id]
        if expired:
            self._by_key = {k: v for k, v in self._by_key.items() if v in self._jobs}

    def submit(self, query_id: str, bindings: dict, runner, timeout_seconds: float = 0.0) -> Job:
        """Enqueue; identical (query, bindings, timeout) submissions coalesce onto one job."""
        key = json.dumps(
            {"q": query_id, "b": bindings, "t": timeout_seconds}, sort_keys=True, default=str
        )
        with self._lock:
            self._purge_expired()
            existing = self._by_key.get(key)
            if existing is not None and existing in self._jobs:
                return self._jobs[existing]
            active = sum(1 for j in self._jobs.values() if j.state in ("Pending", "Running"))
            if active >= self.queue_depth:
                raise BackpressureError(f"job queue full ({self.queue_depth} pending)")
            job = Job(job_id=uuid.uuid4().hex[:12], query_id=query_id, bindings=bindings)
            self._jobs[job.job_id] = job
            self._by_key[key] = job.job_id
            job.future = self._executor.submit(self._run, job, runner)
            return job

    def _run(self, job: Job, runner) -> dict | None:
        with self._lock:
            job.state = "Running"
            job.started_at = time.time()
        try:
            grid = runner()
            with self._lock:
                job.result = grid.to_dict()
                job.state = "Done"
            return job.result
        except QueryTimeout as exc:
            with self._lock:
                job.state = "TimedOut"
                job.error = {"code": exc.code, "message": str(exc)}
        except MushafError as exc:
            with self._lock:
                job.state = "Failed"
                job.error = {"code": exc.code, "message": str(exc)}
        except Exception as exc:  # surface, never swallow silently
            with self._lock:
                job.state = "Failed"
                job.error = {"code": "internal", "message": str(exc)}
        finally:
            with self._lock:
                job.finished_at = time.time()
        return None

    def get(self, job_id: str) -> Job:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise NotFoundError(f"unknown job {job_id!r}")
            if job.created_at < time.time() - self.retention_seconds:
                del self._jobs[job_id]
                raise NotFoundError(f"job {job_id} expired")
            return job

    def shutdown(self) -> None:
        self._executor.shutdown(wait=False, cancel_futures=True)


class Engine:
    """Bundles the immutable index, relational store, wiki store and job pool."""

    def __init__(
        self,
        index: CorpusIndex,
        store: RelationalStore,
        wiki: WikiStore,
        config: ServiceConfig | None = None,
    ):
        self.index = index
        self.store = store
        self.wiki = wiki
        self.config = config or ServiceConfig()
        self.jobs = JobManager(
            workers=self.config.workers,
            queue_depth=self.config.queue_depth,
            retention_seconds=self.config.retention_seconds,
        )

    def principal_for(self, token: str | None) -> Principal:
        if token is None:
            return PUBLIC
        principal = self.config.tokens.get(token)
        if principal is None:
            raise AuthError("unknown bearer token")
        return principal

    def limits(self, timeout_seconds: float | None = None) -> ExecutionLimits:
        timeout = self.config.timeout_seconds
        if timeout_seconds is not None and 0 < timeout_seconds:
            timeout = min(timeout_seconds, self.config.timeout_seconds)
        return ExecutionLimits(row_limit=self.config.row_limit, timeout_seconds=timeout)

    def runnable_query(self, query_id: str, principal: Principal) -> QueryDefinition:
        defn = self.wiki.get(query_id)
        if defn.state != "Published" and defn.owner != principal.name and not principal.is_admin:
            raise AuthError(f"query {query_id} is not published")
        return defn

    def validator(self):
        return lambda defn: validate_query(defn, self.store)


def _definition_fields(body: "QueryBody") -> dict:
    return {
        "title": body.title,
        "description": body.description,
        "main_sql": body.main_sql,
        "parameters": tuple(ParameterSpec(**p) for p in body.parameters),
        "detail_sql": body.detail_sql,
        "hyperlink_columns": tuple(HyperlinkColumn(**h) for h in body.hyperlink_columns),
    }


class SelectionBody(BaseModel):
    ayah_serial_no: int
    start_offset: int
    end_offset: int


class SplitBody(BaseModel):
    unit: str
    tashkeel: str
    grouping: str
    surah_no: int | None = None
    ayah_serial_no: int | None = None
    word_serial_no: int | None = None
    selection: SelectionBody | None = None


class RunBody(BaseModel):
    values: dict[str, str] = {}
    timeout_seconds: float | None = None


class DetailBody(BaseModel):
    values: dict[str, str] = {}
    hyperlink_id: int
    row: list
    timeout_seconds: float | None = None


class JobBody(BaseModel):
    query_id: str
    values: dict[str, str] = {}
    timeout_seconds: float | None = None


class QueryBody(BaseModel):
    title: str
    description: str = ""
    main_sql: str = ""
    parameters: list[dict] = []
    detail_sql: str | None = None
    hyperlink_columns: list[dict] = []


class DocumentationBody(BaseModel):
    filename: str
    content_base64: str


class DecideBody(BaseModel):
    decision: str
    topic_path: list[str] = []
    reason: str | None = None


_STATUS_BY_CODE = {
    "not_found": 404,
    "not_authorized": 403,
    "queue_full": 429,
    "query_timeout": 504,
    "wrong_state": 409,
}


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="mushaf", version=API_VERSION)

    @app.exception_handler(MushafError)
    async def mushaf_error_handler(request: Request, exc: MushafError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": str(exc), "detail": type(exc).__name__},
        )

    def principal(request: Request) -> Principal:
        header = request.headers.get("Authorization")
        if header is None:
            return PUBLIC
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise AuthError("expected `Authorization: Bearer <token>`")
        return engine.principal_for(token.strip())

    def require_developer(who: Principal = Depends(principal)) -> Principal:
        if not who.is_developer:
            raise AuthError("developer role required")
        return who

    def require_admin(who: Principal = Depends(principal)) -> Principal:
        if not who.is_admin:
            raise AuthError("admin role required")
        return who

    index = engine.index

    # -- corpus ----------------------------------------------------------

    @app.get("/api/meta")
    def meta() -> dict:
        return {
            "api_version": API_VERSION,
            "content_hash": index.content_hash,
            "totals": {
                "surahs": index.total_surahs,
                "ayahs": index.total_ayahs,
                "words": index.total_words,
                "letters": index.total_letters,
                "pages": index.total_pages,
                "juzs": index.total_juzs,
                "rubs": index.total_rubs,
            },
            "limits": {
                "row_limit": engine.config.row_limit,
                "timeout_seconds": engine.config.timeout_seconds,
            },
            "surahs": [
                {
                    "surah_serial_no": s.surah_serial_no,
                    "name": s.name,
                    "ayah_count": s.ayah_range.count,
                }
                for s in index.surahs
            ],
        }

    def _ayah_dict(serial: int) -> dict:
        a = index.ayah(serial)
        return {
            "ayah_serial_no": a.ayah_serial_no,
            "surah_serial_no": a.surah_serial_no,
            "surah_name": index.surah(a.surah_serial_no).name,
            "ayah_no_in_surah": a.ayah_no_in_surah,
            "text": a.text_with_tashkeel,
            "text_no_tashkeel": a.text_no_tashkeel,
            "page_no": a.page_no,
            "juz_no": a.juz_no,
            "rub_no": a.rub_no,
        }

    @app.get("/api/pages/{page_no}")
    def page(page_no: int) -> dict:
        span = index.ayah_serials_on_page(page_no)
        first = index.ayah(span.start)
        return {
            "page_no": page_no,
            "total_pages": index.total_pages,
            "juz_no": first.juz_no,
            "rub_no": first.rub_no,
            "ayahs": [_ayah_dict(serial) for serial in span],
        }

    @app.get("/api/navigate")
    def navigate(
        surah: int | None = None,
        juz: int | None = None,
        rub: int | None = None,
        page: int | None = None,
    ) -> dict:
        target = index.navigate(surah=surah, juz=juz, rub=rub, page=page)
        return {"page_no": target.page_no, "ayah_serial_no": target.ayah_serial_no}

    @app.get("/api/ayahs/{serial}")
    def ayah(serial: int) -> dict:
        return _ayah_dict(serial)

    # -- stats and splitting ------------------------------------------------

    @app.get("/api/stats/surah/{surah_no}")
    def stats_surah(surah_no: int) -> dict:
        return surah_stats(index, surah_no).to_dict()

    @app.get("/api/stats/ayah/{serial}")
    def stats_ayah(serial: int) -> dict:
        return ayah_stats(index, serial).to_dict()

    @app.get("/api/stats/word/{serial}")
    def stats_word(serial: int) -> dict:
        return word_stats(index, serial).to_dict()

    @app.post("/api/stats/selection")
    def stats_selection(body: SelectionBody) -> dict:
        selection = Selection(body.ayah_serial_no, body.start_offset, body.end_offset)
        return selection_stats(index, selection).to_dict()

    @app.post("/api/split")
    def split_endpoint(body: SplitBody) -> dict:
        selection = None
        if body.selection is not None:
            selection = Selection(
                body.selection.ayah_serial_no,
                body.selection.start_offset,
                body.selection.end_offset,
            )
        request = SplitRequest(
            unit=body.unit,
            tashkeel=body.tashkeel,
            grouping=body.grouping,
            surah_no=body.surah_no,
            ayah_serial_no=body.ayah_serial_no,
            word_serial_no=body.word_serial_no,
            selection=selection,
        )
        return split(index, request).to_dict()

    # -- wiki browsing -----------------------------------------------------

    @app.get("/api/wiki/toc")
    def toc() -> dict:
        return engine.wiki.toc().to_dict()

    @app.get("/api/wiki/queries/{query_id}")
    def wiki_query(query_id: str, who: Principal = Depends(principal)) -> dict:
        return engine.wiki.query_page(who, query_id)

    @app.get("/api/wiki/queries/{query_id}/documentation")
    def wiki_documentation(query_id: str, who: Principal = Depends(principal)) -> Response:
        engine.wiki.query_page(who, query_id)  # authorization + existence
        filename, content = engine.wiki.get_documentation(query_id)
        media = "application/pdf" if filename.lower().endswith(".pdf") else "text/markdown"
        return Response(
            content=content,
            media_type=media,
            headers={"Content-Disposition": f'inline; filename="{filename}"'},
        )

    def _submit_execution(
        defn: QueryDefinition, values: dict[str, str], timeout_seconds: float | None
    ) -> Job:
        bound = bind_parameters(defn, values)
        limits = engine.limits(timeout_seconds)
        runner = lambda: execute_main(defn, bound, engine.store, limits)  # noqa: E731
        return engine.jobs.submit(defn.id, bound, runner, limits.timeout_seconds)

    @app.post("/api/wiki/queries/{query_id}/run")
    def run_query_endpoint(
        query_id: str, body: RunBody, response: Response, who: Principal = Depends(principal)
    ) -> dict:
        defn = engine.runnable_query(query_id, who)
        job = _submit_execution(defn, body.values, body.timeout_seconds)
        try:
            result = job.future.result(timeout=engine.config.sync_budget_seconds)
        except concurrent.futures.TimeoutError:
            response.status_code = 202
            return {"job_id": job.job_id, "state": job.state}
        if result is None:
            raise _job_error(job)
        return {"job_id": job.job_id, "state": "Done", "grid": result}

    @app.post("/api/wiki/queries/{query_id}/detail")
    def run_detail_endpoint(
        query_id: str, body: DetailBody, who: Principal = Depends(principal)
    ) -> dict:
        defn = engine.runnable_query(query_id, who)
        bound = bind_parameters(defn, body.values)
        main_columns = engine.store.probe_columns(
            defn.main_sql, referenced_parameters(defn.main_sql)
        )
        grid = execute_detail(
            defn,
            main_columns,
            tuple(body.row),
            body.hyperlink_id,
            bound,
            engine.store,
            engine.limits(body.timeout_seconds),
        )
        return {"grid": grid.to_dict()}

    # -- jobs ---------------------------------------------------------------

    @app.post("/api/jobs", status_code=202)
    def submit_job(body: JobBody, who: Principal = Depends(principal)) -> dict:
        defn = engine.runnable_query(body.query_id, who)
        job = _submit_execution(defn, body.values, body.timeout_seconds)
        return {"job_id": job.job_id, "state": job.state}

    @app.get("/api/jobs/{job_id}")
    def poll_job(job_id: str) -> dict:
        return engine.jobs.get(job_id).to_dict()

    # -- developer CRUD ------------------------------------------------------

    @app.get("/api/dev/queries")
    def dev_list(who: Principal = Depends(require_developer)) -> dict:
        return {
            "queries": [
                {"id": q.id, "title": q.title, "state": q.state, "owner": q.owner}
                for q in engine.wiki.list_queries(who)
            ]
        }

    @app.post("/api/dev/queries", status_code=201)
    def dev_create(body: QueryBody, who: Principal = Depends(require_developer)) -> dict:
        defn = engine.wiki.create_query(who, **_definition_fields(body))
        return defn.to_dict()

    @app.get("/api/dev/queries/{query_id}")
    def dev_get(query_id: str, who: Principal = Depends(require_developer)) -> dict:
        defn = engine.wiki.get(query_id)
        if defn.owner != who.name and not who.is_admin and defn.state != "Published":
            raise AuthError(f"query {query_id} belongs to {defn.owner}")
        return defn.to_dict()

    @app.put("/api/dev/queries/{query_id}")
    def dev_update(
        query_id: str, body: QueryBody, who: Principal = Depends(require_developer)
    ) -> dict:
        return engine.wiki.update_query(who, query_id, **_definition_fields(body)).to_dict()

    @app.delete("/api/dev/queries/{query_id}")
    def dev_delete(query_id: str, who: Principal = Depends(require_developer)) -> dict:
        engine.wiki.delete_query(who, query_id)
        return {"deleted": query_id}

    @app.post("/api/dev/queries/{query_id}/validate")
    def dev_validate(query_id: str, who: Principal = Depends(require_developer)) -> dict:
        defn = engine.wiki.get(query_id)
        if defn.owner != who.name and not who.is_admin:
            raise AuthError(f"query {query_id} belongs to {defn.owner}")
        return validate_query(defn, engine.store).to_dict()

    @app.post("/api/dev/queries/{query_id}/submit")
    def dev_submit(query_id: str, who: Principal = Depends(require_developer)) -> dict:
        return engine.wiki.submit(who, query_id, engine.validator()).to_dict()

    @app.put("/api/dev/queries/{query_id}/documentation")
    def dev_documentation(
        query_id: str, body: DocumentationBody, who: Principal = Depends(require_developer)
    ) -> dict:
        content = base64.b64decode(body.content_base64)
        return engine.wiki.set_documentation(who, query_id, body.filename, content).to_dict()

    # -- admin ------------------------------------------------------------------

    @app.post("/api/admin/queries/{query_id}/decide")
    def admin_decide(
        query_id: str, body: DecideBody, who: Principal = Depends(require_admin)
    ) -> dict:
        defn = engine.wiki.decide(
            who, query_id, body.decision, tuple(body.topic_path), body.reason
        )
        return defn.to_dict()

    if engine.config.webui_dir is not None and Path(engine.config.webui_dir).is_dir():
        app.mount("/", StaticFiles(directory=engine.config.webui_dir, html=True), name="webui")

    return app


def _job_error(job: Job) -> MushafError:
    error = job.error or {"code": "internal", "message": "job failed"}
    if job.state == "TimedOut":
        return QueryTimeout(error.get("message", "query timed out"))
    code = error.get("code", "internal")
    classes = {
        "binding_error": BindingError,
        "not_found": NotFoundError,
        "wrong_state": WrongStateError,
    }
    return classes.get(code, QueryError)(error.get("message", "job failed"))
