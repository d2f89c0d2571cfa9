import base64
import time

import pytest
from fastapi.testclient import TestClient

from mushaf.service import Engine, JobManager, ServiceConfig, create_app
from mushaf.stats import surah_stats
from mushaf.wiki import Principal, WikiStore

from test_querylab import WORD_FREQUENCY_SQL, WORD_OCCURRENCE_DETAIL_SQL

SLOW_SQL = (
    "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x+1 FROM c WHERE x < 200000000) "
    "SELECT COUNT(*) AS N FROM c"
)

DEV = {"Authorization": "Bearer dev-token"}
DEV2 = {"Authorization": "Bearer dev2-token"}
ADMIN = {"Authorization": "Bearer admin-token"}

WORD_FREQ_BODY = {
    "title": "Word frequency",
    "description": "How often each vocalized form occurs.",
    "main_sql": WORD_FREQUENCY_SQL,
    "parameters": [
        {
            "sequence_no": 1,
            "display_name": "Surah Name",
            "name": "@SurahNo",
            "input_method": "Dropdown",
            "data_type": "Integer",
            "default_value": "0",
            "dropdown_source": "surahs_with_all",
        }
    ],
    "detail_sql": WORD_OCCURRENCE_DETAIL_SQL,
    "hyperlink_columns": [
        {"hyperlink_id": 1, "info_type": "Subquery", "backing_column": "UniqueWordId",
         "targeted_column": "Word"},
    ],
}


@pytest.fixture
def engine(toy_index, toy_store, tmp_path):
    config = ServiceConfig(
        workers=2,
        queue_depth=8,
        sync_budget_seconds=1.0,
        timeout_seconds=10.0,
        tokens={
            "dev-token": Principal("dev", "developer"),
            "dev2-token": Principal("rival", "developer"),
            "admin-token": Principal("root", "admin"),
        },
    )
    return Engine(toy_index, toy_store, WikiStore(tmp_path / "wiki.json"), config)


@pytest.fixture
def client(engine):
    with TestClient(create_app(engine)) as c:
        yield c
    engine.jobs.shutdown()


def publish_word_frequency(client) -> str:
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV)
    assert created.status_code == 201, created.text
    qid = created.json()["id"]
    assert client.post(f"/api/dev/queries/{qid}/submit", headers=DEV).status_code == 200
    decided = client.post(
        f"/api/admin/queries/{qid}/decide",
        json={"decision": "Published", "topic_path": ["Corpus numbers", "Word counts"]},
        headers=ADMIN,
    )
    assert decided.status_code == 200, decided.text
    return qid


# -- corpus endpoints -------------------------------------------------------


def test_meta(client, toy_index):
    data = client.get("/api/meta").json()
    assert data["totals"]["ayahs"] == toy_index.total_ayahs
    assert data["content_hash"] == toy_index.content_hash
    assert len(data["surahs"]) == 2


def test_page_listing(client):
    data = client.get("/api/pages/1").json()
    assert [a["ayah_serial_no"] for a in data["ayahs"]] == [1, 2]
    assert data["total_pages"] == 2
    assert client.get("/api/pages/99").status_code == 404


def test_navigate(client):
    assert client.get("/api/navigate", params={"juz": 2}).json() == {
        "page_no": 2,
        "ayah_serial_no": 3,
    }
    assert client.get("/api/navigate", params={"page": 0}).status_code == 404
    assert client.get("/api/navigate").status_code == 404
    assert client.get("/api/navigate", params={"juz": 1, "page": 1}).status_code == 404


def test_ayah_endpoint(client, toy_index):
    data = client.get("/api/ayahs/3").json()
    assert data["surah_serial_no"] == 2
    assert data["text"] == toy_index.ayah(3).text_with_tashkeel
    assert client.get("/api/ayahs/4").status_code == 404


def test_stats_endpoints_match_library(client, toy_index):
    api_rows = client.get("/api/stats/surah/2").json()["rows"]
    lib_rows = [
        {"label": label, "value": value} for label, value in surah_stats(toy_index, 2).rows
    ]
    assert api_rows == lib_rows
    assert client.get("/api/stats/ayah/1").json()["granularity"] == "ayah"
    assert client.get("/api/stats/word/5").json()["granularity"] == "word"
    assert client.get("/api/stats/word/99").status_code == 404


def test_selection_stats_endpoint(client):
    body = {"ayah_serial_no": 1, "start_offset": 0, "end_offset": 6}
    data = client.post("/api/stats/selection", json=body).json()
    rows = {r["label"]: r["value"] for r in data["rows"]}
    assert rows["Word Count"] == 1 and rows["Jummal Value of Selection"] == 102
    bad = client.post(
        "/api/stats/selection",
        json={"ayah_serial_no": 1, "start_offset": 3, "end_offset": 3},
    )
    assert bad.status_code == 400
    assert set(bad.json()) == {"code", "message", "detail"}


def test_split_endpoint(client):
    body = {"unit": "letters", "tashkeel": "without", "grouping": "none", "surah_no": 1}
    rows = client.post("/api/split", json=body).json()["rows"]
    assert [r["token"] for r in rows[:3]] == ["ب", "س", "م"]


def test_responses_byte_identical(client):
    for url in ("/api/meta", "/api/stats/surah/1", "/api/pages/2"):
        first = client.get(url)
        second = client.get(url)
        assert first.content == second.content


# -- wiki flow over the API -------------------------------------------------------


def test_full_publication_flow(client):
    qid = publish_word_frequency(client)

    toc = client.get("/api/wiki/toc").json()
    section = next(t for t in toc["children"] if t["name"] == "Corpus numbers")
    assert qid in section["children"][0]["query_ids"]

    page = client.get(f"/api/wiki/queries/{qid}").json()
    assert page["main_sql"] == WORD_FREQUENCY_SQL
    assert page["parameters"][0]["name"] == "@SurahNo"

    run = client.post(f"/api/wiki/queries/{qid}/run", json={"values": {"SurahNo": "1"}})
    assert run.status_code == 200, run.text
    grid = run.json()["grid"]
    assert grid["columns"] == ["UniqueWordId", "Word", "Count"]
    assert len(grid["rows"]) == 6
    assert len(grid["links"]) == 6

    link = grid["links"][0]
    detail = client.post(
        f"/api/wiki/queries/{qid}/detail",
        json={
            "values": {"SurahNo": "0"},
            "hyperlink_id": link["hyperlink_id"],
            "row": grid["rows"][link["row"]],
        },
    )
    assert detail.status_code == 200, detail.text
    assert detail.json()["grid"]["columns"] == ["AyahSerialNo", "Ayah", "SurahSerialNo", "SurahName"]


def test_draft_not_runnable_by_public(client):
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV)
    qid = created.json()["id"]
    assert client.get(f"/api/wiki/queries/{qid}").status_code == 403
    assert client.post(f"/api/wiki/queries/{qid}/run", json={"values": {}}).status_code == 403
    # the owner can run a draft
    run = client.post(f"/api/wiki/queries/{qid}/run", json={"values": {}}, headers=DEV)
    assert run.status_code == 200


def test_dev_endpoints_require_role(client):
    assert client.post("/api/dev/queries", json=WORD_FREQ_BODY).status_code == 403
    assert client.get("/api/dev/queries").status_code == 403
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV).json()
    assert (
        client.put(f"/api/dev/queries/{created['id']}", json=WORD_FREQ_BODY, headers=DEV2)
        .status_code
        == 403
    )


def test_decide_requires_admin_role(client):
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV)
    qid = created.json()["id"]
    client.post(f"/api/dev/queries/{qid}/submit", headers=DEV)
    refused = client.post(
        f"/api/admin/queries/{qid}/decide",
        json={"decision": "Published", "topic_path": ["T"]},
        headers=DEV,
    )
    assert refused.status_code == 403


def test_unknown_token_rejected(client):
    response = client.get("/api/dev/queries", headers={"Authorization": "Bearer bogus"})
    assert response.status_code == 403
    assert response.json()["code"] == "not_authorized"


def test_validation_endpoint_reports(client):
    body = dict(WORD_FREQ_BODY, main_sql="SELECT * FROM Words WHERE x = @Foo", parameters=[])
    created = client.post("/api/dev/queries", json=body, headers=DEV)
    qid = created.json()["id"]
    report = client.post(f"/api/dev/queries/{qid}/validate", headers=DEV).json()
    assert not report["ok"]
    assert any(v["code"] == "unbound_parameter" for v in report["violations"])
    # submit is gated on the same validation
    assert client.post(f"/api/dev/queries/{qid}/submit", headers=DEV).status_code == 400


def test_documentation_upload_and_download(client):
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV)
    qid = created.json()["id"]
    payload = {
        "filename": "notes.md",
        "content_base64": base64.b64encode("# counting rules".encode()).decode(),
    }
    assert (
        client.put(f"/api/dev/queries/{qid}/documentation", json=payload, headers=DEV).status_code
        == 200
    )
    doc = client.get(f"/api/wiki/queries/{qid}/documentation", headers=DEV)
    assert doc.status_code == 200
    assert doc.text == "# counting rules"
    assert doc.headers["content-type"].startswith("text/markdown")


def test_rejection_flow(client):
    created = client.post("/api/dev/queries", json=WORD_FREQ_BODY, headers=DEV)
    qid = created.json()["id"]
    client.post(f"/api/dev/queries/{qid}/submit", headers=DEV)
    rejected = client.post(
        f"/api/admin/queries/{qid}/decide",
        json={"decision": "Rejected", "reason": "needs documentation"},
        headers=ADMIN,
    )
    assert rejected.json()["state"] == "Rejected"
    # editing reopens the draft
    updated = client.put(f"/api/dev/queries/{qid}", json=WORD_FREQ_BODY, headers=DEV)
    assert updated.json()["state"] == "Draft"


# -- jobs ----------------------------------------------------------------------


def poll_until_terminal(client, job_id, budget=10.0):
    deadline = time.time() + budget
    while time.time() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["state"] in ("Done", "Failed", "TimedOut"):
            return job
        time.sleep(0.02)
    raise AssertionError("job did not finish in time")


def test_job_submit_and_poll(client):
    qid = publish_word_frequency(client)
    submitted = client.post("/api/jobs", json={"query_id": qid, "values": {"SurahNo": "2"}})
    assert submitted.status_code == 202
    job_id = submitted.json()["job_id"]
    job = poll_until_terminal(client, job_id)
    assert job["state"] == "Done"
    assert job["result"]["columns"] == ["UniqueWordId", "Word", "Count"]
    # polls are idempotent and results stable
    assert client.get(f"/api/jobs/{job_id}").json() == job


def test_job_timeout(client):
    body = dict(WORD_FREQ_BODY, title="slow", main_sql=SLOW_SQL, parameters=[],
                detail_sql=None, hyperlink_columns=[])
    qid = client.post("/api/dev/queries", json=body, headers=DEV).json()["id"]
    submitted = client.post(
        "/api/jobs",
        json={"query_id": qid, "values": {}, "timeout_seconds": 0.001},
        headers=DEV,
    )
    job = poll_until_terminal(client, submitted.json()["job_id"])
    assert job["state"] == "TimedOut"
    assert job["result"] is None
    assert "wall-clock" in job["error"]["message"]


def test_job_coalescing(client):
    qid = publish_word_frequency(client)
    first = client.post("/api/jobs", json={"query_id": qid, "values": {"SurahNo": "1"}})
    second = client.post("/api/jobs", json={"query_id": qid, "values": {"SurahNo": "1"}})
    assert first.json()["job_id"] == second.json()["job_id"]
    distinct = client.post("/api/jobs", json={"query_id": qid, "values": {"SurahNo": "2"}})
    assert distinct.json()["job_id"] != first.json()["job_id"]


def test_job_unknown_query_and_bad_bindings(client):
    assert client.post("/api/jobs", json={"query_id": "q9999", "values": {}}).status_code == 404
    qid = publish_word_frequency(client)
    bad = client.post("/api/jobs", json={"query_id": qid, "values": {"SurahNo": "abc"}})
    assert bad.status_code == 400
    assert bad.json()["code"] == "binding_error"


def test_unknown_job(client):
    assert client.get("/api/jobs/nope").status_code == 404


def test_sync_run_returns_job_handle_when_slow(client):
    body = dict(WORD_FREQ_BODY, title="slow", main_sql=SLOW_SQL, parameters=[],
                detail_sql=None, hyperlink_columns=[])
    qid = client.post("/api/dev/queries", json=body, headers=DEV).json()["id"]
    run = client.post(
        f"/api/wiki/queries/{qid}/run",
        json={"values": {}, "timeout_seconds": 3.0},
        headers=DEV,
    )
    assert run.status_code == 202
    assert run.json()["state"] in ("Pending", "Running")
    job = poll_until_terminal(client, run.json()["job_id"])
    assert job["state"] == "TimedOut"


def test_backpressure(toy_index, toy_store, tmp_path):
    config = ServiceConfig(
        workers=1,
        queue_depth=1,
        sync_budget_seconds=0.05,
        timeout_seconds=5.0,
        tokens={"dev-token": Principal("dev", "developer")},
    )
    engine = Engine(toy_index, toy_store, WikiStore(tmp_path / "w.json"), config)
    with TestClient(create_app(engine)) as client:
        body = dict(WORD_FREQ_BODY, title="slow", main_sql=SLOW_SQL, parameters=[],
                    detail_sql=None, hyperlink_columns=[])
        qid = client.post("/api/dev/queries", json=body, headers=DEV).json()["id"]
        first = client.post(
            "/api/jobs",
            json={"query_id": qid, "values": {}, "timeout_seconds": 1.0},
            headers=DEV,
        )
        assert first.status_code == 202
        second = client.post(
            "/api/jobs",
            json={"query_id": qid, "values": {}, "timeout_seconds": 1.5},
            headers=DEV,
        )
        assert second.status_code == 429
        assert second.json()["code"] == "queue_full"
    engine.jobs.shutdown()


def test_job_expiry():
    manager = JobManager(workers=1, queue_depth=4, retention_seconds=0.0)
    job = manager.submit("q", {}, lambda: (_ for _ in ()).throw(RuntimeError("unused")))
    time.sleep(0.05)
    with pytest.raises(Exception, match="expired"):
        manager.get(job.job_id)
    manager.shutdown()
