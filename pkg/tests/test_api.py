import time

import pytest
from fastapi.testclient import TestClient

from warpgate.catalog import Catalog
from warpgate.oracle import brute_force_topk
from warpgate.sampling import SampleSpec
from warpgate.server import ServiceState, create_app

FULL_BODY = {"sample": {"strategy": "full", "size": 0, "seed": 42}}


@pytest.fixture
def state():
    return ServiceState()


@pytest.fixture
def client(state):
    return TestClient(create_app(state), raise_server_exceptions=False)


@pytest.fixture
def ready(client, corpus_dir):
    r = client.post("/corpus", json={"root": str(corpus_dir)})
    assert r.status_code == 200, r.text
    r = client.post("/index", json=FULL_BODY)
    assert r.status_code == 200, r.text
    return r.json()


def table_id_by_name(client, name):
    tables = client.get("/tables").json()["tables"]
    return next(t["table_id"] for t in tables if t["name"] == name)


def test_health_before_and_after(client, corpus_dir):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "index_loaded": False, "manifest": None}
    client.post("/corpus", json={"root": str(corpus_dir)})
    client.post("/index", json=FULL_BODY)
    body = client.get("/health").json()
    assert body["index_loaded"] is True
    assert body["manifest"]["tables_indexed"] == 3


def test_corpus_reports_ingest(client, corpus_dir):
    r = client.post("/corpus", json={"root": str(corpus_dir)})
    assert r.status_code == 200
    assert r.json()["tables"] == 3
    assert r.json()["rejected"] == []


def test_corpus_missing_root(client):
    r = client.post("/corpus", json={"root": "/no/such/dir"})
    assert r.status_code == 400
    assert r.json()["code"] == "bad_request"


def test_index_without_corpus(client):
    r = client.post("/index", json={})
    assert r.status_code == 400
    assert r.json()["code"] == "bad_request"


def test_index_manifest_shape(ready):
    assert ready["tables_indexed"] == 3
    assert ready["columns_indexed"] == 6
    assert ready["lsh_config"]["num_tables"] == 16
    assert ready["sample_spec"]["strategy"] == "full"


def test_search_before_build_conflicts(client, corpus_dir):
    client.post("/corpus", json={"root": str(corpus_dir)})
    r = client.post(
        "/search", json={"table_id": "0" * 16, "column": "email"}
    )
    assert r.status_code == 409
    assert r.json()["code"] == "index_not_built"


def test_search_flow_matches_oracle(client, ready, corpus_dir):
    tid = table_id_by_name(client, "users")
    r = client.post("/search", json={"table_id": tid, "column": "email", "k": 5})
    assert r.status_code == 200
    got = r.json()
    assert isinstance(got, list)

    cat = Catalog()
    cat.register_corpus(corpus_dir)
    from warpgate.embedder import HashingEmbedder

    want = brute_force_topk(
        cat.column_ref(cat.table_by_name("users").table_id, "email"),
        cat,
        HashingEmbedder(),
        sample_spec=SampleSpec("full", 0, 42),
        k=5,
        min_score=0.7,
    )
    assert got == [c.to_dict() for c in want]
    assert got[0]["table"] == "contacts"
    assert got[0]["column"] == "mail"


def test_search_response_is_deterministic(client, ready):
    tid = table_id_by_name(client, "users")
    body = {"table_id": tid, "column": "email", "k": 10}
    a = client.post("/search", json=body).json()
    b = client.post("/search", json=body).json()
    assert a == b


def test_search_unknown_refs(client, ready):
    r = client.post("/search", json={"table_id": "f" * 16, "column": "email"})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_table"
    tid = table_id_by_name(client, "users")
    r = client.post("/search", json={"table_id": tid, "column": "bogus"})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_column"


def test_search_validation_error(client, ready):
    r = client.post("/search", json={"column": "email"})
    assert r.status_code == 400
    assert r.json()["code"] == "bad_request"


def test_bad_index_config(client, corpus_dir):
    client.post("/corpus", json={"root": str(corpus_dir)})
    r = client.post("/index", json={"embedder": {"dimension": 4}})
    assert r.status_code == 400
    assert r.json()["code"] == "bad_request"


def test_table_endpoints(client, ready):
    tables = client.get("/tables").json()["tables"]
    assert [t["name"] for t in tables] == ["contacts", "inventory", "users"]
    tid = table_id_by_name(client, "users")

    meta = client.get(f"/tables/{tid}").json()
    assert meta["row_count"] == 4
    assert meta["column_names"] == ["user_id", "email", "city"]

    cols = client.get(f"/tables/{tid}/columns").json()["columns"]
    assert [c["name"] for c in cols] == ["user_id", "email", "city"]
    assert all(c["indexed"] for c in cols)
    assert cols[1]["distinct_count"] == 4

    rows = client.get(f"/tables/{tid}/rows", params={"limit": 2}).json()
    assert rows["columns"] == ["user_id", "email", "city"]
    assert len(rows["rows"]) == 2

    r = client.get("/tables/{}".format("a" * 16))
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_table"

    r = client.get(f"/tables/{tid}/rows", params={"limit": 0})
    assert r.status_code == 400


def test_preview_join(client, ready):
    users = table_id_by_name(client, "users")
    contacts = table_id_by_name(client, "contacts")
    r = client.post(
        "/preview-join",
        json={
            "query_table_id": users,
            "query_column": "email",
            "candidate_table_id": contacts,
            "candidate_column": "mail",
            "selected_columns": ["phone"],
            "limit": 10,
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert body["columns"] == ["user_id", "email", "city", "contacts.phone"]
    assert body["total_rows"] == 4
    assert len(body["rows"]) == 4
    assert body["rows"][0][3] == "111"
    assert body["warnings"] == []

    r = client.post(
        "/preview-join",
        json={
            "query_table_id": users,
            "query_column": "missing",
            "candidate_table_id": contacts,
            "candidate_column": "mail",
            "selected_columns": [],
        },
    )
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_column"


def test_build_conflict_409(client, state, ready):
    assert state.build_lock.acquire(blocking=False)
    try:
        r = client.post("/index", json=FULL_BODY)
        assert r.status_code == 409
        assert r.json()["code"] == "build_in_progress"
        r = client.post("/corpus", json={"root": "/tmp"})
        assert r.status_code == 409
        assert r.json()["code"] == "build_in_progress"
    finally:
        state.build_lock.release()


def test_async_build_job(client, corpus_dir):
    client.post("/corpus", json={"root": str(corpus_dir)})
    r = client.post("/index", json={**FULL_BODY, "wait": False})
    assert r.status_code == 202
    job_id = r.json()["job_id"]
    deadline = time.time() + 10
    status = None
    while time.time() < deadline:
        status = client.get(f"/index/jobs/{job_id}").json()
        if status["status"] != "running":
            break
        time.sleep(0.02)
    assert status["status"] == "done", status
    assert status["manifest"]["columns_indexed"] == 6
    assert client.get("/health").json()["index_loaded"] is True

    r = client.get("/index/jobs/doesnotexist")
    assert r.status_code == 404


def test_search_during_held_lock_still_works(client, state, ready):
    # searches never take the build lock
    tid = table_id_by_name(client, "users")
    assert state.build_lock.acquire(blocking=False)
    try:
        r = client.post("/search", json={"table_id": tid, "column": "email"})
        assert r.status_code == 200
    finally:
        state.build_lock.release()
