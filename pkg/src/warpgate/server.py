"""HTTP service exposing corpus registration, index builds, and search.

State is process-local: one catalog, one engine, one build at a time.
Builds run under a non-blocking lock (a second build gets 409) and swap
the finished engine in atomically, so searches keep hitting the previous
index until the new one is complete. POST /index blocks by default;
``"wait": false`` returns 202 with a job id to poll.

Errors use one shape, ``{"code": ..., "message": ...}``: 404 for unknown
table or column refs, 409 for build conflicts and searches before any
build, 400 for malformed bodies or configs.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import Catalog
from .embedder import EmbedderConfig, HashingEmbedder
from .engine import DiscoveryEngine, SearchParams, join_preview
from .errors import (
    BuildInProgress,
    IndexNotBuilt,
    InvalidSpec,
    UnknownTable,
    WarpgateError,
)
from .lsh import LshConfig
from .sampling import SampleSpec

logger = logging.getLogger(__name__)

_STATUS_BY_CODE = {
    "bad_request": 400,
    "unknown_table": 404,
    "unknown_column": 404,
    "index_not_built": 409,
    "build_in_progress": 409,
    "internal": 500,
}

DEFAULT_ADDR = "127.0.0.1:8400"
ADDR_ENV = "WARPGATE_ADDR"


@dataclass
class JobRecord:
    job_id: str
    status: str = "running"  # running | done | failed
    error: str | None = None
    manifest: dict | None = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "status": self.status,
            "error": self.error,
            "manifest": self.manifest,
        }


@dataclass
class ServiceState:
    catalog: Catalog | None = None
    engine: DiscoveryEngine | None = None
    corpus_root: str = ""
    build_lock: threading.Lock = field(default_factory=threading.Lock)
    jobs: dict[str, JobRecord] = field(default_factory=dict)


class CorpusBody(BaseModel):
    root: str
    database_naming: str = "flat"


class IndexBody(BaseModel):
    sample: dict | None = None
    embedder: dict | None = None
    lsh: dict | None = None
    wait: bool = True


class SearchBody(BaseModel):
    table_id: str
    column: str | int
    k: int = 10
    min_score: float | None = None
    exclude_query_table: bool = True


class PreviewBody(BaseModel):
    query_table_id: str
    query_column: str | int
    candidate_table_id: str
    candidate_column: str | int
    selected_columns: list[str] = []
    limit: int = 50


def _build_engine(state: ServiceState, body: IndexBody) -> DiscoveryEngine:
    if state.catalog is None or len(state.catalog) == 0:
        raise InvalidSpec("no corpus registered; POST /corpus first")
    sample = SampleSpec.from_dict(body.sample) if body.sample else SampleSpec()
    embedder_cfg = (
        EmbedderConfig.from_dict(body.embedder) if body.embedder else EmbedderConfig()
    )
    lsh_cfg = (
        LshConfig.from_dict(body.lsh)
        if body.lsh
        else LshConfig(dimension=embedder_cfg.dimension)
    )
    return DiscoveryEngine.build(
        state.catalog,
        sample_spec=sample,
        embedder=HashingEmbedder(embedder_cfg),
        lsh_config=lsh_cfg,
        corpus_root=state.corpus_root,
    )


def create_app(state: ServiceState | None = None, ui_dir=None) -> FastAPI:
    state = state or ServiceState()
    app = FastAPI(title="warpgate", docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(WarpgateError)
    async def _warpgate_error(request: Request, exc: WarpgateError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status, content={"code": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "bad_request", "message": str(exc.errors())}
        )

    @app.get("/health")
    def health():
        manifest = None
        if state.engine is not None and state.engine.manifest is not None:
            manifest = state.engine.manifest.summary()
        return {
            "status": "ok",
            "index_loaded": state.engine is not None,
            "manifest": manifest,
        }

    @app.post("/corpus")
    def register_corpus(body: CorpusBody):
        if state.build_lock.locked():
            raise BuildInProgress("an index build is running; retry later")
        root = Path(body.root)
        if not root.is_dir():
            raise InvalidSpec(f"corpus root {body.root!r} is not a directory")
        catalog = Catalog()
        report = catalog.register_corpus(root, database_naming=body.database_naming)
        state.catalog = catalog
        state.corpus_root = str(root)
        return report.to_dict()

    def _run_build(body: IndexBody, job: JobRecord) -> None:
        try:
            engine = _build_engine(state, body)
            state.engine = engine
            job.manifest = engine.manifest.to_dict()
            job.status = "done"
        except Exception as exc:
            job.status = "failed"
            job.error = str(exc)
            logger.exception("index build failed")
        finally:
            state.build_lock.release()

    @app.post("/index")
    def build_index(body: IndexBody):
        if not state.build_lock.acquire(blocking=False):
            raise BuildInProgress("an index build is already running")
        job = JobRecord(job_id=uuid.uuid4().hex)
        state.jobs[job.job_id] = job
        if body.wait:
            _run_build(body, job)  # releases the lock
            if job.status == "failed":
                raise InvalidSpec(job.error or "index build failed")
            return job.manifest
        thread = threading.Thread(
            target=_run_build, args=(body, job), name=f"build-{job.job_id[:8]}"
        )
        thread.daemon = True
        thread.start()
        return JSONResponse(status_code=202, content={"job_id": job.job_id})

    @app.get("/index/jobs/{job_id}")
    def job_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            return JSONResponse(
                status_code=404,
                content={"code": "bad_request", "message": f"unknown job {job_id!r}"},
            )
        return job.to_dict()

    def _catalog() -> Catalog:
        if state.catalog is None:
            raise UnknownTable("no corpus registered")
        return state.catalog

    @app.get("/tables")
    def list_tables():
        catalog = _catalog()
        metas = sorted(
            catalog.tables.values(), key=lambda m: (m.database, m.name)
        )
        return {"tables": [m.to_dict() for m in metas]}

    @app.get("/tables/{table_id}")
    def table_meta(table_id: str):
        return _catalog().table(table_id).to_dict()

    @app.get("/tables/{table_id}/columns")
    def table_columns(table_id: str):
        catalog = _catalog()
        meta = catalog.table(table_id)
        if state.engine is not None:
            entries = state.engine.list_candidate_columns(table_id)
        else:
            entries = [
                {
                    "name": name,
                    "index": idx,
                    "distinct_count": None,
                    "null_count": None,
                    "indexed": False,
                }
                for idx, name in enumerate(meta.column_names)
            ]
        return {"table_id": table_id, "columns": entries}

    @app.get("/tables/{table_id}/rows")
    def table_rows(table_id: str, limit: int = 50):
        if limit < 1:
            raise InvalidSpec(f"limit must be >= 1, got {limit}")
        catalog = _catalog()
        meta = catalog.table(table_id)
        return {
            "table_id": table_id,
            "columns": list(meta.column_names),
            "rows": catalog.rows(table_id, limit),
        }

    @app.post("/search")
    def search(body: SearchBody):
        if state.engine is None:
            raise IndexNotBuilt("no index has been built")
        catalog = state.engine.catalog
        ref = catalog.column_ref(body.table_id, body.column)
        params = SearchParams(
            k=body.k,
            min_score=body.min_score,
            exclude_query_table=body.exclude_query_table,
        )
        results = state.engine.search_topk(ref, params)
        return [c.to_dict() for c in results]

    @app.post("/preview-join")
    def preview_join(body: PreviewBody):
        catalog = _catalog()
        q_ref = catalog.column_ref(body.query_table_id, body.query_column)
        c_ref = catalog.column_ref(body.candidate_table_id, body.candidate_column)
        preview = join_preview(
            catalog,
            body.query_table_id,
            q_ref.column_name,
            body.candidate_table_id,
            c_ref.column_name,
            body.selected_columns,
            limit=body.limit,
        )
        return preview.to_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
