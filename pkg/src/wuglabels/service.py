"""HTTP service hosting live annotation sessions.

Every response is derived from exactly two artifacts: the items file and the
append-only records log. Restarting the service replays the log, so a crash
can lose at most the record being written.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from wuglabels import evalkit
from wuglabels.errors import ConfigInvalid
from wuglabels.evalkit import AnnotationRecord, EvalItem, blinded_payload
from wuglabels.wug import WordUsageGraph, load_graphs


@dataclass
class ServiceConfig:
    items_path: Path
    records_path: Path
    data_path: Path
    dataset_id: str | None = None  # default: the items' dataset_id

    def validate(self) -> None:
        if not Path(self.items_path).exists():
            raise ConfigInvalid(f"items file not found: {self.items_path}")
        if not Path(self.data_path).exists():
            raise ConfigInvalid(f"graph data not found: {self.data_path}")
        records_dir = Path(self.records_path).parent
        if not records_dir.is_dir():
            raise ConfigInvalid(f"records directory missing: {records_dir}")


@dataclass
class Session:
    session_id: str
    annotator_id: str
    dataset_id: str
    cursor: int
    created_at: float = field(default_factory=time.time)


class AnnotationState:
    """Items plus the replayed records log; one writer lock for appends."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        self.items: list[EvalItem] = evalkit.load_items(config.items_path)
        if not self.items:
            raise ConfigInvalid(f"no items in {config.items_path}")
        self.items_by_id = {i.item_id: i for i in self.items}
        graphs: list[WordUsageGraph] = load_graphs(config.data_path)
        self.graphs_by_lemma = {g.lemma: g for g in graphs}
        for item in self.items:
            if item.lemma not in self.graphs_by_lemma:
                raise ConfigInvalid(f"items reference unknown lemma {item.lemma!r}")
        self.datasets = sorted({i.dataset_id for i in self.items})
        self._write_lock = threading.Lock()
        self._answered: dict[str, set[str]] = {}  # annotator -> item_ids
        self._sessions: dict[tuple[str, str], Session] = {}
        for record in evalkit.load_records(config.records_path):
            self._answered.setdefault(record.annotator_id, set()).add(record.item_id)

    def items_of(self, dataset_id: str) -> list[EvalItem]:
        return [i for i in self.items if i.dataset_id == dataset_id]

    def session_for(self, annotator_id: str, dataset_id: str) -> Session:
        key = (annotator_id, dataset_id)
        if key not in self._sessions:
            self._sessions[key] = Session(
                session_id=f"{dataset_id}/{annotator_id}",
                annotator_id=annotator_id,
                dataset_id=dataset_id,
                cursor=0,
            )
        session = self._sessions[key]
        session.cursor = self._cursor(annotator_id, dataset_id)
        return session

    def _cursor(self, annotator_id: str, dataset_id: str) -> int:
        answered = self._answered.get(annotator_id, set())
        items = self.items_of(dataset_id)
        for idx, item in enumerate(items):
            if item.item_id not in answered:
                return idx
        return len(items)

    def next_item(self, annotator_id: str, dataset_id: str) -> EvalItem | None:
        items = self.items_of(dataset_id)
        cursor = self._cursor(annotator_id, dataset_id)
        return items[cursor] if cursor < len(items) else None

    def submit(self, record: AnnotationRecord) -> None:
        if record.item_id not in self.items_by_id:
            raise KeyError(record.item_id)
        with self._write_lock:
            answered = self._answered.setdefault(record.annotator_id, set())
            if record.item_id in answered:
                raise FileExistsError(record.item_id)
            evalkit.append_record(record, self.config.records_path)
            answered.add(record.item_id)

    def results(self, dataset_id: str) -> list[dict[str, Any]]:
        items = self.items_of(dataset_id)
        records = [
            r
            for r in evalkit.load_records(self.config.records_path)
            if r.item_id in {i.item_id for i in items}
        ]
        outcomes = evalkit.aggregate(records, items)
        if not outcomes:
            return []
        return evalkit.score_report_rows(evalkit.score(outcomes, items))


class RecordIn(BaseModel):
    session: str
    item_id: str
    choice: str
    note: str = ""


def _parse_session_id(session_id: str) -> tuple[str, str]:
    dataset_id, sep, annotator_id = session_id.partition("/")
    if not sep or not annotator_id:
        raise HTTPException(status_code=400, detail=f"bad session id {session_id!r}")
    return dataset_id, annotator_id


def create_app(config: ServiceConfig) -> FastAPI:
    state = AnnotationState(config)
    app = FastAPI(title="wuglabels annotation service")
    app.state.annotation = state

    @app.get("/datasets")
    def datasets() -> list[dict[str, Any]]:
        return [
            {"dataset_id": d, "items": len(state.items_of(d))}
            for d in state.datasets
        ]

    @app.get("/session")
    def session(annotator: str, dataset: str) -> dict[str, Any]:
        if dataset not in state.datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        s = state.session_for(annotator, dataset)
        return {
            "session_id": s.session_id,
            "annotator_id": s.annotator_id,
            "dataset_id": s.dataset_id,
            "cursor": s.cursor,
            "total": len(state.items_of(dataset)),
        }

    @app.get("/items/next")
    def next_item(session: str) -> dict[str, Any]:
        dataset_id, annotator_id = _parse_session_id(session)
        if dataset_id not in state.datasets:
            raise HTTPException(status_code=404,
                                detail=f"unknown dataset {dataset_id!r}")
        item = state.next_item(annotator_id, dataset_id)
        if item is None:
            return {"completed": True}
        payload = blinded_payload(item, state.graphs_by_lemma)
        payload["progress"] = {
            "answered": state._cursor(annotator_id, dataset_id),
            "total": len(state.items_of(dataset_id)),
        }
        return payload

    @app.post("/records", status_code=201)
    def post_record(body: RecordIn) -> dict[str, Any]:
        _, annotator_id = _parse_session_id(body.session)
        if body.choice not in evalkit.CHOICES:
            raise HTTPException(
                status_code=422,
                detail=f"choice must be one of {list(evalkit.CHOICES)}",
            )
        record = AnnotationRecord(
            item_id=body.item_id,
            annotator_id=annotator_id,
            choice=body.choice,
            note=body.note,
            timestamp=time.time(),
        )
        try:
            state.submit(record)
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"unknown item {body.item_id!r}") from None
        except FileExistsError:
            raise HTTPException(
                status_code=409,
                detail=f"item {body.item_id!r} already answered by this annotator",
            ) from None
        return {"accepted": True}

    @app.get("/results")
    def results(dataset: str) -> list[dict[str, Any]]:
        if dataset not in state.datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        return state.results(dataset)

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8765) -> None:
    """Run the service until interrupted; raises PortBusy on a taken port."""
    import uvicorn

    from wuglabels.errors import PortBusy

    app = create_app(config)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        if exc.errno == 98:  # EADDRINUSE
            raise PortBusy(f"port {port} already in use") from exc
        raise
