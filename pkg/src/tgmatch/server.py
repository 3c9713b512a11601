"""HTTP/JSON API over a workspace; the engine's only service surface.

Every analytics endpoint returns exactly the corresponding library value in
serialized form, so UI numbers are never recomputed client-side.  Errors
use ``{"error": {"code", "message"}}`` with conventional status codes.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import analytics
from .errors import (
    AlreadyMatched,
    BadField,
    EmptyMapping,
    InvalidRange,
    KindMismatch,
    MissingHeader,
    NonPositiveBinWidth,
    NotAPerson,
    NotInjective,
    NoVisibleEdges,
    TargetTaken,
    TgmatchError,
    UnknownChannel,
    UnknownNode,
    UnknownPair,
)
from .matcher import MatchSession, propose
from .similarity import SimilarityConfig
from .workspace import UnknownGraph, UnknownSession, UploadTooLarge, Workspace

_STATUS_BY_ERROR: list[tuple[type, int]] = [
    (UploadTooLarge, 413),
    (UnknownGraph, 404),
    (UnknownSession, 404),
    (UnknownNode, 404),
    (UnknownPair, 404),
    (TargetTaken, 409),
    (AlreadyMatched, 409),
    (MissingHeader, 400),
    (BadField, 400),
    (UnknownChannel, 400),
    (InvalidRange, 400),
    (NonPositiveBinWidth, 400),
    (NotAPerson, 400),
    (NotInjective, 400),
    (KindMismatch, 400),
    (EmptyMapping, 400),
    (NoVisibleEdges, 400),
]


def _status_for(exc: TgmatchError) -> int:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status
    return 400


class GraphUpload(BaseModel):
    id: str
    edges_csv: str
    nodes_csv: str | None = None


class ViewUpdate(BaseModel):
    channels: list[str] | None = None
    time_range: tuple[float, float] | None = Field(default=None)
    clear_time_range: bool = False
    time_offset: float | None = None


class HeatmapRequest(BaseModel):
    items: list[dict]  # {"graph": id, "person": int}
    channel: str
    bin_width: float | None = None
    origin: float = 0.0


class SessionCreate(BaseModel):
    template: str
    target: str
    seed: dict[str, int] | None = None
    auto_seed: bool = False
    config: dict | None = None
    session_id: str | None = None


class DecisionBody(BaseModel):
    template_node: int
    target_node: int
    verdict: str
    actor: str = "user"


class RunAutoBody(BaseModel):
    max_iterations: int = 10_000


class CompareBody(BaseModel):
    template: str
    candidates: list[str]


def session_summary(ws: Workspace, session: MatchSession) -> dict[str, Any]:
    template_id, target_id = ws._session_graphs[session.session_id]
    return {
        "id": session.session_id,
        "template_graph": template_id,
        "target_graph": target_id,
        "S": sorted(session.S),
        "T": sorted(session.T),
        "S_size": len(session.S),
        "T_size": len(session.T),
        "mapping": {str(t): session.mapping[t] for t in sorted(session.mapping)},
        "rejected": sorted(list(p) for p in session.rejected),
        "status": session.status,
        "seed": {str(t): b for t, b in sorted(session.seed.items())},
        "log_length": len(session.log),
        "log": [d.to_dict() for d in session.log],
    }


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="tgmatch", version="0.1.0")
    ws = workspace

    @app.exception_handler(TgmatchError)
    async def engine_error(_request: Request, exc: TgmatchError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(ValueError)
    async def value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "ValueError", "message": str(exc)}},
        )

    # -- graphs ---------------------------------------------------------

    @app.get("/api/graphs")
    def list_graphs():
        return {"graphs": ws.list_graphs()}

    @app.post("/api/graphs", status_code=201)
    def add_graph(body: GraphUpload):
        ws.add_graph(body.id,
                     body.edges_csv.encode("utf-8"),
                     body.nodes_csv.encode("utf-8") if body.nodes_csv is not None else None)
        return ws.graph_summary(body.id)

    @app.delete("/api/graphs/{graph_id}")
    def delete_graph(graph_id: str):
        ws.remove_graph(graph_id)
        return {"removed": graph_id}

    @app.put("/api/graphs/{graph_id}/view")
    def put_view(graph_id: str, body: ViewUpdate):
        time_range: Any = "keep"
        if body.clear_time_range:
            time_range = None
        elif body.time_range is not None:
            time_range = tuple(body.time_range)
        cfg = ws.set_view(graph_id, channels=body.channels,
                          time_range=time_range, time_offset=body.time_offset)
        return {"id": graph_id, "view": cfg.to_dict()}

    @app.get("/api/graphs/{graph_id}/stats")
    def graph_stats(graph_id: str):
        from .core import stats
        return stats(ws.view(graph_id)).to_dict()

    @app.get("/api/graphs/{graph_id}/histogram")
    def graph_histogram(graph_id: str, bin_width: float | None = None, origin: float = 0.0):
        return analytics.activity_histogram(ws.view(graph_id), bin_width, origin).to_dict()

    @app.get("/api/graphs/{graph_id}/scatter")
    def graph_scatter(graph_id: str):
        points = analytics.person_scatter(ws.view(graph_id))
        return {"points": [
            {"person": p.person, "time": p.time, "channel": p.channel, "edge": p.edge_ref}
            for p in points
        ]}

    @app.get("/api/graphs/{graph_id}/spatial")
    def graph_spatial(graph_id: str):
        return {"countries": analytics.spatial_distribution(ws.view(graph_id))}

    @app.get("/api/graphs/{graph_id}/structure")
    def graph_structure(graph_id: str):
        return analytics.structure_projection(ws.view(graph_id)).to_dict()

    @app.get("/api/graphs/{graph_id}/persons/{person_id}/channels")
    def person_channels(graph_id: str, person_id: int):
        counts = analytics.person_channel_counts(ws.view(graph_id), person_id)
        return {"person": person_id, "channels": counts}

    @app.post("/api/heatmap")
    def heatmap(body: HeatmapRequest):
        items = [(ws.view(item["graph"]), int(item["person"])) for item in body.items]
        return analytics.heatmap_pairs(items, body.channel, body.bin_width,
                                       body.origin).to_dict()

    # -- sessions -------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionCreate):
        cfg = SimilarityConfig.from_dict(body.config) if body.config else None
        seed = {int(t): int(b) for t, b in body.seed.items()} if body.seed else None
        session = ws.create_session(body.template, body.target, seed=seed,
                                    auto_seed=body.auto_seed, cfg=cfg,
                                    session_id=body.session_id)
        return session_summary(ws, session)

    @app.get("/api/sessions")
    def list_sessions():
        return {"sessions": ws.list_sessions()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return session_summary(ws, ws.get_session(session_id))

    @app.get("/api/sessions/{session_id}/candidates")
    def get_candidates(session_id: str, k: int = Query(default=1, ge=1)):
        session = ws.get_session(session_id)
        return {"candidates": [c.to_dict() for c in propose(session, k)]}

    @app.get("/api/sessions/{session_id}/export")
    def export_session_doc(session_id: str):
        return ws.session_document(session_id)

    @app.post("/api/sessions/{session_id}/decisions")
    def post_decision(session_id: str, body: DecisionBody):
        session = ws.decide(session_id, (body.template_node, body.target_node),
                            body.verdict, body.actor)
        return session_summary(ws, session)

    @app.post("/api/sessions/{session_id}/run-auto")
    def post_run_auto(session_id: str, body: RunAutoBody | None = None):
        max_iter = body.max_iterations if body else 10_000
        session = ws.run_auto(session_id, max_iter)
        return session_summary(ws, session)

    # -- comparison -------------------------------------------------------

    @app.post("/api/compare")
    def compare(body: CompareBody):
        return {"ranking": ws.compare(body.template, body.candidates)}

    return app
