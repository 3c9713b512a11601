"""File-backed workspace: graphs as their original CSVs plus a view config,
sessions as replayable JSON decision logs, one shared config file.

Layout under the workspace root:

    graphs/<id>/edges.csv        original upload bytes
    graphs/<id>/nodes.csv        optional
    graphs/<id>/view.json        current ViewConfig
    sessions/<id>.json           seed + config + decision log (+ view configs)
    config.json                  similarity defaults, channel registry, caps

Graphs are immutable once loaded; views are server-side state keyed by
graph id so every consumer sees the same filter.  All metadata writes are
atomic (write temp, rename).  One writer per graph id and per session id.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from .core import (
    DEFAULT_CHANNELS,
    GraphView,
    TemporalMultigraph,
    ViewConfig,
    full_view_config,
    load_graph,
    stats,
    with_view,
)
from .errors import TgmatchError
from .matcher import (
    MatchSession,
    decide,
    derive_seed_signature,
    export_session,
    find_seeds,
    import_session,
    init_session,
    rank_candidates,
    run_auto,
)
from .similarity import SimilarityConfig

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")

DEFAULT_MAX_UPLOAD = 2 * 1024 ** 3  # bytes


class WorkspaceError(TgmatchError):
    code = "WorkspaceError"


class UploadTooLarge(WorkspaceError):
    code = "UploadTooLarge"


class UnknownGraph(TgmatchError):
    code = "UnknownGraph"

    def __init__(self, graph_id: str):
        self.graph_id = graph_id
        super().__init__(f"no graph with id '{graph_id}'")


class UnknownSession(TgmatchError):
    code = "UnknownSession"

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"no session with id '{session_id}'")


def _check_id(value: str) -> str:
    if not _ID_RE.match(value):
        raise WorkspaceError(f"invalid id {value!r}: letters, digits, '._-' only")
    return value


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


@dataclass
class GraphEntry:
    graph: TemporalMultigraph
    view_config: ViewConfig

    @property
    def view(self) -> GraphView:
        return with_view(self.graph, self.view_config)


class Workspace:
    """All state behind the CLI and the HTTP service."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "graphs").mkdir(parents=True, exist_ok=True)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._session_locks: dict[str, threading.RLock] = {}

        cfg_path = self.root / "config.json"
        if cfg_path.exists():
            raw = json.loads(cfg_path.read_text())
        else:
            raw = {
                "similarity": SimilarityConfig().to_dict(),
                "channels": list(DEFAULT_CHANNELS),
                "max_upload_bytes": DEFAULT_MAX_UPLOAD,
            }
            _atomic_write(cfg_path, json.dumps(raw, indent=2).encode())
        self.similarity_config = SimilarityConfig.from_dict(raw["similarity"])
        self.registry = tuple(sorted(raw.get("channels", DEFAULT_CHANNELS)))
        self.max_upload_bytes = int(raw.get("max_upload_bytes", DEFAULT_MAX_UPLOAD))

        self.graphs: dict[str, GraphEntry] = {}
        self.sessions: dict[str, MatchSession] = {}
        self._session_graphs: dict[str, tuple[str, str]] = {}
        self._load_existing()

    # -- loading ------------------------------------------------------------

    def _load_existing(self) -> None:
        for gdir in sorted((self.root / "graphs").iterdir()) if (self.root / "graphs").exists() else []:
            if not gdir.is_dir():
                continue
            edges = gdir / "edges.csv"
            if not edges.exists():
                continue
            nodes = gdir / "nodes.csv"
            graph = load_graph(edges.read_bytes(),
                               nodes.read_bytes() if nodes.exists() else None,
                               registry=self.registry)
            view_path = gdir / "view.json"
            if view_path.exists():
                view_config = ViewConfig.from_dict(json.loads(view_path.read_text()))
            else:
                view_config = full_view_config(self.registry)
            self.graphs[gdir.name] = GraphEntry(graph=graph, view_config=view_config)

        sess_dir = self.root / "sessions"
        for sfile in sorted(sess_dir.glob("*.json")):
            doc = json.loads(sfile.read_text())
            try:
                self._restore_session(doc)
            except (TgmatchError, KeyError, ValueError):
                # a session whose graphs were removed behind our back
                continue

    def _restore_session(self, doc: dict) -> MatchSession:
        template_id = doc["template_graph"]
        target_id = doc["target_graph"]
        template = self._view_from(template_id, doc.get("template_view"))
        target = self._view_from(target_id, doc.get("target_view"))
        session = import_session(template, target, doc)
        self.sessions[session.session_id] = session
        self._session_graphs[session.session_id] = (template_id, target_id)
        return session

    def _view_from(self, graph_id: str, view_doc: dict | None) -> GraphView:
        entry = self._entry(graph_id)
        if view_doc is None:
            return entry.view
        return with_view(entry.graph, ViewConfig.from_dict(view_doc))

    # -- graphs -------------------------------------------------------------

    def _entry(self, graph_id: str) -> GraphEntry:
        entry = self.graphs.get(graph_id)
        if entry is None:
            raise UnknownGraph(graph_id)
        return entry

    def add_graph(self, graph_id: str, edges_bytes: bytes,
                  nodes_bytes: bytes | None = None) -> GraphEntry:
        """Load and persist a graph; re-posting identical bytes replaces it."""
        _check_id(graph_id)
        total = len(edges_bytes) + (len(nodes_bytes) if nodes_bytes else 0)
        if total > self.max_upload_bytes:
            raise UploadTooLarge(
                f"upload of {total} bytes exceeds the {self.max_upload_bytes} byte cap")
        graph = load_graph(edges_bytes, nodes_bytes, registry=self.registry)
        with self._lock:
            gdir = self.root / "graphs" / graph_id
            gdir.mkdir(parents=True, exist_ok=True)
            _atomic_write(gdir / "edges.csv", edges_bytes)
            nodes_path = gdir / "nodes.csv"
            if nodes_bytes is not None:
                _atomic_write(nodes_path, nodes_bytes)
            elif nodes_path.exists():
                nodes_path.unlink()
            view_config = full_view_config(self.registry)
            _atomic_write(gdir / "view.json", json.dumps(view_config.to_dict()).encode())
            entry = GraphEntry(graph=graph, view_config=view_config)
            self.graphs[graph_id] = entry
            return entry

    def remove_graph(self, graph_id: str) -> None:
        """Drop a graph and every session that references it."""
        with self._lock:
            self._entry(graph_id)
            for sid, (tid, gid) in list(self._session_graphs.items()):
                if graph_id in (tid, gid):
                    self._drop_session(sid)
            del self.graphs[graph_id]
            gdir = self.root / "graphs" / graph_id
            for f in sorted(gdir.glob("*")):
                f.unlink()
            gdir.rmdir()

    def set_view(self, graph_id: str, *, channels=None, time_range="keep",
                 time_offset=None) -> ViewConfig:
        """Update the stored view config; omitted fields keep their value."""
        with self._lock:
            entry = self._entry(graph_id)
            current = entry.view_config
            cfg = ViewConfig(
                enabled_channels=frozenset(channels) if channels is not None
                else current.enabled_channels,
                time_range=current.time_range if time_range == "keep" else time_range,
                time_offset=current.time_offset if time_offset is None else time_offset,
            )
            with_view(entry.graph, cfg)  # validates channels against the registry
            entry.view_config = cfg
            gdir = self.root / "graphs" / graph_id
            _atomic_write(gdir / "view.json", json.dumps(cfg.to_dict()).encode())
            return cfg

    def view(self, graph_id: str) -> GraphView:
        return self._entry(graph_id).view

    def graph_summary(self, graph_id: str) -> dict:
        entry = self._entry(graph_id)
        return {
            "id": graph_id,
            "nodes": entry.graph.n_nodes,
            "edges": entry.graph.n_edges,
            "view": entry.view_config.to_dict(),
            "stats": stats(entry.view).to_dict(),
        }

    def list_graphs(self) -> list[dict]:
        return [self.graph_summary(gid) for gid in sorted(self.graphs)]

    # -- sessions -----------------------------------------------------------

    def _session_lock(self, session_id: str) -> threading.RLock:
        with self._lock:
            return self._session_locks.setdefault(session_id, threading.RLock())

    def _session(self, session_id: str) -> MatchSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def create_session(self, template_id: str, target_id: str,
                       seed: dict[int, int] | None = None,
                       auto_seed: bool = False,
                       cfg: SimilarityConfig | None = None,
                       session_id: str | None = None) -> MatchSession:
        cfg = cfg or self.similarity_config
        template = self.view(template_id)
        target = self.view(target_id)
        if auto_seed:
            sig = derive_seed_signature(template)
            seeds = find_seeds(target, sig, cfg, limit=1)
            if not seeds:
                raise WorkspaceError("auto_seed found no qualifying seed in the target")
            seed = seeds[0].mapping
        if not seed:
            raise WorkspaceError("a seed mapping (or auto_seed) is required")
        session = init_session(template, target, seed, cfg, session_id=session_id)
        with self._lock:
            self.sessions[session.session_id] = session
            self._session_graphs[session.session_id] = (template_id, target_id)
        self._persist_session(session)
        return session

    def session_document(self, session_id: str) -> dict:
        session = self._session(session_id)
        template_id, target_id = self._session_graphs[session_id]
        doc = export_session(session)
        doc["template_graph"] = template_id
        doc["target_graph"] = target_id
        doc["template_view"] = session.template.config.to_dict()
        doc["target_view"] = session.target.config.to_dict()
        return doc

    def _persist_session(self, session: MatchSession) -> None:
        doc = self.session_document(session.session_id)
        path = self.root / "sessions" / f"{session.session_id}.json"
        _atomic_write(path, json.dumps(doc, indent=2).encode())

    def _drop_session(self, session_id: str) -> None:
        self.sessions.pop(session_id, None)
        self._session_graphs.pop(session_id, None)
        self._session_locks.pop(session_id, None)
        path = self.root / "sessions" / f"{session_id}.json"
        if path.exists():
            path.unlink()

    def decide(self, session_id: str, pair: tuple[int, int], verdict: str,
               actor: str = "user") -> MatchSession:
        with self._session_lock(session_id):
            session = self._session(session_id)
            decide(session, pair, verdict, actor)
            self._persist_session(session)
            return session

    def run_auto(self, session_id: str, max_iterations: int = 10_000) -> MatchSession:
        with self._session_lock(session_id):
            session = self._session(session_id)
            run_auto(session, max_iterations)
            self._persist_session(session)
            return session

    def get_session(self, session_id: str) -> MatchSession:
        return self._session(session_id)

    def list_sessions(self) -> list[str]:
        return sorted(self.sessions)

    # -- comparison ---------------------------------------------------------

    def compare(self, template_id: str, candidate_ids: list[str],
                cfg: SimilarityConfig | None = None) -> list[dict]:
        template = self.view(template_id)
        views = [self.view(cid) for cid in candidate_ids]
        ranked = rank_candidates(template, views, cfg or self.similarity_config)
        return [{**r.to_dict(), "candidate": candidate_ids[r.index]} for r in ranked]
