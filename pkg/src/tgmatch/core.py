"""Typed temporal multigraph: CSV ingestion, indexes, filtered views.

A graph is immutable once loaded.  All analytics and matching read edges
through a :class:`GraphView`, which hides edges whose channel is disabled or
whose effective time ``raw + offset`` falls outside the configured range.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import BinaryIO, Iterable

import numpy as np

from . import _kernels
from .errors import (
    BadField,
    DanglingNodeRefWarning,
    InvalidRange,
    MissingHeader,
    UnknownChannel,
    UnknownNode,
)

EDGES_HEADER = ["source", "etype", "target", "time", "weight", "source_location", "target_location"]
NODES_HEADER = ["node", "kind", "label"]

DEFAULT_CHANNELS = ("author", "buy", "email", "financial", "phone", "procurement", "sell")

_CHANNEL_RE = re.compile(r"^[a-z][a-z0-9_-]*$")


class NodeKind(enum.Enum):
    Person = "Person"
    Document = "Document"
    Demographic = "Demographic"
    Country = "Country"
    Item = "Item"
    Unknown = "Unknown"


_KIND_BY_LOWER = {k.value.lower(): k for k in NodeKind}


def normalize_registry(channels: Iterable[str]) -> tuple[str, ...]:
    """Validate and sort a channel registry."""
    out = sorted(set(channels))
    for code in out:
        if not _CHANNEL_RE.match(code):
            raise ValueError(f"invalid channel code {code!r}: must be short lowercase")
    if not out:
        raise ValueError("channel registry must not be empty")
    return tuple(out)


class TemporalMultigraph:
    """Immutable store of kinded nodes and channel-typed timestamped edges.

    Construct through :func:`load_graph`.  Edge order follows the input file;
    node ids are arbitrary non-negative 64-bit integers.
    """

    def __init__(self, *, registry, node_ids, node_kinds, node_labels,
                 src, dst, channel_idx, time, weight, src_loc, dst_loc):
        self.registry: tuple[str, ...] = registry
        self._channel_index = {c: i for i, c in enumerate(registry)}
        self.node_ids = node_ids            # sorted unique int64
        self.node_kinds = node_kinds        # int8 codes, parallel to node_ids
        self.node_labels = node_labels      # dict id -> label (sparse)
        self.src = src
        self.dst = dst
        self.channel_idx = channel_idx
        self.time = time
        self.weight = weight
        self.src_loc = src_loc
        self.dst_loc = dst_loc

        self.src_idx = np.searchsorted(node_ids, src).astype(np.int64)
        self.dst_idx = np.searchsorted(node_ids, dst).astype(np.int64)

        self.indptr, self.incident = _kernels.build_incidence(
            self.src_idx, self.dst_idx, len(node_ids))

        # per-channel edge id lists (CSR over channel index)
        order = np.argsort(channel_idx, kind="stable")
        counts = np.bincount(channel_idx, minlength=len(registry))
        self.ch_indptr = np.zeros(len(registry) + 1, dtype=np.int64)
        np.cumsum(counts, out=self.ch_indptr[1:])
        self.ch_edges = np.arange(len(src), dtype=np.int64)[order]

        self.time_order = np.argsort(time, kind="stable")

        for arr in (self.node_ids, self.node_kinds, self.src, self.dst,
                    self.channel_idx, self.time, self.weight,
                    self.src_idx, self.dst_idx, self.indptr, self.incident,
                    self.ch_indptr, self.ch_edges, self.time_order):
            arr.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    def has_node(self, node: int) -> bool:
        i = np.searchsorted(self.node_ids, node)
        return i < len(self.node_ids) and self.node_ids[i] == node

    def node_index(self, node: int) -> int:
        i = int(np.searchsorted(self.node_ids, node))
        if i >= len(self.node_ids) or self.node_ids[i] != node:
            raise UnknownNode(node)
        return i

    def kind_of(self, node: int) -> NodeKind:
        return KIND_LIST[self.node_kinds[self.node_index(node)]]

    def label_of(self, node: int) -> str | None:
        self.node_index(node)
        return self.node_labels.get(node)

    def channel_of(self, edge: int) -> str:
        return self.registry[self.channel_idx[edge]]

    def incident_edges(self, node_idx: int) -> np.ndarray:
        return self.incident[self.indptr[node_idx]:self.indptr[node_idx + 1]]

    def channel_edges(self, channel: str) -> np.ndarray:
        ci = self._channel_index.get(channel)
        if ci is None:
            raise UnknownChannel(channel)
        return self.ch_edges[self.ch_indptr[ci]:self.ch_indptr[ci + 1]]


KIND_LIST = list(NodeKind)
KIND_CODE = {k: i for i, k in enumerate(KIND_LIST)}
PERSON_CODE = KIND_CODE[NodeKind.Person]


def kinds_compatible(a: NodeKind, b: NodeKind) -> bool:
    """Kind preservation rule: equal kinds, or either side Unknown."""
    return a == b or NodeKind.Unknown in (a, b)


@dataclass(frozen=True)
class ViewConfig:
    """Filter through which a graph is read.

    An edge is visible iff its channel is enabled and its effective time
    ``raw + time_offset`` lies in ``time_range`` (closed-open; ``None`` means
    unbounded).
    """

    enabled_channels: frozenset[str]
    time_range: tuple[float, float] | None = None
    time_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "enabled_channels", frozenset(self.enabled_channels))
        if self.time_range is not None:
            t0, t1 = self.time_range
            if not (t0 < t1):
                raise InvalidRange(f"time range [{t0}, {t1}) is empty")
            object.__setattr__(self, "time_range", (float(t0), float(t1)))
        object.__setattr__(self, "time_offset", float(self.time_offset))

    def to_dict(self) -> dict:
        return {
            "channels": sorted(self.enabled_channels),
            "time_range": list(self.time_range) if self.time_range else None,
            "time_offset": self.time_offset,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ViewConfig":
        rng = d.get("time_range")
        return cls(
            enabled_channels=frozenset(d["channels"]),
            time_range=tuple(rng) if rng else None,
            time_offset=d.get("time_offset", 0.0),
        )


def full_view_config(registry: Iterable[str]) -> ViewConfig:
    return ViewConfig(enabled_channels=frozenset(registry))


@dataclass(frozen=True)
class GraphView:
    """A graph plus its filter; the sole read path for analytics and matching."""

    graph: TemporalMultigraph
    config: ViewConfig

    @cached_property
    def _channel_enabled(self) -> np.ndarray:
        mask = np.zeros(len(self.graph.registry), dtype=bool)
        for c in self.config.enabled_channels:
            mask[self.graph._channel_index[c]] = True
        return mask

    @cached_property
    def visible_mask(self) -> np.ndarray:
        g = self.graph
        mask = self._channel_enabled[g.channel_idx]
        if self.config.time_range is not None:
            t0, t1 = self.config.time_range
            te = g.time + self.config.time_offset
            mask &= (te >= t0) & (te < t1)
        return mask

    @cached_property
    def visible_edges(self) -> np.ndarray:
        return np.nonzero(self.visible_mask)[0]

    def subset_visible(self, edge_ids: np.ndarray) -> np.ndarray:
        """Visibility flags for a subset of edges, without a full-graph pass."""
        g = self.graph
        mask = self._channel_enabled[g.channel_idx[edge_ids]]
        if self.config.time_range is not None:
            t0, t1 = self.config.time_range
            te = g.time[edge_ids] + self.config.time_offset
            mask &= (te >= t0) & (te < t1)
        return mask

    def effective_time(self, edge_ids: np.ndarray) -> np.ndarray:
        return self.graph.time[edge_ids] + self.config.time_offset


@dataclass(frozen=True)
class EdgeBundle:
    """All visible edges between one node pair, oriented by an anchor pair.

    ``forward[i]`` is true when edge ``i`` runs anchor_a -> anchor_b.
    """

    anchor_a: int
    anchor_b: int
    edge_ids: np.ndarray
    channels: tuple[str, ...]
    forward: np.ndarray
    times: np.ndarray      # effective times, file order
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.edge_ids)


@dataclass(frozen=True)
class ViewStats:
    channel_counts: dict[str, int]
    node_count: int
    visible_edges: int
    extent: tuple[float, float] | None

    def to_dict(self) -> dict:
        return {
            "channels": dict(self.channel_counts),
            "nodes": self.node_count,
            "visible_edges": self.visible_edges,
            "extent": list(self.extent) if self.extent else None,
        }


# ---------------------------------------------------------------------------
# loading

def _as_text(source: bytes | str | BinaryIO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data


def _parse_int(value: str, line: int, column: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise BadField(line, column, f"expected integer, got {value!r}") from None
    if v < 0:
        raise BadField(line, column, "node ids must be non-negative")
    return v


def _parse_float(value: str, line: int, column: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise BadField(line, column, f"expected number, got {value!r}") from None
    if not math.isfinite(v):
        raise BadField(line, column, "value must be finite")
    return v


def load_graph(edges_csv: bytes | str | BinaryIO,
               nodes_csv: bytes | str | BinaryIO | None = None,
               registry: Iterable[str] = DEFAULT_CHANNELS) -> TemporalMultigraph:
    """Parse edge (and optional node) CSVs into an indexed immutable graph.

    The edge header must be exactly ``source,etype,target,time,weight,
    source_location,target_location``; every ``etype`` must already be in
    ``registry``.  Node kinds come from ``nodes_csv``; endpoints it does not
    mention get kind Unknown.  Identical input bytes always produce identical
    graphs.
    """
    registry = normalize_registry(registry)
    channel_index = {c: i for i, c in enumerate(registry)}

    reader = csv.reader(io.StringIO(_as_text(edges_csv)))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingHeader("edges CSV is empty") from None
    if header != EDGES_HEADER:
        raise MissingHeader(f"edges CSV must start with {','.join(EDGES_HEADER)!r}")

    src: list[int] = []
    dst: list[int] = []
    chan: list[int] = []
    time: list[float] = []
    weight: list[float] = []
    src_loc: list[str] = []
    dst_loc: list[str] = []

    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 7:
            raise BadField(lineno, "row", f"expected 7 fields, got {len(row)}")
        ci = channel_index.get(row[1])
        if ci is None:
            raise UnknownChannel(row[1], lineno)
        src.append(_parse_int(row[0], lineno, "source"))
        dst.append(_parse_int(row[2], lineno, "target"))
        chan.append(ci)
        time.append(_parse_float(row[3], lineno, "time"))
        weight.append(_parse_float(row[4], lineno, "weight"))
        src_loc.append(row[5])
        dst_loc.append(row[6])

    src_arr = np.asarray(src, dtype=np.int64)
    dst_arr = np.asarray(dst, dtype=np.int64)

    declared: dict[int, tuple[NodeKind, str]] = {}
    if nodes_csv is not None:
        nreader = csv.reader(io.StringIO(_as_text(nodes_csv)))
        try:
            nheader = next(nreader)
        except StopIteration:
            raise MissingHeader("nodes CSV is empty") from None
        if nheader != NODES_HEADER:
            raise MissingHeader(f"nodes CSV must start with {','.join(NODES_HEADER)!r}")
        for lineno, row in enumerate(nreader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise BadField(lineno, "row", f"expected 3 fields, got {len(row)}")
            nid = _parse_int(row[0], lineno, "node")
            kind_text = row[1].strip()
            if kind_text == "":
                kind = NodeKind.Unknown
            else:
                kind = _KIND_BY_LOWER.get(kind_text.lower())
                if kind is None:
                    raise BadField(lineno, "kind", f"unknown node kind {kind_text!r}")
            declared[nid] = (kind, row[2])

    endpoint_ids = np.unique(np.concatenate([src_arr, dst_arr])) if len(src) else np.zeros(0, np.int64)
    endpoint_set = set(int(x) for x in endpoint_ids)
    for nid, (kind, _) in declared.items():
        if nid not in endpoint_set and kind is NodeKind.Unknown:
            warnings.warn(
                f"node {nid} references no edge and declares no kind",
                DanglingNodeRefWarning, stacklevel=2)

    all_ids = np.unique(np.concatenate([
        endpoint_ids, np.asarray(sorted(declared), dtype=np.int64)]))
    kinds = np.full(len(all_ids), KIND_CODE[NodeKind.Unknown], dtype=np.int8)
    labels: dict[int, str] = {}
    for nid, (kind, label) in declared.items():
        pos = int(np.searchsorted(all_ids, nid))
        kinds[pos] = KIND_CODE[kind]
        if label:
            labels[nid] = label

    return TemporalMultigraph(
        registry=registry,
        node_ids=all_ids,
        node_kinds=kinds,
        node_labels=labels,
        src=src_arr,
        dst=dst_arr,
        channel_idx=np.asarray(chan, dtype=np.int32),
        time=np.asarray(time, dtype=np.float64),
        weight=np.asarray(weight, dtype=np.float64),
        src_loc=np.asarray(src_loc, dtype=np.str_) if src_loc else np.zeros(0, dtype="<U1"),
        dst_loc=np.asarray(dst_loc, dtype=np.str_) if dst_loc else np.zeros(0, dtype="<U1"),
    )


# ---------------------------------------------------------------------------
# view operations

def with_view(graph: TemporalMultigraph, config: ViewConfig) -> GraphView:
    """Attach a filter to a graph.  O(1); nothing is copied."""
    for c in config.enabled_channels:
        if c not in graph._channel_index:
            raise UnknownChannel(c)
    return GraphView(graph=graph, config=config)


def full_view(graph: TemporalMultigraph) -> GraphView:
    return with_view(graph, full_view_config(graph.registry))


def adjacent(view: GraphView, node: int) -> dict[int, frozenset[str]]:
    """Visible neighbors of ``node`` with the set of channels joining each pair."""
    g = view.graph
    idx = g.node_index(node)
    eids = g.incident_edges(idx)
    if len(eids) == 0:
        return {}
    eids = eids[view.subset_visible(eids)]
    out: dict[int, set[str]] = {}
    srcs = g.src[eids]
    dsts = g.dst[eids]
    chans = g.channel_idx[eids]
    for k in range(len(eids)):
        other = int(dsts[k]) if srcs[k] == node else int(srcs[k])
        out.setdefault(other, set()).add(g.registry[chans[k]])
    return {n: frozenset(cs) for n, cs in out.items()}


def edge_bundle(view: GraphView, a: int, b: int) -> EdgeBundle:
    """All visible edges between ``a`` and ``b``, oriented by the (a, b) anchor."""
    g = view.graph
    ia = g.node_index(a)
    ib = g.node_index(b)
    # walk the smaller incidence list
    ea = g.incident_edges(ia)
    eb = g.incident_edges(ib)
    eids = ea if len(ea) <= len(eb) else eb
    if a == b:
        sel = (g.src[eids] == a) & (g.dst[eids] == a)
    else:
        sel = ((g.src[eids] == a) & (g.dst[eids] == b)) | \
              ((g.src[eids] == b) & (g.dst[eids] == a))
    eids = eids[sel]
    if len(eids):
        eids = np.unique(eids)  # self-loops appear twice in one incidence list
        eids = eids[view.subset_visible(eids)]
    forward = g.src[eids] == a
    return EdgeBundle(
        anchor_a=a,
        anchor_b=b,
        edge_ids=eids,
        channels=tuple(g.registry[c] for c in g.channel_idx[eids]),
        forward=forward,
        times=view.effective_time(eids),
        weights=g.weight[eids].copy(),
    )


def stats(view: GraphView) -> ViewStats:
    """Per-channel visible counts, node count, and the visible effective-time extent."""
    g = view.graph
    eids = view.visible_edges
    counts = np.bincount(g.channel_idx[eids], minlength=len(g.registry))
    channel_counts = {g.registry[i]: int(c) for i, c in enumerate(counts) if c > 0}
    if len(eids):
        te = view.effective_time(eids)
        extent = (float(te.min()), float(te.max()))
    else:
        extent = None
    return ViewStats(
        channel_counts=channel_counts,
        node_count=g.n_nodes,
        visible_edges=int(len(eids)),
        extent=extent,
    )
