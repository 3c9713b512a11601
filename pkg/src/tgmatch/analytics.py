"""Chart data behind the organization and personnel panels.

Everything operates on a :class:`~tgmatch.core.GraphView` and counts one
edge as one activity.  An edge between two persons counts for both of them
in the per-person surfaces (scatter, bar chart, heatmap).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels
from .core import PERSON_CODE, GraphView, stats
from .errors import NonPositiveBinWidth, NotAPerson, UnknownChannel


@dataclass(frozen=True)
class Histogram:
    """Dense time histogram; bin k covers [origin + k*w, origin + (k+1)*w).

    ``origin`` is snapped onto the caller's bin grid at the first occupied
    bin, so ``counts`` carries no leading or trailing empty bins.
    """

    origin: float
    bin_width: float
    counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"origin": self.origin, "bin_width": self.bin_width, "counts": list(self.counts)}


@dataclass(frozen=True)
class ScatterPoint:
    person: int
    time: float
    channel: str
    edge_ref: int


@dataclass(frozen=True)
class StructureGraph:
    persons: frozenset[int]
    links: dict[tuple[int, int], int]

    def to_dict(self) -> dict:
        return {
            "persons": sorted(self.persons),
            "links": [{"a": a, "b": b, "weight": w} for (a, b), w in sorted(self.links.items())],
        }


@dataclass(frozen=True)
class HeatmapMatrix:
    persons: tuple[int, ...]
    origin: float
    bin_width: float
    cells: np.ndarray  # persons x bins, int64

    def row_sum(self, i: int) -> int:
        return int(self.cells[i].sum())

    def to_dict(self) -> dict:
        return {
            "persons": list(self.persons),
            "origin": self.origin,
            "bin_width": self.bin_width,
            "cells": self.cells.tolist(),
        }


def default_bin_width(view: GraphView) -> float:
    """1/50 of the visible extent, clamped to at least one second."""
    extent = stats(view).extent
    if extent is None:
        return 1.0
    return max((extent[1] - extent[0]) / 50.0, 1.0)


def _check_width(bin_width: float) -> float:
    if bin_width <= 0:
        raise NonPositiveBinWidth(f"bin width must be positive, got {bin_width}")
    return float(bin_width)


def activity_histogram(view: GraphView, bin_width: float | None = None,
                       origin: float = 0.0) -> Histogram:
    """Overall activity frequency: every visible edge lands in the bin
    containing its effective time."""
    w = default_bin_width(view) if bin_width is None else _check_width(bin_width)
    times = view.effective_time(view.visible_edges)
    if len(times) == 0:
        return Histogram(origin=float(origin), bin_width=w, counts=())
    k0, counts = _kernels.bin_counts(np.ascontiguousarray(times, dtype=np.float64),
                                     float(origin), w)
    return Histogram(origin=float(origin) + k0 * w, bin_width=w,
                     counts=tuple(int(c) for c in counts))


def person_scatter(view: GraphView) -> list[ScatterPoint]:
    """One point per (visible edge, Person endpoint); ordered by edge, source first."""
    g = view.graph
    eids = view.visible_edges
    te = view.effective_time(eids)
    src_person = g.node_kinds[g.src_idx[eids]] == PERSON_CODE
    dst_person = g.node_kinds[g.dst_idx[eids]] == PERSON_CODE
    points: list[ScatterPoint] = []
    for k in range(len(eids)):
        e = int(eids[k])
        ch = g.registry[g.channel_idx[e]]
        if src_person[k]:
            points.append(ScatterPoint(int(g.src[e]), float(te[k]), ch, e))
        if dst_person[k]:
            points.append(ScatterPoint(int(g.dst[e]), float(te[k]), ch, e))
    return points


def spatial_distribution(view: GraphView) -> dict[str, int]:
    """Country code -> activity count; each located endpoint adds one."""
    g = view.graph
    eids = view.visible_edges
    if len(eids) == 0 or len(g.src_loc) == 0:
        return {}
    locs = np.concatenate([g.src_loc[eids], g.dst_loc[eids]])
    locs = locs[locs != ""]
    codes, counts = np.unique(locs, return_counts=True)
    return {str(c): int(n) for c, n in zip(codes, counts)}


def structure_projection(view: GraphView) -> StructureGraph:
    """Person-to-person projection: direct visible edges plus distinct shared
    non-Person neighbors; zero-weight pairs are omitted."""
    g = view.graph
    persons = frozenset(int(n) for n, k in zip(g.node_ids, g.node_kinds) if k == PERSON_CODE)
    links: dict[tuple[int, int], int] = {}

    eids = view.visible_edges
    src_person = g.node_kinds[g.src_idx[eids]] == PERSON_CODE
    dst_person = g.node_kinds[g.dst_idx[eids]] == PERSON_CODE
    both = src_person & dst_person
    for e in eids[both]:
        u, v = int(g.src[e]), int(g.dst[e])
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        links[key] = links.get(key, 0) + 1

    # shared activities: one unit per distinct non-Person node adjacent to both
    for pos in range(g.n_nodes):
        if g.node_kinds[pos] == PERSON_CODE:
            continue
        inc = g.incident_edges(pos)
        if len(inc) == 0:
            continue
        inc = inc[view.subset_visible(inc)]
        nid = int(g.node_ids[pos])
        neighbors = set()
        for e in inc:
            u, v = int(g.src[e]), int(g.dst[e])
            other = v if u == nid else u
            if other != nid and g.node_kinds[g.node_index(other)] == PERSON_CODE:
                neighbors.add(other)
        for p, q in combinations(sorted(neighbors), 2):
            links[(p, q)] = links.get((p, q), 0) + 1

    return StructureGraph(persons=persons, links=links)


def person_channel_counts(view: GraphView, person: int) -> dict[str, int]:
    """Visible activity count per channel for one person (bar chart data)."""
    g = view.graph
    idx = g.node_index(person)
    if g.node_kinds[idx] != PERSON_CODE:
        raise NotAPerson(person)
    inc = g.incident_edges(idx)
    if len(inc) == 0:
        return {}
    inc = inc[view.subset_visible(inc)]
    counts = np.bincount(g.channel_idx[inc], minlength=len(g.registry))
    return {g.registry[i]: int(c) for i, c in enumerate(counts) if c > 0}


def _person_channel_times(view: GraphView, person: int, channel: str) -> np.ndarray:
    g = view.graph
    if channel not in g.registry:
        raise UnknownChannel(channel)
    idx = g.node_index(person)
    if g.node_kinds[idx] != PERSON_CODE:
        raise NotAPerson(person)
    inc = g.incident_edges(idx)
    inc = inc[g.channel_idx[inc] == g._channel_index[channel]]
    if len(inc):
        inc = inc[view.subset_visible(inc)]
    return view.effective_time(inc)


def heatmap_pairs(items: Sequence[tuple[GraphView, int]], channel: str,
                  bin_width: float | None = None, origin: float = 0.0) -> HeatmapMatrix:
    """Heatmap over (view, person) pairs, allowing persons from different graphs."""
    if bin_width is None:
        widths = [default_bin_width(v) for v, _ in items]
        w = max(widths) if widths else 1.0
    else:
        w = _check_width(bin_width)
    rows = [_person_channel_times(view, person, channel) for view, person in items]
    persons = tuple(person for _, person in items)
    nonempty = [r for r in rows if len(r)]
    if not nonempty:
        return HeatmapMatrix(persons=persons, origin=float(origin), bin_width=w,
                             cells=np.zeros((len(items), 0), dtype=np.int64))
    all_bins = [np.floor((r - origin) / w).astype(np.int64) for r in rows]
    k0 = min(int(b.min()) for b in all_bins if len(b))
    k1 = max(int(b.max()) for b in all_bins if len(b))
    cells = np.zeros((len(items), k1 - k0 + 1), dtype=np.int64)
    for i, b in enumerate(all_bins):
        if len(b):
            cells[i] = np.bincount(b - k0, minlength=k1 - k0 + 1)
    return HeatmapMatrix(persons=persons, origin=float(origin) + k0 * w,
                         bin_width=w, cells=cells)


def heatmap(view: GraphView, persons: Sequence[int], channel: str,
            bin_width: float | None = None, origin: float = 0.0) -> HeatmapMatrix:
    """Activity-frequency heatmap for persons of a single graph."""
    return heatmap_pairs([(view, p) for p in persons], channel, bin_width, origin)
