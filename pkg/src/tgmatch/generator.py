"""Synthetic ground-truth instances: random templates, planted copies in
random backgrounds, and degraded variants for recovery and ranking
experiments.

Everything goes through the CSV loader so generated graphs exercise the
same ingestion path as real data.  Node ids: template nodes are 0..n-1,
planted copies live at ``COPY_OFFSET + id``, background nodes below that.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    EDGES_HEADER,
    NODES_HEADER,
    GraphView,
    TemporalMultigraph,
    full_view,
    load_graph,
)

COPY_OFFSET = 5000
DAY = 86400.0

TEMPLATE_CHANNELS = ("email", "phone", "procurement", "sell")
COMMON_CHANNELS = ("email", "phone", "sell")
RARE_CHANNEL = "procurement"

KIND_POOL = ("Person", "Person", "Person", "Document", "Item", "Demographic")
COUNTRY_POOL = ("AA", "BB", "CC", "DD")

Row = tuple[int, str, int, float, float, str, str]


@dataclass(frozen=True)
class RowSet:
    edges: tuple[Row, ...]
    kinds: dict[int, str]
    registry: tuple[str, ...]

    @property
    def node_ids(self) -> list[int]:
        return sorted(self.kinds)


def edges_csv(rows: RowSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(EDGES_HEADER)
    for src, ch, dst, t, weight, sloc, dloc in rows.edges:
        w.writerow([src, ch, dst, repr(float(t)), repr(float(weight)), sloc, dloc])
    return buf.getvalue()


def nodes_csv(rows: RowSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(NODES_HEADER)
    for nid in sorted(rows.kinds):
        w.writerow([nid, rows.kinds[nid], ""])
    return buf.getvalue()


def to_graph(rows: RowSet) -> TemporalMultigraph:
    return load_graph(edges_csv(rows), nodes_csv(rows), registry=rows.registry)


def to_view(rows: RowSet) -> GraphView:
    return full_view(to_graph(rows))


def _sample_kinds(rng: np.random.Generator, ids, ensure_persons: int = 2,
                  ensure_item: bool = True) -> dict[int, str]:
    ids = list(ids)
    kinds = {nid: KIND_POOL[rng.integers(0, len(KIND_POOL))] for nid in ids}
    persons = [n for n, k in kinds.items() if k == "Person"]
    i = 0
    while len(persons) < ensure_persons and i < len(ids):
        if kinds[ids[i]] != "Person":
            kinds[ids[i]] = "Person"
            persons.append(ids[i])
        i += 1
    if ensure_item and not any(k == "Item" for k in kinds.values()):
        non_persons = [n for n in ids if n not in persons[:ensure_persons]]
        if non_persons:
            kinds[non_persons[0]] = "Item"
    return kinds


def _rand_time(rng: np.random.Generator, span: float) -> float:
    return float(rng.uniform(0.0, span))


def _rand_weight(rng: np.random.Generator) -> float:
    return float(np.round(rng.uniform(0.5, 5.0), 3))


def random_template_rows(rng: np.random.Generator, n_nodes: int = 30,
                         n_edges: int = 120, time_span: float = 30 * DAY,
                         with_locations: bool = True, bundle_edges: int = 3) -> RowSet:
    """Connected random template over four channels whose only rare-channel
    link is a dense procurement bundle between two persons."""
    if n_nodes < 6:
        raise ValueError("template needs at least 6 nodes")
    if n_edges < bundle_edges * n_nodes + 14:
        raise ValueError("edge budget too small for the bundle ring plus the motif")
    ids = list(range(n_nodes))
    kinds = _sample_kinds(rng, ids)

    # ring layout first: two-connected, so no single rejection can cut off a
    # whole region during expansion
    ring = list(rng.permutation(n_nodes))
    pos = {n: i for i, n in enumerate(ring)}

    def ring_distance(a: int, b: int) -> int:
        d = abs(pos[a] - pos[b])
        return min(d, n_nodes - d)

    # motif pair: two persons far enough apart on the ring that they cannot
    # share a ring neighbor
    persons = [n for n in ids if kinds[n] == "Person"]
    far_pairs = [(a, b) for i, a in enumerate(persons) for b in persons[i + 1:]
                 if ring_distance(a, b) >= 3]
    if far_pairs:
        p1, p2 = far_pairs[int(rng.integers(0, len(far_pairs)))]
    else:
        p1, p2 = sorted(rng.choice(persons, size=2, replace=False).tolist())

    adj: dict[int, set[int]] = {n: set() for n in ids}
    edges: list[Row] = []

    def add(u: int, v: int, ch: str, t: float):
        sloc = dloc = ""
        if with_locations and ch == "sell" and rng.random() < 0.4:
            sloc = COUNTRY_POOL[rng.integers(0, len(COUNTRY_POOL))]
            dloc = COUNTRY_POOL[rng.integers(0, len(COUNTRY_POOL))]
        edges.append((u, ch, v, t, _rand_weight(rng), sloc, dloc))
        adj[u].add(v)
        adj[v].add(u)

    def makes_shared_nonperson(u: int, v: int) -> bool:
        # keep the motif pair's shared neighborhood empty of non-persons so
        # its seed signature stays exactly the procurement pair
        for a, b in ((u, v), (v, u)):
            if a in (p1, p2) and kinds[b] != "Person":
                other = p2 if a == p1 else p1
                if other in adj[b]:
                    return True
        return False

    def burst(base: float, n: int) -> list[float]:
        # contacts between one pair come in tight bursts around a base time
        return [float(base + rng.uniform(-0.4 * DAY, 0.4 * DAY)) for _ in range(n)]

    def add_bundle(u: int, v: int, ch: str, n: int):
        base = _rand_time(rng, time_span)
        for k, t in enumerate(burst(base, n)):
            # occasional reply in the opposite direction
            if k > 0 and rng.random() < 0.25:
                add(v, u, ch, t)
            else:
                add(u, v, ch, t)

    for i in range(n_nodes):
        add_bundle(ring[i], ring[(i + 1) % n_nodes],
                   COMMON_CHANNELS[rng.integers(0, len(COMMON_CHANNELS))], bundle_edges)

    # rare motif: the only procurement-linked pair, dense and mostly one way
    base = _rand_time(rng, time_span)
    times = burst(base, 14)
    for t in times[:12]:
        add(p1, p2, RARE_CHANNEL, t)
    for t in times[12:]:
        add(p2, p1, RARE_CHANNEL, t)

    # random chords
    while len(edges) < n_edges:
        u, v = rng.integers(0, n_nodes, size=2)
        if u == v or makes_shared_nonperson(int(u), int(v)):
            continue
        n = int(min(bundle_edges + rng.integers(0, 2), n_edges - len(edges)))
        add_bundle(int(u), int(v), COMMON_CHANNELS[rng.integers(0, len(COMMON_CHANNELS))], n)

    return RowSet(edges=tuple(edges[:n_edges]), kinds=kinds, registry=TEMPLATE_CHANNELS)


def remap_rows(rows: RowSet, offset: int = COPY_OFFSET) -> RowSet:
    """Shift every node id; the planted-copy ground truth is t -> t + offset."""
    edges = tuple((s + offset, ch, d + offset, t, w, sl, dl)
                  for s, ch, d, t, w, sl, dl in rows.edges)
    kinds = {n + offset: k for n, k in rows.kinds.items()}
    return RowSet(edges=edges, kinds=kinds, registry=rows.registry)


def degrade_rows(rng: np.random.Generator, rows: RowSet, deletion: float = 0.0,
                 jitter: float = 0.0, shuffle_channels: bool = False) -> RowSet:
    """Delete a fraction of edges, jitter timestamps, or shuffle channels."""
    edges = []
    for row in rows.edges:
        if deletion > 0 and rng.random() < deletion:
            continue
        s, ch, d, t, w, sl, dl = row
        if jitter > 0:
            t = t + float(rng.uniform(-jitter, jitter))
        if shuffle_channels:
            ch = rows.registry[rng.integers(0, len(rows.registry))]
        edges.append((s, ch, d, t, w, sl, dl))
    return replace(rows, edges=tuple(edges))


def random_background_rows(rng: np.random.Generator, n_nodes: int = 1000,
                           n_edges: int = 20_000, time_span: float = 30 * DAY,
                           rare_fraction: float = 0.1) -> RowSet:
    """Random noise graph over the template's channels; the rare channel is
    under-represented the way procurement is in the data this mimics."""
    kinds = _sample_kinds(rng, range(n_nodes))
    n_rare = int(n_edges * rare_fraction)
    chans = [RARE_CHANNEL] * n_rare + [
        COMMON_CHANNELS[int(c)] for c in rng.integers(0, len(COMMON_CHANNELS),
                                                      size=n_edges - n_rare)]
    src = rng.integers(0, n_nodes, size=n_edges)
    dst = rng.integers(0, n_nodes, size=n_edges)
    dst = np.where(dst == src, (dst + 1) % n_nodes, dst)
    times = rng.uniform(0.0, time_span, size=n_edges)
    weights = np.round(rng.uniform(0.5, 5.0, size=n_edges), 3)
    edges = tuple(
        (int(src[i]), chans[i], int(dst[i]), float(times[i]), float(weights[i]), "", "")
        for i in range(n_edges))
    return RowSet(edges=edges, kinds=kinds, registry=TEMPLATE_CHANNELS)


def merge_rows(a: RowSet, b: RowSet) -> RowSet:
    if a.registry != b.registry:
        raise ValueError("row sets use different registries")
    overlap = set(a.kinds) & set(b.kinds)
    if overlap:
        raise ValueError(f"node id collision: {sorted(overlap)[:5]}")
    return RowSet(edges=a.edges + b.edges, kinds={**a.kinds, **b.kinds},
                  registry=a.registry)


@dataclass(frozen=True)
class PlantedInstance:
    template: GraphView
    target: GraphView
    mapping: dict[int, int]
    template_rows: RowSet
    target_rows: RowSet


def planted_instance(rng: np.random.Generator, *, template_nodes: int = 30,
                     template_edges: int = 120, background_nodes: int = 1000,
                     background_edges: int = 20_000, deletion: float = 0.0,
                     jitter: float = 0.0, shuffle_channels: bool = False) -> PlantedInstance:
    """A template plus a target holding a (possibly degraded) disjoint copy of
    it embedded in a random background; the true mapping is returned."""
    template_rows = random_template_rows(rng, template_nodes, template_edges)
    copy_rows = remap_rows(template_rows, COPY_OFFSET)
    if deletion or jitter or shuffle_channels:
        copy_rows = degrade_rows(rng, copy_rows, deletion, jitter, shuffle_channels)
    background = random_background_rows(rng, background_nodes, background_edges)
    target_rows = merge_rows(background, copy_rows)
    return PlantedInstance(
        template=to_view(template_rows),
        target=to_view(target_rows),
        mapping={t: t + COPY_OFFSET for t in template_rows.kinds},
        template_rows=template_rows,
        target_rows=target_rows,
    )


def candidate_suite(rng: np.random.Generator, template_nodes: int = 20,
                    template_edges: int = 120):
    """Template plus five candidates, strongest to weakest: exact copy,
    20%-deleted copy, 50%-deleted copy, channel-shuffled copy, unrelated
    random graph."""
    template_rows = random_template_rows(rng, template_nodes, template_edges,
                                         bundle_edges=4)
    copy_rows = remap_rows(template_rows, COPY_OFFSET)
    exact = copy_rows
    noisy20 = degrade_rows(rng, copy_rows, deletion=0.2)
    noisy50 = degrade_rows(rng, copy_rows, deletion=0.5)
    shuffled = degrade_rows(rng, copy_rows, shuffle_channels=True)

    # unrelated: same channel alphabet but its own rhythm, no planted motif
    n = template_nodes
    kinds = _sample_kinds(rng, range(COPY_OFFSET, COPY_OFFSET + n))
    edges = []
    for _ in range(template_edges):
        u, v = rng.integers(0, n, size=2)
        if u == v:
            v = (v + 1) % n
        ch = RARE_CHANNEL if rng.random() < 0.08 else \
            COMMON_CHANNELS[rng.integers(0, len(COMMON_CHANNELS))]
        edges.append((COPY_OFFSET + int(u), ch, COPY_OFFSET + int(v),
                      _rand_time(rng, 90 * DAY), _rand_weight(rng), "", ""))
    unrelated = RowSet(edges=tuple(edges), kinds=kinds, registry=TEMPLATE_CHANNELS)

    return to_view(template_rows), [to_view(r) for r in (exact, noisy20, noisy50,
                                                         shuffled, unrelated)]


def small_instance(rng: np.random.Generator, exact_copy: bool,
                   max_template: int = 6, max_target: int = 12):
    """Tiny instances for exhaustive-oracle comparisons."""
    n_t = int(rng.integers(3, max_template + 1))
    ids = list(range(n_t))
    kinds = _sample_kinds(rng, ids, ensure_persons=2, ensure_item=False)
    channels = ("email", "phone", "procurement")
    edges: list[Row] = []
    order = list(rng.permutation(n_t))
    for i in range(1, n_t):
        j = order[int(rng.integers(0, i))]
        ch = channels[rng.integers(0, len(channels))]
        edges.append((order[i], ch, j, _rand_time(rng, 10 * DAY), 1.0, "", ""))
    for _ in range(int(rng.integers(0, n_t + 1))):
        u, v = rng.integers(0, n_t, size=2)
        if u == v:
            continue
        ch = channels[rng.integers(0, len(channels))]
        edges.append((int(u), ch, int(v), _rand_time(rng, 10 * DAY), 1.0, "", ""))
    template_rows = RowSet(edges=tuple(edges), kinds=kinds, registry=channels)

    if exact_copy:
        copy_rows = remap_rows(template_rows, 100)
        n_extra = int(rng.integers(0, max_target - n_t + 1))
        extra_ids = list(range(200, 200 + n_extra))
        extra_kinds = _sample_kinds(rng, extra_ids, ensure_persons=0, ensure_item=False) \
            if extra_ids else {}
        extra_edges: list[Row] = []
        for _ in range(n_extra):
            if len(extra_ids) < 2:
                break
            u, v = rng.choice(extra_ids, size=2, replace=False)
            ch = channels[rng.integers(0, len(channels))]
            extra_edges.append((int(u), ch, int(v), _rand_time(rng, 10 * DAY), 1.0, "", ""))
        target_rows = merge_rows(copy_rows, RowSet(edges=tuple(extra_edges),
                                                   kinds=extra_kinds, registry=channels))
        mapping = {t: t + 100 for t in template_rows.kinds}
    else:
        n_g = int(rng.integers(n_t, max_target + 1))
        g_ids = list(range(100, 100 + n_g))
        g_kinds = _sample_kinds(rng, g_ids, ensure_persons=2, ensure_item=False)
        g_edges: list[Row] = []
        for _ in range(2 * n_g):
            u, v = rng.choice(g_ids, size=2, replace=False)
            ch = channels[rng.integers(0, len(channels))]
            g_edges.append((int(u), ch, int(v), _rand_time(rng, 10 * DAY), 1.0, "", ""))
        target_rows = RowSet(edges=tuple(g_edges), kinds=g_kinds, registry=channels)
        mapping = None

    return to_view(template_rows), to_view(target_rows), mapping


def scale_edges_csv(rng: np.random.Generator, n_nodes: int = 100_000,
                    n_edges: int = 1_000_000) -> str:
    """A large uniform-random edge CSV for load/lookup smoke tests."""
    src = rng.integers(0, n_nodes, size=n_edges)
    dst = rng.integers(0, n_nodes, size=n_edges)
    dst = np.where(dst == src, (dst + 1) % n_nodes, dst)
    chan = rng.integers(0, len(TEMPLATE_CHANNELS), size=n_edges)
    t = rng.integers(0, 10**9, size=n_edges)
    lines = [",".join(EDGES_HEADER)]
    names = TEMPLATE_CHANNELS
    lines.extend(
        f"{src[i]},{names[chan[i]]},{dst[i]},{t[i]},1,,"
        for i in range(n_edges))
    lines.append("")
    return "\n".join(lines)
