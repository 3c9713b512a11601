"""Independent reference implementations used to check the engine.

Everything here is deliberately naive: plain python loops over the raw edge
arrays, and exhaustive enumeration for the mapping oracle.  None of it
shares code with the indexed/vectorized paths it verifies.
"""

from itertools import combinations

import numpy as np

from tgmatch.core import GraphView, NodeKind, edge_bundle, kinds_compatible
from tgmatch.similarity import SimilarityConfig, profile_of, profile_similarity


def naive_visible(view: GraphView) -> list[int]:
    """Edge ids satisfying the visibility predicate, checked one by one."""
    g = view.graph
    cfg = view.config
    out = []
    for e in range(g.n_edges):
        channel = g.registry[g.channel_idx[e]]
        if channel not in cfg.enabled_channels:
            continue
        te = g.time[e] + cfg.time_offset
        if cfg.time_range is not None:
            t0, t1 = cfg.time_range
            if not (t0 <= te < t1):
                continue
        out.append(e)
    return out


def naive_adjacent(view: GraphView, node: int) -> dict[int, set[str]]:
    g = view.graph
    out: dict[int, set[str]] = {}
    for e in naive_visible(view):
        u, v = int(g.src[e]), int(g.dst[e])
        if node not in (u, v):
            continue
        other = v if u == node else u
        out.setdefault(other, set()).add(g.registry[g.channel_idx[e]])
    return out


def naive_scatter_count(view: GraphView) -> int:
    g = view.graph
    n = 0
    for e in naive_visible(view):
        for endpoint in (int(g.src[e]), int(g.dst[e])):
            if g.kind_of(endpoint) is NodeKind.Person:
                n += 1
    return n


def naive_spatial_total(view: GraphView) -> int:
    g = view.graph
    n = 0
    for e in naive_visible(view):
        if g.src_loc[e] != "":
            n += 1
        if g.dst_loc[e] != "":
            n += 1
    return n


def best_mapping_score(template: GraphView, target: GraphView,
                       cfg: SimilarityConfig) -> tuple[float, dict[int, int]]:
    """Exhaustive maximum of mapping_score over every injective,
    kind-preserving partial mapping covering at least two template nodes.

    Exponential; only usable on tiny instances.
    """
    tnodes = sorted(int(n) for n in template.graph.node_ids)
    gnodes = sorted(int(n) for n in target.graph.node_ids)

    tpl_profiles = {}
    for a, b in combinations(tnodes, 2):
        bundle = edge_bundle(template, a, b)
        if bundle.size:
            tpl_profiles[(a, b)] = profile_of(bundle)

    tgt_profiles: dict[tuple[int, int], object] = {}

    def sim(a: int, b: int, u: int, v: int) -> float:
        prof = tgt_profiles.get((u, v))
        if prof is None:
            prof = profile_of(edge_bundle(target, u, v))
            tgt_profiles[(u, v)] = prof
        return profile_similarity(tpl_profiles[(a, b)], prof, cfg).total

    options = {
        t: [g for g in gnodes
            if kinds_compatible(template.graph.kind_of(t), target.graph.kind_of(g))]
        for t in tnodes
    }

    best = {"score": -1.0, "mapping": {}}

    def recurse(i: int, assigned: dict[int, int], used: set[int],
                pair_sum: float, pair_count: int):
        if len(assigned) >= 2:
            score = pair_sum / pair_count if pair_count else 0.0
            if score > best["score"]:
                best["score"] = score
                best["mapping"] = dict(assigned)
        if i == len(tnodes):
            return
        t = tnodes[i]
        recurse(i + 1, assigned, used, pair_sum, pair_count)  # leave t unmapped
        for g in options[t]:
            if g in used:
                continue
            add_sum = 0.0
            add_count = 0
            for prev_t, prev_g in assigned.items():
                key = (prev_t, t) if prev_t < t else (t, prev_t)
                if key in tpl_profiles:
                    if prev_t < t:
                        add_sum += sim(prev_t, t, prev_g, g)
                    else:
                        add_sum += sim(t, prev_t, g, prev_g)
                    add_count += 1
            assigned[t] = g
            used.add(g)
            recurse(i + 1, assigned, used, pair_sum + add_sum, pair_count + add_count)
            del assigned[t]
            used.discard(g)

    recurse(0, {}, set(), 0.0, 0)
    return max(best["score"], 0.0), best["mapping"]


def random_rows(rng: np.random.Generator, n_nodes=8, n_edges=25,
                channels=("buy", "email", "phone", "sell"), span=1000.0,
                with_locations=True, with_kinds=True):
    """Arbitrary random row set for property tests (no structure guarantees)."""
    from tgmatch.generator import RowSet

    kind_pool = ("Person", "Person", "Item", "Document", "Unknown")
    kinds = {}
    for n in range(n_nodes):
        kinds[n] = kind_pool[rng.integers(0, len(kind_pool))] if with_kinds else "Unknown"
    edges = []
    for _ in range(n_edges):
        u, v = rng.integers(0, n_nodes, size=2)
        ch = channels[rng.integers(0, len(channels))]
        t = float(rng.uniform(0, span))
        w = float(np.round(rng.uniform(0.1, 9.0), 3))
        sloc = dloc = ""
        if with_locations and rng.random() < 0.3:
            sloc = ["AA", "BB", "CC"][rng.integers(0, 3)]
        if with_locations and rng.random() < 0.3:
            dloc = ["AA", "BB", "CC"][rng.integers(0, 3)]
        edges.append((int(u), ch, int(v), t, w, sloc, dloc))
    return RowSet(edges=tuple(edges), kinds=kinds, registry=tuple(sorted(channels)))
