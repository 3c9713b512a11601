"""Iterative seed-and-expand matching between a template view and a target view.

A session tracks the matched set S, the unmatched set T, the injective
kind-preserving mapping M, the permanently rejected pairs, and an
append-only decision log.  Replaying the log from an empty session rebuilds
the exact same state, which is what export/import and service restarts rely
on.  Proposals score a frontier node against candidate target nodes by the
mean bundle similarity over all of the frontier's matched anchors.
"""

from __future__ import annotations

import time as _time
import uuid
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

from .core import GraphView, NodeKind, adjacent, edge_bundle, kinds_compatible, stats
from .errors import (
    AlreadyMatched,
    EmptyMapping,
    KindMismatch,
    NotInjective,
    NoVisibleEdges,
    TargetTaken,
    UnknownPair,
)
from .similarity import (
    BundleProfile,
    SimilarityConfig,
    SimilarityScore,
    combine,
    mapping_score,
    profile_of,
    profile_similarity,
)

ACCEPT = "accept"
REJECT = "reject"

STATUS_ACTIVE = "active"
STATUS_COMPLETE = "complete"
STATUS_EXHAUSTED = "exhausted"
STATUS_ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class SeedSignature:
    """A small rare motif of the template used to anchor seed search."""

    nodes: tuple[int, ...]
    kinds: tuple[NodeKind, ...]
    required: dict[tuple[int, int], BundleProfile]  # index pairs i < j

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "kinds": [k.value for k in self.kinds],
            "required": {f"{i},{j}": p.to_dict() for (i, j), p in sorted(self.required.items())},
        }


@dataclass(frozen=True)
class SeedCandidate:
    mapping: dict[int, int]
    score: float
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class Decision:
    template_node: int
    target_node: int
    verdict: str
    actor: str
    at: float
    score: float

    def to_dict(self) -> dict:
        return {
            "template_node": self.template_node,
            "target_node": self.target_node,
            "verdict": self.verdict,
            "actor": self.actor,
            "at": self.at,
            "score": self.score,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Decision":
        return cls(int(d["template_node"]), int(d["target_node"]),
                   d["verdict"], d["actor"], float(d["at"]), float(d["score"]))


@dataclass(frozen=True)
class Snippet:
    """A small node-link extract used as decision evidence."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, str, float, float], ...]  # (src, dst, channel, t_eff, weight)

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [{"source": s, "target": t, "channel": c, "time": at, "weight": w}
                      for s, t, c, at, w in self.edges],
        }


@dataclass(frozen=True)
class CandidatePair:
    frontier: int
    anchors: tuple[int, ...]
    candidate: int
    score: SimilarityScore
    evidence_template: Snippet | None = None
    evidence_target: Snippet | None = None

    def to_dict(self) -> dict:
        return {
            "frontier": self.frontier,
            "anchors": list(self.anchors),
            "candidate": self.candidate,
            "score": self.score.to_dict(),
            "evidence": {
                "template": self.evidence_template.to_dict() if self.evidence_template else None,
                "target": self.evidence_target.to_dict() if self.evidence_target else None,
            },
        }


@dataclass
class MatchSession:
    session_id: str
    template: GraphView
    target: GraphView
    cfg: SimilarityConfig
    S: set[int] = field(default_factory=set)
    T: set[int] = field(default_factory=set)
    mapping: dict[int, int] = field(default_factory=dict)
    rejected: set[tuple[int, int]] = field(default_factory=set)
    log: list[Decision] = field(default_factory=list)
    status: str = STATUS_ACTIVE
    seed: dict[int, int] = field(default_factory=dict)

    # caches; template/target views never change over a session's lifetime
    _tpl_adj: dict[int, frozenset[int]] = field(default_factory=dict, repr=False)
    _tgt_adj: dict[int, frozenset[int]] = field(default_factory=dict, repr=False)
    _tpl_profiles: dict[tuple[int, int], BundleProfile] = field(default_factory=dict, repr=False)
    _tgt_profiles: dict[tuple[int, int], BundleProfile] = field(default_factory=dict, repr=False)
    _pair_sims: dict[tuple[int, int, int], SimilarityScore] = field(default_factory=dict, repr=False)

    @property
    def image(self) -> set[int]:
        return set(self.mapping.values())

    def template_adjacent(self, node: int) -> frozenset[int]:
        got = self._tpl_adj.get(node)
        if got is None:
            got = frozenset(adjacent(self.template, node))
            self._tpl_adj[node] = got
        return got

    def target_adjacent(self, node: int) -> frozenset[int]:
        got = self._tgt_adj.get(node)
        if got is None:
            got = frozenset(adjacent(self.target, node))
            self._tgt_adj[node] = got
        return got

    def template_profile(self, a: int, b: int) -> BundleProfile:
        got = self._tpl_profiles.get((a, b))
        if got is None:
            got = profile_of(edge_bundle(self.template, a, b))
            self._tpl_profiles[(a, b)] = got
        return got

    def target_profile(self, u: int, v: int) -> BundleProfile:
        got = self._tgt_profiles.get((u, v))
        if got is None:
            got = profile_of(edge_bundle(self.target, u, v))
            self._tgt_profiles[(u, v)] = got
        return got

    def anchor_similarity(self, anchor: int, frontier: int, candidate: int) -> SimilarityScore:
        """bundle_similarity(E<anchor, frontier>, E<M(anchor), candidate>), cached.

        Safe to cache because M(anchor) never changes once anchor is matched.
        """
        key = (anchor, frontier, candidate)
        got = self._pair_sims.get(key)
        if got is None:
            got = profile_similarity(
                self.template_profile(anchor, frontier),
                self.target_profile(self.mapping[anchor], candidate),
                self.cfg)
            self._pair_sims[key] = got
        return got


# ---------------------------------------------------------------------------
# seed derivation and search

def derive_seed_signature(template: GraphView) -> SeedSignature:
    """Pick the rarest-channel node pair plus up to two shared non-Person
    neighbors, and record the bundle profiles among them."""
    st = stats(template)
    if st.visible_edges == 0:
        raise NoVisibleEdges("template view has no visible edges")
    g = template.graph

    pair = None
    for channel in sorted(st.channel_counts, key=lambda c: (st.channel_counts[c], c)):
        eids = g.channel_edges(channel)
        eids = eids[template.subset_visible(eids)]
        pairs = {(int(min(u, v)), int(max(u, v)))
                 for u, v in zip(g.src[eids], g.dst[eids]) if u != v}
        if pairs:
            pair = min(pairs)
            break
    if pair is None:
        raise NoVisibleEdges("template has no visible edge between distinct nodes")

    a, b = pair
    shared = sorted(
        n for n in set(adjacent(template, a)) & set(adjacent(template, b))
        if n not in pair and g.kind_of(n) != NodeKind.Person)
    nodes = (a, b, *shared[:2])
    required: dict[tuple[int, int], BundleProfile] = {}
    for i, j in combinations(range(len(nodes)), 2):
        bundle = edge_bundle(template, nodes[i], nodes[j])
        if bundle.size:
            required[(i, j)] = profile_of(bundle)
    return SeedSignature(nodes=nodes,
                         kinds=tuple(g.kind_of(n) for n in nodes),
                         required=required)


def find_seeds(target: GraphView, sig: SeedSignature, cfg: SimilarityConfig | None = None,
               limit: int = 5) -> list[SeedCandidate]:
    """Enumerate kind-compatible target tuples with non-empty bundles on every
    required pair, ranked by mean bundle similarity.

    The search walks only edges of the signature's channels through the
    per-channel index; it never scans all node pairs.
    """
    cfg = cfg or SimilarityConfig()
    if limit < 1:
        raise ValueError("limit must be at least 1")
    anchor_profile = sig.required.get((0, 1))
    if anchor_profile is None:
        return []
    g = target.graph

    def compatible(slot: int, node: int) -> bool:
        return kinds_compatible(sig.kinds[slot], g.kind_of(node))

    # candidate (x, y) assignments for the signature's anchor pair
    channels = sorted({ch for ch, _ in anchor_profile.per_key})
    ordered_pairs: set[tuple[int, int]] = set()
    for channel in channels:
        if channel not in g.registry:
            continue
        eids = g.channel_edges(channel)
        eids = eids[target.subset_visible(eids)]
        for u, v in zip(g.src[eids], g.dst[eids]):
            u, v = int(u), int(v)
            if u == v:
                continue
            ordered_pairs.add((u, v))
            ordered_pairs.add((v, u))

    profiles: dict[tuple[int, int], BundleProfile] = {}

    def target_profile(u: int, v: int) -> BundleProfile:
        got = profiles.get((u, v))
        if got is None:
            got = profile_of(edge_bundle(target, u, v))
            profiles[(u, v)] = got
        return got

    extra_slots = list(range(2, len(sig.nodes)))
    results: list[SeedCandidate] = []
    for x, y in sorted(ordered_pairs):
        if not (compatible(0, x) and compatible(1, y)):
            continue
        if extra_slots:
            pool = sorted(n for n in set(target_adjacent_ids(target, x))
                          & set(target_adjacent_ids(target, y))
                          if n not in (x, y))
            fillings = [
                assign for assign in permutations(pool, len(extra_slots))
                if all(compatible(slot, n) for slot, n in zip(extra_slots, assign))
            ]
        else:
            fillings = [()]
        for filling in fillings:
            assignment = (x, y, *filling)
            sims = []
            ok = True
            for (i, j), req in sig.required.items():
                prof = target_profile(assignment[i], assignment[j])
                if prof.size == 0:
                    ok = False
                    break
                sims.append(profile_similarity(req, prof, cfg).total)
            if not ok:
                continue
            score = sum(sims) / len(sims)
            results.append(SeedCandidate(
                mapping={sig.nodes[k]: assignment[k] for k in range(len(assignment))},
                score=score,
                assignment=assignment))

    results.sort(key=lambda r: (-r.score, r.assignment))
    return results[:limit]


_adj_cache_key = "__tgmatch_adj_ids"


def target_adjacent_ids(view: GraphView, node: int) -> frozenset[int]:
    cache = view.__dict__.setdefault(_adj_cache_key, {})
    got = cache.get(node)
    if got is None:
        got = frozenset(adjacent(view, node))
        cache[node] = got
    return got


# ---------------------------------------------------------------------------
# session lifecycle

def _bare_session(template: GraphView, target: GraphView, cfg: SimilarityConfig,
                  session_id: str | None) -> MatchSession:
    return MatchSession(
        session_id=session_id or uuid.uuid4().hex,
        template=template,
        target=target,
        cfg=cfg,
        T=set(int(n) for n in template.graph.node_ids),
    )


def _validate_decision(session: MatchSession, t: int, b: int, verdict: str) -> None:
    if not session.template.graph.has_node(t) or not session.target.graph.has_node(b):
        raise UnknownPair(f"({t}, {b}) is not a template/target node pair")
    if t in session.S:
        raise AlreadyMatched(f"template node {t} is already matched")
    if verdict == ACCEPT:
        if b in session.image:
            raise TargetTaken(f"target node {b} is already the image of another node")
        kt = session.template.graph.kind_of(t)
        kb = session.target.graph.kind_of(b)
        if not kinds_compatible(kt, kb):
            raise KindMismatch(f"{t} ({kt.value}) cannot map to {b} ({kb.value})")
    elif verdict != REJECT:
        raise ValueError(f"unknown verdict {verdict!r}")


def _apply_decision(session: MatchSession, decision: Decision) -> None:
    t, b = decision.template_node, decision.target_node
    if decision.verdict == ACCEPT:
        session.mapping[t] = b
        session.T.discard(t)
        session.S.add(t)
        session.rejected.discard((t, b))
    else:
        session.rejected.add((t, b))
    session.log.append(decision)


def init_session(template: GraphView, target: GraphView, seed: dict[int, int],
                 cfg: SimilarityConfig | None = None,
                 session_id: str | None = None) -> MatchSession:
    """Start a session from a seed assignment; each seed pair is logged as a
    synthetic user accept."""
    cfg = cfg or SimilarityConfig()
    if not seed:
        raise EmptyMapping("seed must map at least one template node")
    if len(set(seed.values())) != len(seed):
        raise NotInjective("seed assigns one target node twice")
    for t in seed:
        template.graph.node_index(t)  # raises UnknownNode
    for b in seed.values():
        target.graph.node_index(b)
    session = _bare_session(template, target, cfg, session_id)
    now = _time.time()
    for t in sorted(seed):
        b = int(seed[t])
        _validate_decision(session, int(t), b, ACCEPT)
        _apply_decision(session, Decision(int(t), b, ACCEPT, "user", now, 1.0))
    session.seed = {int(t): int(b) for t, b in seed.items()}
    return session


def _frontier_score(session: MatchSession, anchors: Sequence[int],
                    frontier: int, candidate: int) -> SimilarityScore:
    comps = [session.anchor_similarity(a, frontier, candidate) for a in anchors]
    n = len(comps)
    presence = sum(c.presence for c in comps) / n
    count = sum(c.count for c in comps) / n
    temporal = sum(c.temporal for c in comps) / n
    return combine(presence, count, temporal, session.cfg)


def _snippet(view: GraphView, nodes: set[int]) -> Snippet:
    g = view.graph
    eids: set[int] = set()
    for n in nodes:
        inc = g.incident_edges(g.node_index(n))
        if len(inc) == 0:
            continue
        inc = inc[view.subset_visible(inc)]
        for e in inc:
            e = int(e)
            if int(g.src[e]) in nodes and int(g.dst[e]) in nodes:
                eids.add(e)
    edges = tuple(
        (int(g.src[e]), int(g.dst[e]), g.registry[g.channel_idx[e]],
         float(g.time[e] + view.config.time_offset), float(g.weight[e]))
        for e in sorted(eids))
    return Snippet(nodes=tuple(sorted(nodes)), edges=edges)


def propose(session: MatchSession, k: int = 1, with_evidence: bool = True) -> list[CandidatePair]:
    """Rank candidate (frontier, target) pairs for the next decision.

    A frontier node is scored against every admissible neighbor of its
    anchors' images; with several anchors the score is the mean over all of
    them.  Ties within ``tie_epsilon`` order by smaller template id, then
    smaller target id.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    image = session.image
    kind_of_t = session.template.graph.kind_of
    kind_of_g = session.target.graph.kind_of
    scored: list[tuple[SimilarityScore, int, int, tuple[int, ...]]] = []
    for frontier in sorted(session.T):
        anchors = sorted(a for a in session.template_adjacent(frontier) if a in session.S)
        if not anchors:
            continue
        kt = kind_of_t(frontier)
        candidates: set[int] = set()
        for a in anchors:
            candidates |= session.target_adjacent(session.mapping[a])
        for beta in sorted(candidates):
            if beta in image:
                continue
            if (frontier, beta) in session.rejected:
                continue
            if not kinds_compatible(kt, kind_of_g(beta)):
                continue
            score = _frontier_score(session, anchors, frontier, beta)
            scored.append((score, frontier, beta, tuple(anchors)))

    eps = session.cfg.tie_epsilon
    if eps > 0:
        scored.sort(key=lambda item: (-round(item[0].total / eps), item[1], item[2]))
    else:
        scored.sort(key=lambda item: (-item[0].total, item[1], item[2]))

    out = []
    for score, frontier, beta, anchors in scored[:k]:
        if with_evidence:
            ev_t = _snippet(session.template, session.S | {frontier})
            ev_g = _snippet(session.target, set(session.mapping.values()) | {beta})
        else:
            ev_t = ev_g = None
        out.append(CandidatePair(frontier=frontier, anchors=anchors, candidate=beta,
                                 score=score, evidence_template=ev_t, evidence_target=ev_g))
    return out


def decide(session: MatchSession, pair: tuple[int, int], verdict: str,
           actor: str = "user") -> MatchSession:
    """Record an accept/reject for a pair and update the session state."""
    t, b = int(pair[0]), int(pair[1])
    _validate_decision(session, t, b, verdict)
    anchors = sorted(a for a in session.template_adjacent(t) if a in session.S)
    score = _frontier_score(session, anchors, t, b).total if anchors else 0.0
    _apply_decision(session, Decision(t, b, verdict, actor, _time.time(), score))
    return session


def run_auto(session: MatchSession, max_iterations: int = 10_000) -> MatchSession:
    """Greedy unattended loop: accept the top proposal when its score clears
    the threshold, otherwise reject it and continue.

    Stops with status ``complete`` (T empty), ``exhausted`` (no proposal
    survives the filters), or ``iteration_cap``.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    tau = session.cfg.accept_threshold
    iterations = 0
    while True:
        if not session.T:
            session.status = STATUS_COMPLETE
            break
        if iterations >= max_iterations:
            session.status = STATUS_ITERATION_CAP
            break
        top = propose(session, 1, with_evidence=False)
        if not top:
            session.status = STATUS_EXHAUSTED
            break
        cand = top[0]
        verdict = ACCEPT if cand.score.total >= tau else REJECT
        decide(session, (cand.frontier, cand.candidate), verdict, actor="auto")
        iterations += 1
    return session


# ---------------------------------------------------------------------------
# export / import

EXPORT_FORMAT = "tgmatch-session/1"


def export_session(session: MatchSession) -> dict:
    """Serializable document: seed, config, and the full decision log."""
    return {
        "format": EXPORT_FORMAT,
        "session_id": session.session_id,
        "config": session.cfg.to_dict(),
        "seed": {str(t): b for t, b in sorted(session.seed.items())},
        "status": session.status,
        "decisions": [d.to_dict() for d in session.log],
    }


def import_session(template: GraphView, target: GraphView, doc: dict) -> MatchSession:
    """Rebuild a session by replaying its exported decision log."""
    if doc.get("format") != EXPORT_FORMAT:
        raise ValueError(f"unsupported session document format {doc.get('format')!r}")
    cfg = SimilarityConfig.from_dict(doc["config"])
    session = _bare_session(template, target, cfg, doc["session_id"])
    for entry in doc["decisions"]:
        decision = Decision.from_dict(entry)
        _validate_decision(session, decision.template_node, decision.target_node,
                           decision.verdict)
        _apply_decision(session, decision)
    session.seed = {int(t): int(b) for t, b in doc.get("seed", {}).items()}
    session.status = doc.get("status", STATUS_ACTIVE)
    return session


def state_summary(session: MatchSession) -> str:
    """Canonical JSON of the session state; used for durability comparisons."""
    import json

    return json.dumps({
        "session_id": session.session_id,
        "S": sorted(session.S),
        "T": sorted(session.T),
        "mapping": {str(t): session.mapping[t] for t in sorted(session.mapping)},
        "rejected": sorted(session.rejected),
        "status": session.status,
        "log": [d.to_dict() for d in session.log],
    }, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# whole-candidate ranking

@dataclass(frozen=True)
class RankedCandidate:
    index: int
    score: float
    mapping: dict[int, int]
    status: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "score": self.score,
            "mapping": {str(t): b for t, b in sorted(self.mapping.items())},
            "status": self.status,
        }


def rank_candidates(template: GraphView, candidates: Sequence[GraphView],
                    cfg: SimilarityConfig | None = None) -> list[RankedCandidate]:
    """Score each candidate by auto-matching from its best seed; the final
    score is mapping_score scaled by template coverage |S| / |N_template|."""
    cfg = cfg or SimilarityConfig()
    if not candidates:
        raise ValueError("at least one candidate is required")
    sig = derive_seed_signature(template)
    n_template = template.graph.n_nodes
    results: list[RankedCandidate] = []
    for i, cand in enumerate(candidates):
        seeds = find_seeds(cand, sig, cfg, limit=1)
        if not seeds:
            results.append(RankedCandidate(index=i, score=0.0, mapping={}, status="no_seed"))
            continue
        session = init_session(template, cand, seeds[0].mapping, cfg)
        cap = n_template * max(cand.graph.n_nodes, 1) + n_template + 1
        run_auto(session, cap)
        base = mapping_score(template, cand, session.mapping, cfg)
        coverage = len(session.S) / n_template
        results.append(RankedCandidate(index=i, score=base * coverage,
                                       mapping=dict(session.mapping), status=session.status))
    results.sort(key=lambda r: (-r.score, r.index))
    return results
