"""Edge-bundle similarity: the kernel that scores a template pair against a
candidate target pair, and its aggregation over a whole node mapping.

A bundle is summarized by a profile: per (channel, direction) counts and
weight sums, plus the sorted effective times.  Similarity is a convex
combination of three bounded components:

* presence  - Jaccard overlap of the (channel, direction) key sets
* count     - sum of per-key min counts over sum of per-key max counts
* temporal  - best cosine between the binned time histograms over an
              offset grid (shared origin at the earliest time)

Both-empty sides score 1 on every component so identity holds universally;
one empty side scores 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels
from .core import EdgeBundle, GraphView, edge_bundle, kinds_compatible
from .errors import EmptyMapping, KindMismatch, NotInjective

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class SimilarityConfig:
    w_presence: float = 0.3
    w_count: float = 0.3
    w_temporal: float = 0.4
    bin_width: float = 86400.0
    offset_range: float = 0.0
    offset_step: float | None = None
    accept_threshold: float = 0.6
    tie_epsilon: float = 1e-9
    ignore_direction: bool = False
    use_weights: bool = False

    def __post_init__(self):
        if self.offset_step is None:
            object.__setattr__(self, "offset_step", self.bin_width)
        w = (self.w_presence, self.w_count, self.w_temporal)
        if any(x < 0 for x in w):
            raise ValueError("component weights must be non-negative")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"component weights must sum to 1, got {sum(w)}")
        if self.bin_width <= 0:
            raise ValueError("bin_width must be positive")
        if self.offset_step <= 0:
            raise ValueError("offset_step must be positive")
        if self.offset_range < 0:
            raise ValueError("offset_range must be non-negative")
        if not (0.0 <= self.accept_threshold <= 1.0):
            raise ValueError("accept_threshold must lie in [0, 1]")
        if self.tie_epsilon < 0:
            raise ValueError("tie_epsilon must be non-negative")

    def to_dict(self) -> dict:
        return {
            "w_presence": self.w_presence,
            "w_count": self.w_count,
            "w_temporal": self.w_temporal,
            "bin_width": self.bin_width,
            "offset_range": self.offset_range,
            "offset_step": self.offset_step,
            "accept_threshold": self.accept_threshold,
            "tie_epsilon": self.tie_epsilon,
            "ignore_direction": self.ignore_direction,
            "use_weights": self.use_weights,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimilarityConfig":
        return cls(**{k: d[k] for k in d if k in cls.__dataclass_fields__})


@dataclass(frozen=True)
class SimilarityScore:
    total: float
    presence: float
    count: float
    temporal: float

    def to_dict(self) -> dict:
        return {"total": self.total, "presence": self.presence,
                "count": self.count, "temporal": self.temporal}


@dataclass(frozen=True)
class BundleProfile:
    """(channel, direction) -> (count, weight sum), plus sorted effective times."""

    per_key: dict[tuple[str, str], tuple[int, float]]
    times: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def size(self) -> int:
        return sum(c for c, _ in self.per_key.values())

    def to_dict(self) -> dict:
        return {
            "keys": [
                {"channel": ch, "direction": d, "count": c, "weight_sum": w}
                for (ch, d), (c, w) in sorted(self.per_key.items())
            ],
            "times": [float(t) for t in self.times],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BundleProfile":
        per_key = {(k["channel"], k["direction"]): (int(k["count"]), float(k["weight_sum"]))
                   for k in d["keys"]}
        return cls(per_key=per_key, times=np.asarray(d["times"], dtype=np.float64))


def profile_of(bundle: EdgeBundle) -> BundleProfile:
    per_key: dict[tuple[str, str], tuple[int, float]] = {}
    for i in range(bundle.size):
        key = (bundle.channels[i], FORWARD if bundle.forward[i] else BACKWARD)
        c, w = per_key.get(key, (0, 0.0))
        per_key[key] = (c + 1, w + float(bundle.weights[i]))
    return BundleProfile(per_key=per_key, times=np.sort(bundle.times))


def _fold_direction(per_key: dict) -> dict:
    folded: dict[tuple[str, str], tuple[int, float]] = {}
    for (ch, _), (c, w) in per_key.items():
        c0, w0 = folded.get((ch, "any"), (0, 0.0))
        folded[(ch, "any")] = (c0 + c, w0 + w)
    return folded


def _offset_grid(cfg: SimilarityConfig) -> np.ndarray:
    """Offsets ordered by (|delta|, delta), so a first strict max wins ties."""
    n = int(math.floor(cfg.offset_range / cfg.offset_step + 1e-9))
    deltas = [0.0]
    for k in range(1, n + 1):
        deltas.append(-k * cfg.offset_step)
        deltas.append(k * cfg.offset_step)
    return np.asarray(deltas, dtype=np.float64)


def temporal_similarity(times1: np.ndarray, times2: np.ndarray,
                        cfg: SimilarityConfig) -> float:
    if len(times1) == 0 and len(times2) == 0:
        return 1.0
    if len(times1) == 0 or len(times2) == 0:
        return 0.0
    _, cos = _kernels.offset_sweep(
        np.ascontiguousarray(times1, dtype=np.float64),
        np.ascontiguousarray(times2, dtype=np.float64),
        cfg.bin_width, _offset_grid(cfg))
    return float(cos)


def best_offset(times1, times2, cfg: SimilarityConfig) -> tuple[float, float]:
    """Grid offset maximizing the binned cosine between the two time sets.

    Ties resolve toward the smallest |delta|, then the smallest delta.  With
    one empty side the cosine is 0; with both empty it is 1 (nothing to align).
    """
    t1 = np.sort(np.asarray(times1, dtype=np.float64))
    t2 = np.sort(np.asarray(times2, dtype=np.float64))
    if len(t1) == 0 and len(t2) == 0:
        return 0.0, 1.0
    if len(t1) == 0 or len(t2) == 0:
        return 0.0, 0.0
    grid = _offset_grid(cfg)
    pos, cos = _kernels.offset_sweep(t1, t2, cfg.bin_width, grid)
    return float(grid[pos]), float(cos)


def profile_similarity(p1: BundleProfile, p2: BundleProfile,
                       cfg: SimilarityConfig) -> SimilarityScore:
    per1 = _fold_direction(p1.per_key) if cfg.ignore_direction else p1.per_key
    per2 = _fold_direction(p2.per_key) if cfg.ignore_direction else p2.per_key

    k1 = set(per1)
    k2 = set(per2)
    if not k1 and not k2:
        presence = 1.0
        count = 1.0
    else:
        presence = len(k1 & k2) / len(k1 | k2)
        num = 0.0
        den = 0.0
        for key in k1 | k2:
            if cfg.use_weights:
                # weight magnitudes stand in for counts; sign carries no meaning
                a = abs(per1.get(key, (0, 0.0))[1])
                b = abs(per2.get(key, (0, 0.0))[1])
            else:
                a = per1.get(key, (0, 0.0))[0]
                b = per2.get(key, (0, 0.0))[0]
            num += min(a, b)
            den += max(a, b)
        count = num / den if den > 0 else 1.0

    temporal = temporal_similarity(p1.times, p2.times, cfg)
    return combine(presence, count, temporal, cfg)


def combine(presence: float, count: float, temporal: float,
            cfg: SimilarityConfig) -> SimilarityScore:
    total = cfg.w_presence * presence + cfg.w_count * count + cfg.w_temporal * temporal
    return SimilarityScore(total=total, presence=presence, count=count, temporal=temporal)


def bundle_similarity(b1: EdgeBundle, b2: EdgeBundle,
                      cfg: SimilarityConfig | None = None) -> SimilarityScore:
    """Score two bundles; directions are read relative to each bundle's anchor."""
    cfg = cfg or SimilarityConfig()
    return profile_similarity(profile_of(b1), profile_of(b2), cfg)


def mapping_score(template: GraphView, target: GraphView,
                  mapping: dict[int, int], cfg: SimilarityConfig | None = None) -> float:
    """Mean bundle similarity over template pairs covered by the mapping.

    Pairs whose template bundle is empty carry no expectation and are
    skipped; a mapping with no scorable pair scores 0.
    """
    cfg = cfg or SimilarityConfig()
    if len(mapping) < 2:
        raise EmptyMapping("mapping must cover at least two template nodes")
    values = list(mapping.values())
    if len(set(values)) != len(values):
        raise NotInjective("mapping assigns one target node twice")
    for t, b in mapping.items():
        kt = template.graph.kind_of(t)
        kb = target.graph.kind_of(b)
        if not kinds_compatible(kt, kb):
            raise KindMismatch(f"{t} ({kt.value}) cannot map to {b} ({kb.value})")

    sims: list[float] = []
    for a, b in combinations(sorted(mapping), 2):
        tb = edge_bundle(template, a, b)
        if tb.size == 0:
            continue
        gb = edge_bundle(target, mapping[a], mapping[b])
        sims.append(bundle_similarity(tb, gb, cfg).total)
    if not sims:
        return 0.0
    return sum(sims) / len(sims)
