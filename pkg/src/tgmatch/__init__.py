"""tgmatch: typed temporal multigraph analytics and seed-and-expand matching."""

from .core import (
    DEFAULT_CHANNELS,
    EdgeBundle,
    GraphView,
    NodeKind,
    TemporalMultigraph,
    ViewConfig,
    ViewStats,
    adjacent,
    edge_bundle,
    full_view,
    load_graph,
    stats,
    with_view,
)
from .analytics import (
    HeatmapMatrix,
    Histogram,
    ScatterPoint,
    StructureGraph,
    activity_histogram,
    heatmap,
    heatmap_pairs,
    person_channel_counts,
    person_scatter,
    spatial_distribution,
    structure_projection,
)
from .similarity import (
    BundleProfile,
    SimilarityConfig,
    SimilarityScore,
    best_offset,
    bundle_similarity,
    mapping_score,
    profile_of,
)
from .matcher import (
    CandidatePair,
    Decision,
    MatchSession,
    RankedCandidate,
    SeedSignature,
    decide,
    derive_seed_signature,
    export_session,
    find_seeds,
    import_session,
    init_session,
    propose,
    rank_candidates,
    run_auto,
    state_summary,
)

__version__ = "0.1.0"
