import numpy as np
import pytest

from tgmatch.core import edge_bundle, full_view, load_graph
from tgmatch.errors import EmptyMapping, KindMismatch, NotInjective
from tgmatch.similarity import (
    BundleProfile,
    SimilarityConfig,
    best_offset,
    bundle_similarity,
    mapping_score,
    profile_of,
    profile_similarity,
)

CFG100 = SimilarityConfig(bin_width=100.0)


def profile(keys, times=()):
    return BundleProfile(per_key=dict(keys), times=np.sort(np.asarray(times, dtype=float)))


# -- profiles ------------------------------------------------------------------

def test_profile_of_fixture(fixture_view):
    p = profile_of(edge_bundle(fixture_view, 1, 2))
    assert p.per_key == {("email", "forward"): (2, 2.0)}
    assert p.times.tolist() == [100.0, 200.0]


def test_profile_of_empty(fixture_view):
    p = profile_of(edge_bundle(fixture_view, 1, 3))
    assert p.per_key == {}
    assert p.times.size == 0


def test_profile_orientation_flip(fixture_view):
    p = profile_of(edge_bundle(fixture_view, 2, 1))
    assert p.per_key == {("email", "backward"): (2, 2.0)}


def test_profile_roundtrip(fixture_view):
    p = profile_of(edge_bundle(fixture_view, 1, 2))
    assert BundleProfile.from_dict(p.to_dict()).per_key == p.per_key


# -- bundle similarity -----------------------------------------------------------

def test_identical_bundles_score_one(fixture_view):
    b = edge_bundle(fixture_view, 1, 2)
    s = bundle_similarity(b, b, CFG100)
    assert s.total == 1.0
    assert (s.presence, s.count, s.temporal) == (1.0, 1.0, 1.0)


def test_hand_checked_fixture_value(fixture_view, thinned_view):
    s = bundle_similarity(edge_bundle(fixture_view, 1, 2),
                          edge_bundle(thinned_view, 1, 2), CFG100)
    assert s.presence == 1.0
    assert s.count == 0.5
    assert s.temporal == pytest.approx(0.70711, abs=1e-5)
    assert s.total == pytest.approx(0.73284, abs=1e-5)


def test_disjoint_keys_equal_times():
    p1 = profile({("phone", "forward"): (1, 1.0)}, [50.0])
    p2 = profile({("email", "forward"): (1, 1.0)}, [50.0])
    s = profile_similarity(p1, p2, SimilarityConfig())
    assert (s.presence, s.count, s.temporal) == (0.0, 0.0, 1.0)
    assert s.total == pytest.approx(0.4)


def test_empty_rules():
    empty = profile({})
    s = profile_similarity(empty, empty, CFG100)
    assert s.total == 1.0
    one = profile({("email", "forward"): (1, 1.0)}, [5.0])
    s = profile_similarity(one, empty, CFG100)
    assert s.total == 0.0


def test_score_invariant_total_combination():
    cfg = SimilarityConfig(w_presence=0.2, w_count=0.5, w_temporal=0.3, bin_width=10)
    p1 = profile({("email", "forward"): (3, 3.0)}, [0.0, 5.0, 20.0])
    p2 = profile({("email", "forward"): (1, 1.0), ("phone", "backward"): (1, 2.0)}, [0.0])
    s = profile_similarity(p1, p2, cfg)
    assert s.total == pytest.approx(
        cfg.w_presence * s.presence + cfg.w_count * s.count + cfg.w_temporal * s.temporal,
        abs=1e-15)


def test_ignore_direction_folds_keys():
    p1 = profile({("email", "forward"): (2, 2.0)}, [0.0, 1.0])
    p2 = profile({("email", "backward"): (2, 2.0)}, [0.0, 1.0])
    strict = profile_similarity(p1, p2, SimilarityConfig(bin_width=10))
    folded = profile_similarity(p1, p2, SimilarityConfig(bin_width=10, ignore_direction=True))
    assert strict.presence == 0.0
    assert folded.presence == 1.0
    assert folded.count == 1.0


def test_use_weights_folds_weight_sums():
    p1 = profile({("email", "forward"): (2, 10.0)}, [0.0])
    p2 = profile({("email", "forward"): (2, 5.0)}, [0.0])
    plain = profile_similarity(p1, p2, SimilarityConfig(bin_width=10))
    weighted = profile_similarity(p1, p2, SimilarityConfig(bin_width=10, use_weights=True))
    assert plain.count == 1.0
    assert weighted.count == 0.5


# -- best offset -----------------------------------------------------------------

def test_best_offset_hand_checked():
    cfg = SimilarityConfig(bin_width=100.0, offset_range=200.0, offset_step=50.0)
    delta, cos = best_offset([100.0, 200.0], [150.0, 250.0], cfg)
    assert delta == -50.0
    assert cos == pytest.approx(1.0, abs=1e-12)


def test_best_offset_identical_sets():
    cfg = SimilarityConfig(bin_width=100.0, offset_range=200.0, offset_step=50.0)
    assert best_offset([5.0, 10.0], [5.0, 10.0], cfg) == (0.0, 1.0)


def test_best_offset_empty_side():
    cfg = SimilarityConfig(bin_width=100.0, offset_range=100.0, offset_step=50.0)
    assert best_offset([], [5.0], cfg) == (0.0, 0.0)
    assert best_offset([], [], cfg) == (0.0, 1.0)


# -- mapping score ----------------------------------------------------------------

def test_mapping_identity_is_one(fixture_view):
    m = {1: 1, 2: 2, 3: 3, 4: 4}
    assert mapping_score(fixture_view, fixture_view, m, CFG100) == 1.0


def test_mapping_onto_disjoint_copy(fixture_view):
    copy_edges = (
        "source,etype,target,time,weight,source_location,target_location\n"
        "11,email,12,100,1,,\n11,email,12,200,1,,\n12,phone,13,150,1,,\n"
        "11,sell,14,300,2,A,B\n13,buy,14,400,5,B,A\n")
    copy_nodes = "node,kind,label\n11,Person,\n12,Person,\n13,Person,\n14,Item,\n"
    copy = full_view(load_graph(copy_edges, copy_nodes))
    m = {1: 11, 2: 12, 3: 13, 4: 14}
    assert mapping_score(fixture_view, copy, m, CFG100) == 1.0


def test_mapping_thinned_hand_value(fixture_view, thinned_view):
    score = mapping_score(fixture_view, thinned_view, {1: 1, 2: 2, 4: 4}, CFG100)
    assert score == pytest.approx(0.86642, abs=1e-4)


def test_mapping_errors(fixture_view):
    with pytest.raises(EmptyMapping):
        mapping_score(fixture_view, fixture_view, {1: 1}, CFG100)
    with pytest.raises(NotInjective):
        mapping_score(fixture_view, fixture_view, {1: 1, 2: 1}, CFG100)
    with pytest.raises(KindMismatch):
        mapping_score(fixture_view, fixture_view, {1: 4, 2: 2}, CFG100)


# -- properties --------------------------------------------------------------------

def _random_profile(rng, max_keys=4, max_count=5):
    channels = ["buy", "email", "phone", "sell"]
    per_key = {}
    for _ in range(rng.integers(0, max_keys + 1)):
        key = (channels[rng.integers(0, 4)], ["forward", "backward"][rng.integers(0, 2)])
        per_key[key] = (int(rng.integers(1, max_count)), float(rng.uniform(0.5, 9)))
    n_times = int(rng.integers(0, 6))
    times = rng.uniform(0, 500, size=n_times)
    return profile(per_key, times)


def test_similarity_range_symmetry_identity_random():
    rng = np.random.default_rng(30)
    cfg = SimilarityConfig(bin_width=50.0, offset_range=100.0, offset_step=50.0)
    for _ in range(200):
        p1 = _random_profile(rng)
        p2 = _random_profile(rng)
        s12 = profile_similarity(p1, p2, cfg)
        s21 = profile_similarity(p2, p1, cfg)
        for s in (s12, s21):
            for value in (s.total, s.presence, s.count, s.temporal):
                assert -1e-12 <= value <= 1.0 + 1e-12
        assert s12.total == pytest.approx(s21.total, abs=1e-9)
        assert profile_similarity(p1, p1, cfg).total == pytest.approx(1.0, abs=1e-12)


def test_count_discrimination():
    base = {("email", "forward"): (3, 3.0), ("phone", "backward"): (2, 2.0)}
    p1 = profile(base, [0.0])
    p2 = profile(base, [0.0])
    assert profile_similarity(p1, p2, SimilarityConfig(bin_width=10)).count == 1.0
    p3 = profile({("email", "forward"): (3, 3.0), ("phone", "backward"): (1, 1.0)}, [0.0])
    assert profile_similarity(p1, p3, SimilarityConfig(bin_width=10)).count < 1.0


def test_temporal_shift_invariance():
    rng = np.random.default_rng(31)
    cfg = SimilarityConfig(bin_width=25.0)
    for _ in range(100):
        t1 = rng.uniform(0, 300, size=rng.integers(1, 5))
        t2 = rng.uniform(0, 300, size=rng.integers(1, 5))
        shift = float(rng.uniform(-1000, 1000))
        p1 = profile({("email", "forward"): (len(t1), 1.0)}, t1)
        p2 = profile({("email", "forward"): (len(t2), 1.0)}, t2)
        q1 = profile({("email", "forward"): (len(t1), 1.0)}, t1 + shift)
        q2 = profile({("email", "forward"): (len(t2), 1.0)}, t2 + shift)
        a = profile_similarity(p1, p2, cfg).temporal
        b = profile_similarity(q1, q2, cfg).temporal
        assert a == pytest.approx(b, abs=1e-9)


def test_weight_degeneracy_timestamps_irrelevant():
    cfg = SimilarityConfig(w_presence=0.5, w_count=0.5, w_temporal=0.0, bin_width=10)
    p1 = profile({("email", "forward"): (2, 2.0)}, [0.0, 1.0])
    p2 = profile({("email", "forward"): (2, 2.0)}, [777.0, 999.0])
    assert profile_similarity(p1, p2, cfg).total == 1.0


# -- config ------------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        SimilarityConfig(w_presence=0.5, w_count=0.5, w_temporal=0.5)
    with pytest.raises(ValueError):
        SimilarityConfig(bin_width=0.0)
    with pytest.raises(ValueError):
        SimilarityConfig(offset_step=-1.0)
    with pytest.raises(ValueError):
        SimilarityConfig(accept_threshold=1.5)


def test_config_roundtrip():
    cfg = SimilarityConfig(offset_range=100.0, accept_threshold=0.7)
    assert SimilarityConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.offset_step == cfg.bin_width
