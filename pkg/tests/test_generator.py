from collections import defaultdict

import numpy as np

from tgmatch.core import edge_bundle, load_graph
from tgmatch.generator import (
    RARE_CHANNEL,
    candidate_suite,
    degrade_rows,
    planted_instance,
    random_template_rows,
    remap_rows,
    scale_edges_csv,
)


def test_template_shape():
    rng = np.random.default_rng(1)
    rows = random_template_rows(rng)
    assert len(rows.edges) == 120
    assert len(rows.kinds) == 30
    rare = [r for r in rows.edges if r[1] == RARE_CHANNEL]
    assert len(rare) == 14
    pairs = {tuple(sorted((r[0], r[2]))) for r in rare}
    assert len(pairs) == 1  # the motif is the only procurement pair


def test_template_connected():
    rng = np.random.default_rng(2)
    rows = random_template_rows(rng)
    adj = defaultdict(set)
    for s, _, d, *_ in rows.edges:
        adj[s].add(d)
        adj[d].add(s)
    seen = {0}
    stack = [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    assert seen == set(range(30))


def test_planted_instance_copy_is_exact():
    rng = np.random.default_rng(3)
    inst = planted_instance(rng, background_nodes=80, background_edges=500)
    # every template bundle appears identically under the mapping
    tv = inst.template
    gv = inst.target
    for a in (0, 1, 2):
        for b in (3, 5, 9):
            tb = edge_bundle(tv, a, b)
            gb = edge_bundle(gv, inst.mapping[a], inst.mapping[b])
            assert tb.size == gb.size
            assert sorted(tb.channels) == sorted(gb.channels)
            assert sorted(tb.times.tolist()) == sorted(gb.times.tolist())


def test_planted_copy_is_disjoint_from_background():
    rng = np.random.default_rng(4)
    inst = planted_instance(rng, background_nodes=60, background_edges=300)
    copy_nodes = set(inst.mapping.values())
    g = inst.target.graph
    for e in range(g.n_edges):
        u, v = int(g.src[e]), int(g.dst[e])
        assert (u in copy_nodes) == (v in copy_nodes)


def test_degrade_deletion_fraction():
    rng = np.random.default_rng(5)
    rows = random_template_rows(rng)
    thinned = degrade_rows(np.random.default_rng(6), rows, deletion=0.5)
    assert 30 <= len(thinned.edges) <= 90


def test_degrade_shuffle_keeps_structure():
    rng = np.random.default_rng(7)
    rows = random_template_rows(rng)
    shuffled = degrade_rows(np.random.default_rng(8), rows, shuffle_channels=True)
    assert len(shuffled.edges) == len(rows.edges)
    assert [(r[0], r[2], r[3]) for r in shuffled.edges] == \
        [(r[0], r[2], r[3]) for r in rows.edges]


def test_remap_offsets_ids():
    rng = np.random.default_rng(9)
    rows = random_template_rows(rng)
    moved = remap_rows(rows, 1000)
    assert sorted(moved.kinds) == [n + 1000 for n in sorted(rows.kinds)]


def test_candidate_suite_shapes():
    rng = np.random.default_rng(10)
    template, cands = candidate_suite(rng)
    assert len(cands) == 5
    assert template.graph.n_nodes == 20
    assert cands[0].graph.n_edges == template.graph.n_edges


def test_scale_csv_loads():
    rng = np.random.default_rng(11)
    text = scale_edges_csv(rng, n_nodes=500, n_edges=2000)
    g = load_graph(text)
    assert g.n_edges == 2000
