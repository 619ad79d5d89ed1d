from fractions import Fraction as F

import pytest

from wforest.ends import ProxyParams
from wforest.errors import BadProbability, NotAutomorphism, NotWeightPreserving, UnknownEdge
from wforest.forest import fmsf, is_acyclic
from wforest.generators import cycle, free_product, gp_graph, lattice_box, windmill
from wforest.graph import build_graph, components, spanned_subgraph
from wforest.percolation import (
    assign_labels,
    bernoulli_sample,
    cluster_report,
    delete_edge,
    equivariance_check,
    full_config,
    fwmsf,
    insert_edge,
    largest_cluster_fraction,
    records_to_jsonl,
    summary_csv,
    sweep,
)
from wforest.weights import level_potential, unit_potential

from conftest import random_connected_graph, random_potential


def test_bernoulli_degenerate_and_deterministic():
    g = lattice_box(5, 5)
    assert bernoulli_sample(g, 0.0, 7).open_edges == frozenset()
    assert bernoulli_sample(g, 1.0, 7).open_edges == g.edges
    a = bernoulli_sample(g, 0.37, 123)
    b = bernoulli_sample(g, 0.37, 123)
    assert a.open_edges == b.open_edges
    assert bernoulli_sample(g, 0.37, 124).open_edges != a.open_edges
    with pytest.raises(BadProbability):
        bernoulli_sample(g, 1.5, 0)


def test_monotone_coupling():
    g = lattice_box(6, 6)
    grid = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    for seed in range(5):
        opens = [bernoulli_sample(g, p, seed).open_edges for p in grid]
        for lo, hi in zip(opens, opens[1:]):
            assert lo <= hi


def test_insert_delete():
    g = cycle(5)
    cfg = bernoulli_sample(g, 0.0, 1)
    up = insert_edge(cfg, (0, 1))
    assert up.open_edges == frozenset({(0, 1)})
    assert insert_edge(up, (0, 1)).open_edges == up.open_edges
    back = delete_edge(up, (0, 1))
    assert back.open_edges == cfg.open_edges
    assert up.edits == (("insert", (0, 1)),)
    with pytest.raises(UnknownEdge):
        insert_edge(cfg, (0, 2))


def test_delete_cut_edge_splits_cluster():
    g = build_graph(range(4), [(0, 1), (1, 2), (2, 3)])
    cfg = full_config(g)
    before = cluster_report(cfg, unit_potential(g), ProxyParams(), side_counts=False)
    assert before.counts["count"] == 1
    after = cluster_report(delete_edge(cfg, (1, 2)), unit_potential(g),
                           ProxyParams(), side_counts=False)
    assert after.counts["count"] == 2


def test_labels_deterministic_with_collision_fallback():
    g = cycle(6)
    la = assign_labels(g, 99)
    assert la.labels == assign_labels(g, 99).labels
    assert la.collisions == ()
    # planted collision: ranks fall back to canonical edge order
    from wforest.percolation import LabelAssignment
    forced = LabelAssignment(labels={e: 1 for e in g.edges})
    ranks = forced.ranks()
    assert [e for e, _ in sorted(ranks.items(), key=lambda kv: kv[1])] == g.sorted_edges()


def test_fwmsf_open_forest_kept_whole():
    g = lattice_box(4, 4)
    cfg = bernoulli_sample(g, 0.25, 3)
    labels = assign_labels(g, 3)
    r = fwmsf(cfg, unit_potential(g), labels)
    assert r.kept | r.deleted == cfg.open_edges
    assert is_acyclic(g, r.kept)
    sub = spanned_subgraph(g, cfg.open_edges)
    if is_acyclic(g, cfg.open_edges):
        assert r.kept == cfg.open_edges
    # spans every cluster: kept components equal open components
    assert components(spanned_subgraph(g, r.kept)) == components(sub)


def test_fwmsf_equals_fmsf_constant_weight(rand):
    for trial in range(50):
        g = random_connected_graph(rand, rand.randint(3, 10))
        cfg = bernoulli_sample(g, 0.7, trial)
        labels = assign_labels(g, trial + 1000)
        ours = fwmsf(cfg, unit_potential(g), labels)
        sub = spanned_subgraph(g, cfg.open_edges)
        independent = fmsf(sub, {e: labels.labels[e] for e in cfg.open_edges})
        assert ours.kept == independent


def test_fwmsf_per_cluster_restriction(rand):
    g = lattice_box(5, 5)
    pot = unit_potential(g)
    for seed in range(10):
        cfg = bernoulli_sample(g, 0.45, seed)
        labels = assign_labels(g, seed)
        whole = fwmsf(cfg, pot, labels)
        sub = spanned_subgraph(g, cfg.open_edges)
        for comp in components(sub):
            comp_edges = {e for e in cfg.open_edges
                          if e[0] in set(comp) and e[1] in set(comp)}
            cfg_c = full_config(spanned_subgraph(
                build_graph(g.vertices, comp_edges), comp_edges))
            part = fwmsf(cfg_c, pot, labels)
            assert part.kept == {e for e in whole.kept
                                 if e[0] in set(comp) and e[1] in set(comp)}


def test_cluster_report_degenerate():
    g = lattice_box(3, 3)
    pot = unit_potential(g)
    low = cluster_report(bernoulli_sample(g, 0.0, 0), pot, ProxyParams())
    assert low.counts["count"] == 9
    assert all(c.mass == 1 for c in low.clusters)
    high = cluster_report(bernoulli_sample(g, 1.0, 0), pot,
                          ProxyParams(heavy_tau=F(9)))
    assert high.counts["count"] == 1
    assert high.clusters[0].mass == 9
    assert high.clusters[0].cls == "heavy"


def test_cluster_mass_relative_to_heaviest():
    g = gp_graph(2, 1, 2)
    pot = level_potential(g, F(1, 2))
    rep = cluster_report(full_config(g), pot, ProxyParams())
    (c,) = rep.clusters
    top = max(pot[v] for v in g.vertices)
    assert c.mass == sum(pot[v] for v in g.vertices) / top


def test_equivariance_cycle_rotations():
    g = cycle(6)
    pot = unit_potential(g)
    for seed in range(50):
        labels = assign_labels(g, seed)
        rot = {v: (v + 1) % 6 for v in range(6)}
        assert equivariance_check(g, pot, rot, labels)


def test_equivariance_windmill_blade_swap():
    w = windmill(3, 2)
    pot = unit_potential(w)
    sigma = blade_swap(w, 3, 2)
    for seed in range(50):
        assert equivariance_check(w, pot, sigma, assign_labels(w, seed))


def blade_swap(w, blades, radius):
    """Reflection i -> blades-1-i of the hub chain, blades carried along."""
    R = radius
    cells = (R + 1) ** 2 - 1

    def vid(i, a, b):
        if a == 0 and b == 0:
            return i
        return blades + i * cells + (R + 1) * a + b - 1

    sigma = {}
    for i in range(blades):
        j = blades - 1 - i
        for a in range(R + 1):
            for b in range(R + 1):
                sigma[vid(i, a, b)] = vid(j, a, b)
    return sigma


def test_equivariance_identity_trivial(rand):
    g = random_connected_graph(rand, 8)
    sigma = {v: v for v in g.vertices}
    assert equivariance_check(g, random_potential(rand, g), sigma, assign_labels(g, 1))


def test_equivariance_rejects_bad_maps():
    g = cycle(4)
    labels = assign_labels(g, 0)
    with pytest.raises(NotAutomorphism):
        equivariance_check(g, unit_potential(g), {0: 0, 1: 1, 2: 3, 3: 3}, labels)
    path = build_graph(range(3), [(0, 1), (1, 2)])
    with pytest.raises(NotWeightPreserving):
        equivariance_check(path, {0: 1, 1: 2, 2: 3}, {0: 2, 1: 1, 2: 0},
                           assign_labels(path, 0))


def test_sweep_degenerate_grid():
    g = cycle(4)
    recs = sweep(g, unit_potential(g), [0.0, 1.0], 1, 5, ProxyParams())
    assert recs[0]["open"] == 0 and recs[1]["open"] == len(g.edges)
    assert recs[0]["clusters"]["count"] == 4
    assert recs[1]["forest"]["deleted"] == 1


def test_sweep_byte_identical():
    g = lattice_box(4, 4)
    args = (g, unit_potential(g), [0.3, 0.7], 3, 77, ProxyParams())
    a = records_to_jsonl(sweep(*args))
    b = records_to_jsonl(sweep(*args))
    assert a == b
    assert summary_csv(sweep(*args)) == summary_csv(sweep(*args))


def test_sweep_gp_z2_reports_trifurcation_clusters():
    fp = free_product([{"family": "gp", "k": 2, "up": 1, "down": 1},
                       {"family": "lattice_box", "w": 3, "h": 3}], max_word=2)
    pot = level_potential(fp, F(1, 2))
    recs = sweep(fp, pot, [0.6], 10, 42, ProxyParams())
    hits = sum(1 for r in recs if r["clusters"]["clusters_with_3plus_sides"] >= 1)
    # empirical statistic at this fixed truncation and seed set, frozen once
    # measured (10/10 runs, per-run counts 3,6,6,3,5,3,3,4,7,2); a majority
    # is the reported claim, not a theorem
    assert hits == 10


def test_largest_cluster_fraction_monotone_small():
    g = lattice_box(12, 12)
    wins = 0
    for seed in range(20):
        hi = largest_cluster_fraction(bernoulli_sample(g, 0.6, seed))
        lo = largest_cluster_fraction(bernoulli_sample(g, 0.4, seed))
        wins += hi > lo
    assert wins >= 18


def test_sweep_runs_witness_checks(rand):
    # the sweep itself asserts cut witnesses and the heavy-split shadow on
    # every run; reaching here means no violation was raised
    fp = free_product([{"family": "gp", "k": 2, "up": 1, "down": 1},
                       {"family": "lattice_box", "w": 2, "h": 2}], max_word=2)
    recs = sweep(fp, level_potential(fp, F(1, 2)), [0.4, 0.8], 3, 9, ProxyParams())
    assert all(r["forest"]["witness_violations"] == 0 for r in recs)
