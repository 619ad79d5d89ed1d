from fractions import Fraction as F

import pytest

from wforest.errors import BadParams
from wforest.generators import (
    build_family,
    cycle,
    free_product,
    gp_graph,
    lattice_box,
    random_gnm,
    regular_tree,
    windmill,
)
from wforest.graph import to_json
from wforest.weights import (
    cocycle_from_potential,
    level_potential,
    unit_potential,
    validate_cocycle,
)


def test_determinism_byte_identical():
    specs = [
        {"family": "gp", "k": 2, "up": 2, "down": 3},
        {"family": "windmill", "blades": 3, "radius": 2},
        {"family": "random_gnm", "n": 10, "m": 14, "seed": 9},
        {"family": "free_product", "max_word": 1,
         "factors": [{"family": "gp", "k": 2, "up": 1, "down": 1},
                     {"family": "lattice_box", "w": 3, "h": 3}]},
    ]
    for spec in specs:
        assert to_json(build_family(dict(spec))) == to_json(build_family(dict(spec)))


def test_gp_2_1_1_hand_audit():
    g = gp_graph(2, 1, 1)
    assert len(g.vertices) == 7
    root = g.meta["root"]
    lv = g.meta["levels"]
    assert lv[root] == 0
    ancestor = [v for v in g.vertices if lv[v] == -1]
    assert len(ancestor) == 1
    a = ancestor[0]
    zeros = [v for v in g.vertices if lv[v] == 0]
    ones = [v for v in g.vertices if lv[v] == 1]
    assert len(zeros) == 2 and len(ones) == 4
    # parent edges ancestor-row0 and row0-row1, grandparent edges ancestor-row1
    for z in zeros:
        assert (min(a, z), max(a, z)) in g.edges
    for o in ones:
        assert (min(a, o), max(a, o)) in g.edges
    assert len(g.edges) == 2 + 4 + 4


def test_gp_interior_degree_audit():
    for k, up, down in ((2, 3, 5), (3, 2, 4)):
        g = gp_graph(k, up, down)
        expect = (k + 1) + k * k + 1  # children+parent, grandchildren, grandparent
        for v in g.vertices:
            if not g.is_boundary(v):
                assert g.degree(v) == expect


def test_gp_boundary_bands():
    g = gp_graph(2, 3, 5)
    lv = g.meta["levels"]
    for v in g.vertices:
        expect = lv[v] in (-3, -2, 4, 5)
        assert g.is_boundary(v) == expect


def test_gp_parent_child_ratio():
    g = gp_graph(2, 1, 3)
    c = cocycle_from_potential(g, level_potential(g, F(1, 2)))
    lv = g.meta["levels"]
    for u, v in g.sorted_edges():
        child, parent = (u, v) if lv[u] > lv[v] else (v, u)
        if lv[child] - lv[parent] == 1:
            assert c.ratio(child, parent) == F(1, 2)
        else:
            assert c.ratio(child, parent) == F(1, 4)
    assert validate_cocycle(g, c).ok


def test_small_families():
    box = lattice_box(2, 2)
    assert len(box.vertices) == 4 and len(box.edges) == 4
    star = regular_tree(3, 1)
    assert len(star.vertices) == 4 and star.degree(0) == 3
    tri = cycle(3)
    assert len(tri.edges) == 3
    g = random_gnm(8, 11, seed=2)
    assert len(g.edges) == 11
    assert random_gnm(8, 11, seed=2).edges == g.edges
    assert random_gnm(8, 11, seed=3).edges != g.edges


def test_lattice_box_boundary():
    box = lattice_box(4, 3)
    per = {v for v in box.vertices if box.is_boundary(v)}
    assert len(per) == 4 * 3 - 2  # all but the two interior cells


def test_bad_params():
    for call in (lambda: gp_graph(1, 1, 1), lambda: cycle(2),
                 lambda: windmill(2, 2), lambda: lattice_box(0, 3),
                 lambda: random_gnm(4, 99, 0),
                 lambda: free_product([{"family": "cycle", "n": 3}], 1)):
        with pytest.raises(BadParams):
            call()


def test_free_product_vertex_audit():
    fp = free_product([{"family": "gp", "k": 2, "up": 1, "down": 1},
                       {"family": "lattice_box", "w": 3, "h": 3}], max_word=1)
    assert len(fp.vertices) == 7 + 7 * (9 - 1)


def test_free_product_edge_ratios():
    fp = free_product([{"family": "gp", "k": 2, "up": 1, "down": 1},
                       {"family": "lattice_box", "w": 3, "h": 3}], max_word=2)
    c = cocycle_from_potential(fp, level_potential(fp, F(1, 2)))
    assert validate_cocycle(fp, c).ok
    gp_ratios, z2_ratios = set(), set()
    for u, v, fidx in fp.meta["edge_factors"]:
        target = gp_ratios if fidx == 0 else z2_ratios
        target.add(c.ratio(u, v))
        target.add(c.ratio(v, u))
    assert gp_ratios == {F(1, 4), F(1, 2), F(2), F(4)}
    assert z2_ratios == {F(1)}


def test_free_product_factor_recovery():
    # contracting every attached box leaves the base gp adjacency intact
    fp = free_product([{"family": "gp", "k": 2, "up": 1, "down": 1},
                       {"family": "lattice_box", "w": 2, "h": 2}], max_word=1)
    base = gp_graph(2, 1, 1)
    gp_edges = {(u, v) for u, v, fidx in fp.meta["edge_factors"] if fidx == 0}
    # depth-0 copy keeps factor vertex ids, so its edges match the base graph
    assert {e for e in gp_edges if max(e) < len(base.vertices)} == set(base.edges)


def test_windmill_hand_audit():
    w = windmill(3, 2)
    assert len(w.vertices) == 3 + 3 * 8
    assert len(w.edges) == 2 + 3 * 12
    assert set(w.meta["tiebreak"]) == set(w.edges)
    # hubs 0 and 2 are chain ends, flagged; hub 1 interior
    assert w.is_boundary(0) and w.is_boundary(2) and not w.is_boundary(1)


def test_windmill_emitted_order_shape():
    w = windmill(4, 3)
    rank = {e: i for i, e in enumerate(w.meta["tiebreak"])}
    chain = [e for e in w.edges if e[0] < 4 and e[1] < 4]
    solid = []
    dotted_rows = {}
    R = 3
    blade_cells = (R + 1) ** 2 - 1

    def coords(vid):
        i = (vid - 4) // blade_cells
        r = (vid - 4) % blade_cells + 1
        return i, r // (R + 1), r % (R + 1)

    for e in w.edges:
        if e in chain:
            continue
        u, v = e
        iu, au, bu = coords(u) if u >= 4 else (u, 0, 0)
        iv, av, bv = coords(v) if v >= 4 else (v, 0, 0)
        if bu == bv:
            dotted_rows.setdefault((iu, bu), []).append((au, e))
        else:
            solid.append(e)
    # every dotted edge precedes every solid edge
    max_dotted = max(rank[e] for row in dotted_rows.values() for _, e in row)
    min_solid = min(rank[e] for e in solid)
    assert max_dotted < min_solid
    # each row strictly increasing along the blade
    for row in dotted_rows.values():
        row.sort()
        ranks = [rank[e] for _, e in row]
        assert ranks == sorted(ranks)


def test_windmill_forest_three_rays_at_hubs():
    from wforest.forest import maximal_subforest, maximal_subforest_oracle
    from wforest.weights import EdgeOrder
    w = windmill(3, 3)
    o = EdgeOrder(w, unit_potential(w), w.meta["tiebreak"])
    r = maximal_subforest_oracle(w, o)
    assert maximal_subforest(w, o).kept == r.kept
    for hub in (1,):  # interior hub
        incident = sorted(e for e in r.kept if hub in e)
        assert len(incident) == 3
        chain_edges = [e for e in incident if e[0] < 3 and e[1] < 3]
        assert len(chain_edges) == 2  # both chain directions plus one blade ray
