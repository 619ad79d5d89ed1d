"""Deterministic constructors for the concrete graph families.

Every generator emits a Graph whose meta carries per-vertex levels (where
weights are level-derived), truncation-boundary flags, a designated root,
and the generator name and parameters.  Identical parameters produce
byte-identical JSON.
"""

from .errors import BadParams
from .graph import Edge, Graph, build_graph, edge
from .rng import u64


def gp_graph(k: int, up_levels: int, down_levels: int) -> Graph:
    """Truncation of the grandparent family GP(k).

    Start from the top ancestor at level -up_levels and grow the complete
    k-ary descendant tree down to level down_levels; connect every vertex to
    its parent and its grandparent.  The canonical root is the level-0 vertex
    reached by first-child steps from the top.  Levels increase away from
    the distinguished direction, so the weight k**(-level) makes each
    parent->child ratio exactly 1/k.

    Boundary flags mark the four level bands whose neighborhoods the
    truncation cut short: the top two (missing parent or grandparent) and
    the bottom two (missing children or grandchildren).
    """
    if k < 2 or up_levels < 1 or down_levels < 1:
        raise BadParams("gp_graph requires k >= 2 and levels >= 1")
    levels: dict[int, int] = {}
    parent: dict[int, int] = {}
    edges: list[Edge] = []
    next_id = 0

    def grow(level: int, par: int | None) -> int:
        nonlocal next_id
        v = next_id
        next_id += 1
        levels[v] = level
        if par is not None:
            parent[v] = par
            edges.append(edge(v, par))
            if par in parent:
                edges.append(edge(v, parent[par]))
        if level < down_levels:
            for _ in range(k):
                grow(level + 1, v)
        return v

    grow(-up_levels, None)
    top_band = {-up_levels, -up_levels + 1}
    bottom_band = {down_levels, down_levels - 1}
    boundary = frozenset(v for v, l in levels.items() if l in top_band | bottom_band)
    meta = {
        "generator": "gp",
        "params": {"k": k, "up": up_levels, "down": down_levels},
        "root": up_levels,  # the first-child chain from the top has ids 0..up
        "levels": levels,
        "boundary": boundary,
    }
    return build_graph(range(next_id), edges, meta=meta)


def lattice_box(w: int, h: int) -> Graph:
    """w-by-h box of the square lattice; perimeter flagged as boundary."""
    if w < 1 or h < 1:
        raise BadParams("lattice_box requires w, h >= 1")
    vid = lambda c, r: r * w + c
    edges = []
    for r in range(h):
        for c in range(w):
            if c + 1 < w:
                edges.append(edge(vid(c, r), vid(c + 1, r)))
            if r + 1 < h:
                edges.append(edge(vid(c, r), vid(c, r + 1)))
    boundary = frozenset(
        vid(c, r) for r in range(h) for c in range(w)
        if c in (0, w - 1) or r in (0, h - 1)
    )
    meta = {
        "generator": "lattice_box",
        "params": {"w": w, "h": h},
        "root": 0,
        "boundary": boundary,
    }
    return build_graph(range(w * h), edges, meta=meta)


def regular_tree(d: int, radius: int) -> Graph:
    """d-regular tree truncated at the given radius; leaves flagged."""
    if d < 2 or radius < 1:
        raise BadParams("regular_tree requires d >= 2 and radius >= 1")
    edges = []
    depth = {0: 0}
    next_id = 1
    frontier = [0]
    for dist in range(1, radius + 1):
        new_frontier = []
        for v in frontier:
            n_children = d if depth[v] == 0 else d - 1
            for _ in range(n_children):
                c = next_id
                next_id += 1
                depth[c] = dist
                edges.append(edge(v, c))
                new_frontier.append(c)
        frontier = new_frontier
    boundary = frozenset(v for v, dist in depth.items() if dist == radius)
    meta = {
        "generator": "regular_tree",
        "params": {"d": d, "radius": radius},
        "root": 0,
        "boundary": boundary,
    }
    return build_graph(range(next_id), edges, meta=meta)


def cycle(n: int) -> Graph:
    if n < 3:
        raise BadParams("cycle requires n >= 3")
    edges = [edge(i, (i + 1) % n) for i in range(n)]
    meta = {"generator": "cycle", "params": {"n": n}, "root": 0}
    return build_graph(range(n), edges, meta=meta)


def random_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform random simple graph with n vertices and m edges, fixed seed."""
    if n < 1 or m < 0:
        raise BadParams("random_gnm requires n >= 1 and m >= 0")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if m > len(pairs):
        raise BadParams(f"m={m} exceeds the {len(pairs)} possible edges")
    # keyed Fisher-Yates: deterministic and platform-independent
    for i in range(len(pairs) - 1, 0, -1):
        j = u64(seed, "gnm", i) % (i + 1)
        pairs[i], pairs[j] = pairs[j], pairs[i]
    meta = {"generator": "random_gnm", "params": {"n": n, "m": m, "seed": seed},
            "root": 0}
    return build_graph(range(n), pairs[:m], meta=meta)


FAMILIES = ("gp", "regular_tree", "lattice_box", "free_product", "windmill",
            "cycle", "random_gnm")


def build_family(spec: dict) -> Graph:
    """Dispatch a FamilySpec mapping to the matching constructor."""
    fam = spec.get("family")
    if fam == "gp":
        return gp_graph(spec["k"], spec["up"], spec["down"])
    if fam == "regular_tree":
        return regular_tree(spec["d"], spec["radius"])
    if fam == "lattice_box":
        return lattice_box(spec["w"], spec["h"])
    if fam == "cycle":
        return cycle(spec["n"])
    if fam == "random_gnm":
        return random_gnm(spec["n"], spec["m"], spec.get("seed", 0))
    if fam == "windmill":
        return windmill(spec["blades"], spec["radius"])
    if fam == "free_product":
        return free_product(spec["factors"], spec["max_word"])
    raise BadParams(f"unknown family {fam!r}; expected one of {FAMILIES}")


def free_product(factors: list[dict], max_word: int) -> Graph:
    """Tree-of-copies truncation of the free product of rooted factors.

    A copy of the first factor sits at depth 0; at every vertex created in a
    depth-d copy, one copy of each *other* factor is glued by identifying
    its root with that vertex, while d+1 <= max_word.  Levels compose
    additively along the copy tree, so a level-derived weight restricts to
    every GP-type copy correctly and is constant across lattice copies.

    Boundary flags: a factor's own truncation flags carry over (except at
    the identification vertex, whose flag belongs to its creating copy), and
    every non-root vertex of a depth-max_word copy is flagged because its
    glued copies are missing.
    """
    if len(factors) < 2:
        raise BadParams("free_product requires at least 2 factors")
    if max_word < 1:
        raise BadParams("free_product requires max_word >= 1")
    built = [build_family(dict(spec)) for spec in factors]
    roots = []
    for fg in built:
        if "root" not in fg.meta:
            raise BadParams("free_product factors must designate a root")
        roots.append(fg.meta["root"])

    levels: dict[int, int] = {}
    boundary: set[int] = set()
    edges_with_factor: list[tuple[int, int, int]] = []
    next_id = 0
    any_levels = any(fg.meta.get("levels") for fg in built)

    def place(fidx: int, attach: int | None, depth: int) -> list[int]:
        """Glue one copy; return global ids of vertices created here."""
        nonlocal next_id
        fg = built[fidx]
        flev = fg.meta.get("levels", {})
        root = roots[fidx]
        base_level = levels.get(attach, 0) if attach is not None else 0
        mapping: dict[int, int] = {}
        created = []
        for v in fg.vertices:
            if attach is not None and v == root:
                mapping[v] = attach
                continue
            gid = next_id
            next_id += 1
            mapping[v] = gid
            created.append(gid)
            levels[gid] = base_level + flev.get(v, 0) - flev.get(root, 0)
            if fg.is_boundary(v) or depth == max_word:
                boundary.add(gid)
        for u, v in fg.sorted_edges():
            gu, gv = mapping[u], mapping[v]
            a, b = (gu, gv) if gu < gv else (gv, gu)
            edges_with_factor.append((a, b, fidx))
        return created

    queue: list[tuple[int, int | None, int]] = [(0, None, 0)]
    qi = 0
    while qi < len(queue):
        fidx, attach, depth = queue[qi]
        qi += 1
        created = place(fidx, attach, depth)
        if depth + 1 <= max_word:
            for gid in created:
                for j in range(len(built)):
                    if j != fidx:
                        queue.append((j, gid, depth + 1))

    meta = {
        "generator": "free_product",
        "params": {"factors": [dict(s) for s in factors], "max_word": max_word},
        "root": roots[0],
        "boundary": frozenset(boundary),
        "edge_factors": sorted(edges_with_factor),
    }
    if any_levels:
        meta["levels"] = levels
    return build_graph(range(next_id), [(u, v) for u, v, _ in edges_with_factor],
                       meta=meta)


def windmill(blades: int, radius: int) -> Graph:
    """Chain of hub vertices, each the corner of a square-lattice quadrant
    blade truncated at the given radius, with the dotted/solid edge order.

    The hub line stands in for the infinite spine of the family, so the two
    chain-end hubs are flagged as truncation boundary along with each
    blade's far rim; with the constant weight this makes every interior hub
    a three-sided furcation proxy (left chain, right chain, own blade).

    The emitted tiebreak order lives in ``meta["tiebreak"]`` (edges listed
    least to greatest): chain edges first and increasing along the chain,
    then each blade row of horizontal "dotted" edges strictly increasing,
    then all vertical "solid" edges.  Cutting the order-least edge of every
    cycle then keeps exactly the verticals, each blade's far rim row, and
    the chain, leaving three forest directions at every interior hub.
    """
    if blades < 3 or radius < 2:
        raise BadParams("windmill requires blades >= 3 and radius >= 2")
    R = radius
    blade_cells = (R + 1) * (R + 1) - 1  # corner is the hub itself

    def vid(i: int, a: int, b: int) -> int:
        if a == 0 and b == 0:
            return i
        rank = (R + 1) * a + b - 1  # lexicographic over (a, b), skipping (0,0)
        return blades + i * blade_cells + rank

    chain = [edge(i, i + 1) for i in range(blades - 1)]
    # dotted horizontals in row order (i, b, a): each row increases along a
    dotted = [
        edge(vid(i, a, b), vid(i, a + 1, b))
        for i in range(blades) for b in range(R + 1) for a in range(R)
    ]
    solid = [
        edge(vid(i, a, b), vid(i, a, b + 1))
        for i in range(blades) for a in range(R + 1) for b in range(R)
    ]
    tiebreak = chain + dotted + solid
    boundary = {0, blades - 1}
    for i in range(blades):
        for a in range(R + 1):
            for b in range(R + 1):
                if (a == R or b == R) and not (a == 0 and b == 0):
                    boundary.add(vid(i, a, b))
    n_vertices = blades + blades * blade_cells
    meta = {
        "generator": "windmill",
        "params": {"blades": blades, "radius": radius},
        "root": 0,
        "boundary": frozenset(boundary),
        "tiebreak": tiebreak,
    }
    return build_graph(range(n_vertices), tiebreak, meta=meta)
