"""Finite-proxy analysis of ends: side classification, furcations, the
quotient-collapse pipeline, and visibility sets.

"Infinite" and "nonvanishing" are undecidable on a finite truncation.  The
proxy used throughout: a side is infinite-proxy when it reaches a flagged
truncation-boundary vertex, and nonvanishing-proxy when it reaches one whose
potential is at least ``nonvanish_delta`` (in the scale of the potential
passed in, i.e. relative to its basepoint).  Every report carries the active
ProxyParams so results stay honest about the approximation.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import BadParams, NotConnected, OverlappingBlocks, UnknownId
from .forest import ForestResult, maximal_subforest
from .graph import (
    Edge,
    Graph,
    Side,
    build_graph,
    components,
    edge,
    induced_subgraph,
    is_connected_set,
    sides,
)
from .weights import Cocycle, EdgeOrder, potential_from_cocycle

NONVANISHING = "nonvanishing"
INFINITE = "infinite"
FINITE = "finite"


@dataclass(frozen=True)
class ProxyParams:
    nonvanish_delta: Fraction = Fraction(1)
    heavy_tau: Fraction = Fraction(4)
    infinite_proxy: bool = True

    def __post_init__(self):
        if self.nonvanish_delta <= 0 or self.heavy_tau <= 0:
            raise BadParams("proxy thresholds must be strictly positive")


def classify_side(g: Graph, potential: Mapping[int, object], side,
                  params: ProxyParams) -> str:
    """nonvanishing: contains a flagged vertex with potential >= delta;
    infinite: contains any flagged vertex; finite otherwise."""
    verts = side.vertices if isinstance(side, Side) else tuple(side)
    flagged = g.boundary_vertices()
    nonvan = any(v in flagged and potential[v] >= params.nonvanish_delta
                 for v in verts)
    if nonvan:
        return NONVANISHING
    if params.infinite_proxy and any(v in flagged for v in verts):
        return INFINITE
    return FINITE


def _qualifies(kind: str, classification: str) -> bool:
    if kind == NONVANISHING:
        return classification == NONVANISHING
    if kind == INFINITE:
        return classification in (NONVANISHING, INFINITE)
    raise ValueError(f"unknown side kind {kind!r}")


@dataclass(frozen=True)
class Furcation:
    F: tuple[int, ...]
    sides: tuple[tuple[Side, str], ...]
    order: int


def furcation_at(g: Graph, potential: Mapping[int, object], F: Iterable[int],
                 params: ProxyParams, kind: str = NONVANISHING) -> Furcation:
    fset = tuple(sorted(set(F)))
    tagged = tuple(
        (s, classify_side(g, potential, s, params)) for s in sides(g, fset)
    )
    order = sum(1 for _, cls in tagged if _qualifies(kind, cls))
    return Furcation(F=fset, sides=tagged, order=order)


def find_furcation_vertices(g: Graph, potential: Mapping[int, object], n: int,
                            params: ProxyParams,
                            kind: str = NONVANISHING) -> tuple[int, ...]:
    """Vertices x whose singleton {x} has at least n qualifying sides."""
    out = []
    for x in g.vertices:
        if furcation_at(g, potential, (x,), params, kind).order >= n:
            out.append(x)
    return tuple(out)


def connected_subsets(g: Graph, s_max: int) -> list[tuple[int, ...]]:
    """All connected vertex sets of size <= s_max, sorted by (size, ids).

    Enumeration with a fixed minimum vertex and exclusive-neighbor
    extensions, so each set appears exactly once.
    """
    adj = g.adjacency
    found: list[tuple[int, ...]] = []

    def extend(root: int, sub: list[int], ext: list[int], forbidden: set[int]):
        found.append(tuple(sorted(sub)))
        if len(sub) == s_max:
            return
        remaining = list(ext)
        while remaining:
            w = remaining.pop(0)
            new_forbidden = forbidden | {w}
            fresh = [u for u in adj[w]
                     if u > root and u not in new_forbidden and u not in sub]
            extend(root, sub + [w], remaining + fresh, new_forbidden | set(fresh))
        return

    for v in g.vertices:
        ext0 = [u for u in adj[v] if u > v]
        extend(v, [v], ext0, {v} | set(ext0))
    found.sort(key=lambda t: (len(t), t))
    return found


@dataclass(frozen=True)
class FurcationFamily:
    blocks: tuple[tuple[int, ...], ...]
    phases: tuple[int, ...]  # 1: w-trifurcation, 2: w-bifurcation, 3: plain bifurcation


def maximal_disjoint_furcations(g: Graph, potential: Mapping[int, object],
                                params: ProxyParams,
                                s_max: int = 3) -> FurcationFamily:
    """Greedy three-phase family per the collapse recipe: weighted
    trifurcations, then weighted bifurcations, then plain bifurcations.

    Candidates are scanned in the deterministic (size, ids) order, capped at
    s_max vertices; the result is pairwise disjoint and maximal under the
    scan within each phase.
    """
    candidates = connected_subsets(g, s_max)
    used: set[int] = set()
    blocks: list[tuple[int, ...]] = []
    phases: list[int] = []
    spec = ((1, NONVANISHING, 3), (2, NONVANISHING, 2), (3, INFINITE, 2))
    for phase, kind, need in spec:
        for cand in candidates:
            if any(v in used for v in cand):
                continue
            if furcation_at(g, potential, cand, params, kind).order >= need:
                blocks.append(cand)
                phases.append(phase)
                used.update(cand)
    return FurcationFamily(blocks=tuple(blocks), phases=tuple(phases))


@dataclass(frozen=True)
class QuotientGraph:
    blocks: tuple[tuple[int, ...], ...]        # family blocks plus singletons
    family: tuple[tuple[int, ...], ...]
    qgraph: Graph
    qpotential: dict[int, Fraction]
    lift: dict[Edge, Edge]                     # quotient edge -> chosen host edge
    inner_trees: dict[int, frozenset[Edge]]    # family block id -> spanning tree
    block_of: dict[int, int] = field(repr=False, default_factory=dict)


def quotient(g: Graph, potential: Mapping[int, object],
             family: Iterable[tuple[int, ...]]) -> QuotientGraph:
    """Collapse each family block to a single vertex (id: least member).

    Block potential is the max over members; the lift picks, per quotient
    edge, the host edge with the largest endpoint potentials, ties broken by
    canonical edge order.
    """
    fam = tuple(tuple(sorted(b)) for b in family)
    block_of: dict[int, int] = {}
    for b in fam:
        if not is_connected_set(g, b):
            raise NotConnected(f"family block {b} is not connected")
        for v in b:
            if v in block_of:
                raise OverlappingBlocks(f"vertex {v} lies in two family blocks")
            block_of[v] = b[0]
    for v in g.vertices:
        block_of.setdefault(v, v)

    all_blocks: dict[int, list[int]] = {}
    for v in g.vertices:
        all_blocks.setdefault(block_of[v], []).append(v)

    host_by_qedge: dict[Edge, list[Edge]] = {}
    for e in g.sorted_edges():
        bu, bv = block_of[e[0]], block_of[e[1]]
        if bu == bv:
            continue
        host_by_qedge.setdefault(edge(bu, bv), []).append(e)

    def pick(cands: list[Edge]) -> Edge:
        def pots(e: Edge):
            return tuple(sorted((potential[e[0]], potential[e[1]]), reverse=True))
        best = max(pots(e) for e in cands)
        return min(e for e in cands if pots(e) == best)

    lift = {qe: pick(cands) for qe, cands in host_by_qedge.items()}
    qpotential = {bid: max(potential[v] for v in members)
                  for bid, members in all_blocks.items()}
    inner_trees = {}
    for b in fam:
        sub = induced_subgraph(g, b)
        inner_trees[b[0]] = _bfs_tree(sub, b[0])

    qboundary = frozenset(
        bid for bid, members in all_blocks.items()
        if any(g.is_boundary(v) for v in members)
    )
    qmeta = {"generator": "quotient", "boundary": qboundary}
    qgraph = build_graph(sorted(all_blocks), host_by_qedge.keys(), meta=qmeta)
    return QuotientGraph(
        blocks=tuple(tuple(sorted(m)) for _, m in sorted(all_blocks.items())),
        family=fam,
        qgraph=qgraph,
        qpotential=qpotential,
        lift=lift,
        inner_trees=inner_trees,
        block_of=block_of,
    )


def _bfs_tree(g: Graph, root: int) -> frozenset[Edge]:
    seen = {root}
    queue = [root]
    qi = 0
    tree = []
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for y in g.adjacency[x]:
            if y not in seen:
                seen.add(y)
                tree.append(edge(x, y))
                queue.append(y)
    return frozenset(tree)


@dataclass(frozen=True)
class CollapseResult:
    forest: ForestResult          # on the host graph
    family: FurcationFamily
    quot: QuotientGraph
    qforest: ForestResult         # on the quotient graph


def collapsed_maximal_subforest(g: Graph, potential: Mapping[int, object],
                                tiebreak, params: ProxyParams,
                                fixed_q: Iterable[Edge] = (),
                                s_max: int = 3) -> CollapseResult:
    """Full pipeline: furcation family, quotient, forest on the quotient,
    then lift back with a deterministic spanning tree inside each block.

    The quotient tiebreak is inherited from the host tiebreak through the
    lift map, so the whole pipeline is a pure function of its inputs.
    """
    host_order = EdgeOrder(g, potential, tiebreak)
    family = maximal_disjoint_furcations(g, potential, params, s_max=s_max)
    quot = quotient(g, potential, family.blocks)
    qrank = {qe: host_order.rank[lifted] for qe, lifted in quot.lift.items()}
    qorder = EdgeOrder(quot.qgraph, quot.qpotential, qrank)
    qforest = maximal_subforest(quot.qgraph, qorder, fixed_q)
    kept = set()
    for tree in quot.inner_trees.values():
        kept |= tree
    for qe in qforest.kept:
        kept.add(quot.lift[qe])
    forest = ForestResult(
        kept=frozenset(kept),
        deleted=frozenset(g.edges - kept),
        fixed=frozenset(quot.lift[qe] for qe in qforest.fixed),
    )
    return CollapseResult(forest=forest, family=family, quot=quot, qforest=qforest)


def visibility_set(g: Graph, c: Cocycle, x: int) -> tuple[int, ...]:
    """Vertices reachable from x along paths whose every vertex has weight
    at most 1 relative to x (x itself always belongs)."""
    if x not in g.adjacency:
        raise UnknownId(f"vertex {x} not in graph")
    pot = potential_from_cocycle(g, c, x)
    one = Fraction(1) if c.mode == "exact" else 1.0
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for y in g.adjacency[v]:
            if y not in seen and pot[y] <= one:
                seen.add(y)
                stack.append(y)
    return tuple(sorted(seen))


def visibility_mass(g: Graph, c: Cocycle, x: int, params: ProxyParams):
    """Total relative weight of the visibility set, with its proxy class.

    heavy: mass >= heavy_tau, or the set reaches the truncation boundary at
    relative weight >= nonvanish_delta.
    """
    pot = potential_from_cocycle(g, c, x)
    vis = visibility_set(g, c, x)
    mass = sum(pot[y] for y in vis)
    flagged = g.boundary_vertices()
    touches = any(y in flagged and pot[y] >= params.nonvanish_delta for y in vis)
    cls = "heavy" if (mass >= params.heavy_tau or touches) else "light"
    return mass, cls


# Per-vertex side counts at scale: block-cut tree plus subtree counts,
# avoiding one complement-BFS per vertex.

def qualifying_side_counts(g: Graph, qualifies: Callable[[int], bool]) -> dict[int, int]:
    """For every vertex x, the number of components of (component minus x)
    containing at least one vertex with qualifies(v) True.

    Linear in the component size; used for nonvanishing-proxy side counts on
    percolation clusters and forest trees.
    """
    counts: dict[int, int] = {}
    for comp in components(g):
        if len(comp) == 1:
            counts[comp[0]] = 0
            continue
        blocks, cut_vertices = _biconnected_blocks(g, comp)
        q_total = sum(1 for v in comp if qualifies(v))
        # block-cut tree: nodes are ("b", idx) and ("c", vertex)
        nodes: list[tuple] = [("b", i) for i in range(len(blocks))]
        nodes += [("c", v) for v in sorted(cut_vertices)]
        tree_adj: dict[tuple, list[tuple]] = {n: [] for n in nodes}
        for i, bl in enumerate(blocks):
            for v in bl:
                if v in cut_vertices:
                    tree_adj[("b", i)].append(("c", v))
                    tree_adj[("c", v)].append(("b", i))

        def node_count(n: tuple) -> int:
            if n[0] == "c":
                return 1 if qualifies(n[1]) else 0
            return sum(1 for v in blocks[n[1]] if v not in cut_vertices and qualifies(v))

        root = nodes[0]
        order, parent = _tree_order(tree_adj, root)
        down = {n: node_count(n) for n in nodes}
        for n in reversed(order):
            p = parent[n]
            if p is not None:
                down[p] += down[n]

        block_of_noncut: dict[int, int] = {}
        for i, bl in enumerate(blocks):
            for v in bl:
                if v not in cut_vertices:
                    block_of_noncut[v] = i
        for v in comp:
            if v in cut_vertices:
                n = ("c", v)
                c = 0
                for nb in tree_adj[n]:
                    if parent.get(nb) == n:
                        if down[nb] > 0:
                            c += 1
                    # the branch through v's own parent holds everything else
                if parent[n] is not None and q_total - down[n] > 0:
                    c += 1
                counts[v] = c
            else:
                others = q_total - (1 if qualifies(v) else 0)
                counts[v] = 1 if others > 0 else 0
    return counts


def _tree_order(tree_adj, root):
    order = [root]
    parent = {root: None}
    qi = 0
    while qi < len(order):
        n = order[qi]
        qi += 1
        for nb in tree_adj[n]:
            if nb not in parent:
                parent[nb] = n
                order.append(nb)
    return order, parent


def _biconnected_blocks(g: Graph, comp: tuple[int, ...]):
    """Biconnected components (as vertex sets) and articulation points of
    one connected component, via iterative Hopcroft-Tarjan."""
    adj = g.adjacency
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    timer = 0
    blocks: list[set[int]] = []
    cut: set[int] = set()
    estack: list[Edge] = []
    root = comp[0]
    stack: list[tuple[int, int | None, int]] = [(root, None, 0)]
    root_children = 0
    while stack:
        v, par, idx = stack.pop()
        if idx == 0:
            disc[v] = low[v] = timer
            timer += 1
        ns = adj[v]
        advanced = False
        for i in range(idx, len(ns)):
            w = ns[i]
            if w == par and i == idx:
                # skip the tree edge back to the parent once
                continue
            if w not in disc:
                estack.append((v, w))
                stack.append((v, par, i + 1))
                stack.append((w, v, 0))
                if v == root:
                    root_children += 1
                advanced = True
                break
            if disc[w] < disc[v] and w != par:
                estack.append((v, w))
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        if par is not None:
            low[par] = min(low[par], low[v])
            if low[v] >= disc[par]:
                block: set[int] = set()
                while estack:
                    a, b = estack.pop()
                    block.add(a)
                    block.add(b)
                    if (a, b) == (par, v):
                        break
                blocks.append(block)
                if par != root:
                    cut.add(par)
    if root_children >= 2:
        cut.add(root)
    return blocks, cut
