"""Immutable finite graphs with the connectivity, boundary, side, and cycle
primitives every other module builds on.

Vertices are opaque integer ids; edges are canonical pairs ``(u, v)`` with
``u < v``.  Determinism everywhere comes from sorting on ids, never from
hash order.  Per-vertex "level" integers and truncation-boundary flags are
carried in ``Graph.meta`` (keys ``"levels"`` and ``"boundary"``) because only
the generator that built a truncation knows which vertices are artifacts of
cutting off an infinite graph.
"""

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import (
    CycleLimitExceeded,
    DanglingEndpoint,
    DuplicateVertexId,
    NotConnected,
    SelfLoop,
    SpansComponents,
    UnknownId,
)

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Canonical undirected edge: endpoints sorted, self-loops rejected."""
    if u == v:
        raise SelfLoop(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=True)
class Graph:
    vertices: tuple[int, ...]
    edges: frozenset[Edge]
    adjacency: dict[int, tuple[int, ...]]
    meta: dict = field(default_factory=dict)

    def __contains__(self, v: int) -> bool:
        return v in self.adjacency

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise UnknownId(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    # meta accessors

    def level(self, v: int):
        return self.meta.get("levels", {}).get(v)

    def is_boundary(self, v: int) -> bool:
        return v in self.meta.get("boundary", ())

    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.meta.get("boundary", ()))


def build_graph(vertices: Iterable[int], edges: Iterable[tuple[int, int]],
                meta: dict | None = None) -> Graph:
    """Validate and canonicalize a vertex/edge description into a Graph."""
    vlist = list(vertices)
    vset = set(vlist)
    if len(vset) != len(vlist):
        seen, dup = set(), None
        for v in vlist:
            if v in seen:
                dup = v
                break
            seen.add(v)
        raise DuplicateVertexId(f"vertex id {dup} listed twice")
    eset = set()
    for u, v in edges:
        e = edge(u, v)
        if e[0] not in vset or e[1] not in vset:
            missing = e[0] if e[0] not in vset else e[1]
            raise DanglingEndpoint(f"edge {e} references unknown vertex {missing}")
        eset.add(e)
    adj: dict[int, list[int]] = {v: [] for v in sorted(vset)}
    for u, v in eset:
        adj[u].append(v)
        adj[v].append(u)
    adjacency = {v: tuple(sorted(ns)) for v, ns in adj.items()}
    return Graph(
        vertices=tuple(sorted(vset)),
        edges=frozenset(eset),
        adjacency=adjacency,
        meta=dict(meta) if meta else {},
    )


def components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components as sorted vertex tuples, ordered by least id."""
    seen: set[int] = set()
    out = []
    for start in g.vertices:
        if start in seen:
            continue
        comp = _reach(g.adjacency, start)
        seen |= comp
        out.append(tuple(sorted(comp)))
    return out


def _reach(adjacency, start, blocked=frozenset(), allowed=None):
    """Vertices reachable from start, avoiding `blocked`, optionally inside `allowed`."""
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adjacency[x]:
            if y in seen or y in blocked:
                continue
            if allowed is not None and y not in allowed:
                continue
            seen.add(y)
            stack.append(y)
    return seen


def component_of(g: Graph, v: int) -> frozenset[int]:
    if v not in g.adjacency:
        raise UnknownId(f"vertex {v} not in graph")
    return frozenset(_reach(g.adjacency, v))


def is_connected_set(g: Graph, A: Iterable[int]) -> bool:
    """True iff the induced subgraph on A is connected (and A nonempty)."""
    aset = set(A)
    if not aset:
        return False
    for v in aset:
        if v not in g.adjacency:
            raise UnknownId(f"vertex {v} not in graph")
    start = min(aset)
    return _reach(g.adjacency, start, allowed=aset) == aset


class Side(NamedTuple):
    """One component of (component of F) minus F.

    ``contact`` lists the side's vertices adjacent to F (its inner boundary
    toward F).
    """
    vertices: tuple[int, ...]
    contact: tuple[int, ...]


def sides(g: Graph, F: Iterable[int]) -> list[Side]:
    """Components of the complement of F within F's own component.

    F must be nonempty, connected, and contained in a single component.
    """
    fset = set(F)
    if not fset:
        raise NotConnected("F is empty")
    for v in fset:
        if v not in g.adjacency:
            raise UnknownId(f"vertex {v} not in graph")
    comp = _reach(g.adjacency, min(fset))
    if not fset <= comp:
        raise SpansComponents("F spans more than one component")
    if not is_connected_set(g, fset):
        raise NotConnected(f"F={sorted(fset)} is not connected")
    rest = comp - fset
    out = []
    seen: set[int] = set()
    for v in sorted(rest):
        if v in seen:
            continue
        piece = _reach(g.adjacency, v, blocked=fset)
        seen |= piece
        contact = tuple(sorted(x for x in piece if any(y in fset for y in g.adjacency[x])))
        out.append(Side(tuple(sorted(piece)), contact))
    return out


def edge_boundary(g: Graph, A: Iterable[int]) -> frozenset[Edge]:
    """Edges with exactly one endpoint in A."""
    aset = set(A)
    return frozenset(e for e in g.edges if (e[0] in aset) != (e[1] in aset))


def inner_boundary(g: Graph, A: Iterable[int]) -> frozenset[int]:
    """Vertices of A adjacent to the complement."""
    aset = set(A)
    return frozenset(v for v in aset if any(y not in aset for y in g.adjacency[v]))


def outer_boundary(g: Graph, A: Iterable[int]) -> frozenset[int]:
    """Inner boundary of the complement: outside vertices adjacent to A."""
    aset = set(A)
    return frozenset(
        y for v in aset for y in g.adjacency[v] if y not in aset
    )


def simple_cycles(g: Graph, limit: int = 100_000) -> list[list[Edge]]:
    """All simple cycles (length >= 3), each exactly once, as edge lists.

    Canonical form: the vertex sequence starts at the cycle's least vertex
    and proceeds toward the smaller of its two cycle-neighbors.  Exponential;
    gated by `limit` and meant for oracle use on small graphs only.
    """
    cycles: list[tuple[int, ...]] = []
    adj = g.adjacency
    for s in g.vertices:
        # DFS over paths s, v1, ..., vk with every vi > s; a cycle is closed
        # when vk is adjacent to s; reflections deduped by v1 < vk.
        stack: list[tuple[int, list[int]]] = [(s, [s])]
        while stack:
            last, path = stack.pop()
            on_path = set(path)
            for y in adj[last]:
                if y == s and len(path) >= 3 and path[1] < path[-1]:
                    cycles.append(tuple(path))
                    if len(cycles) > limit:
                        raise CycleLimitExceeded(
                            f"more than {limit} simple cycles")
                elif y > s and y not in on_path:
                    stack.append((y, path + [y]))
    cycles.sort(key=lambda seq: (len(seq), seq))
    out = []
    for seq in cycles:
        es = [edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]
        es.append(edge(seq[-1], seq[0]))
        out.append(es)
    return out


def is_cycle_invariant(g: Graph, Y: Iterable[int], limit: int = 100_000) -> bool:
    """True iff every simple cycle with an edge inside Y lies entirely in Y."""
    yset = set(Y)
    for cyc in simple_cycles(g, limit=limit):
        verts = {v for e in cyc for v in e}
        if verts <= yset:
            continue
        if any(u in yset and v in yset for u, v in cyc):
            return False
    return True


def _restrict_meta(meta: dict, keep: set[int]) -> dict:
    out = dict(meta)
    if "levels" in out:
        out["levels"] = {v: l for v, l in out["levels"].items() if v in keep}
    if "boundary" in out:
        out["boundary"] = frozenset(v for v in out["boundary"] if v in keep)
    return out


def induced_subgraph(g: Graph, A: Iterable[int]) -> Graph:
    """Restriction to a vertex set, preserving ids and meta annotations."""
    aset = set(A)
    for v in aset:
        if v not in g.adjacency:
            raise UnknownId(f"vertex {v} not in graph")
    edges = [e for e in g.edges if e[0] in aset and e[1] in aset]
    return build_graph(sorted(aset), edges, meta=_restrict_meta(g.meta, aset))


def spanned_subgraph(g: Graph, E: Iterable[Edge]) -> Graph:
    """Subgraph on all vertices of g keeping only the given edges."""
    eset = set(E)
    for e in eset:
        if e not in g.edges:
            raise UnknownId(f"edge {e} not in graph")
    return build_graph(g.vertices, eset, meta=dict(g.meta))


# JSON interchange (the contract used by the CLI)

def to_json(g: Graph) -> str:
    levels = g.meta.get("levels", {})
    boundary = set(g.meta.get("boundary", ()))
    verts = []
    for v in g.vertices:
        rec: dict = {"id": v}
        if v in levels:
            rec["level"] = levels[v]
        if v in boundary:
            rec["boundary"] = True
        verts.append(rec)
    meta = {k: _jsonable(v) for k, v in g.meta.items() if k not in ("levels", "boundary")}
    doc = {
        "vertices": verts,
        "edges": [list(e) for e in g.sorted_edges()],
        "meta": meta,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _jsonable(v):
    if isinstance(v, (frozenset, set)):
        return sorted(v, key=repr)
    if isinstance(v, tuple):
        return list(v)
    return v


def from_json(text: str) -> Graph:
    doc = json.loads(text)
    vertices = []
    levels = {}
    boundary = set()
    for rec in doc["vertices"]:
        v = rec["id"]
        vertices.append(v)
        if "level" in rec:
            levels[v] = rec["level"]
        if rec.get("boundary"):
            boundary.add(v)
    meta = dict(doc.get("meta", {}))
    if "tiebreak" in meta:
        meta["tiebreak"] = [edge(u, v) for u, v in meta["tiebreak"]]
    if "edge_factors" in meta:
        meta["edge_factors"] = [[u, v, f] for u, v, f in meta["edge_factors"]]
    if levels:
        meta["levels"] = levels
    if boundary:
        meta["boundary"] = frozenset(boundary)
    return build_graph(vertices, [tuple(e) for e in doc["edges"]], meta=meta)
