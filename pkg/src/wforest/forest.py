"""Cycle-cutting subforests.

The normative semantics: an edge e outside the fixed subforest H is deleted
iff some simple cycle through e has e as its order-least non-H edge;
equivalently e is kept iff its endpoints are not connected by H together
with the strictly greater edges.  On a finite graph with a strict total
order this is exactly the maximum spanning forest constrained to contain H,
which the fast implementation computes greedily; the literal
cycle-enumeration reading lives in `maximal_subforest_oracle` and the two
are held equal by the test suite.
"""

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import (
    DuplicateLabel,
    FixedSetCyclic,
    InvariantViolation,
    NotConnected,
    NotCycleInvariant,
    UnknownId,
)
from .graph import (
    Edge,
    Graph,
    induced_subgraph,
    is_connected_set,
    is_cycle_invariant,
    simple_cycles,
)
from .unionfind import UnionFind
from .weights import EdgeOrder


@dataclass(frozen=True)
class ForestResult:
    kept: frozenset[Edge]
    deleted: frozenset[Edge]
    fixed: frozenset[Edge]
    witness: dict[Edge, tuple[Edge, ...]] | None = None

    def __post_init__(self):
        if self.kept & self.deleted:
            raise InvariantViolation("kept and deleted edge sets overlap")
        if not self.fixed <= self.kept:
            raise InvariantViolation("fixed edges must survive into the forest")


def _check_fixed(g: Graph, fixed: frozenset[Edge]) -> None:
    for e in fixed:
        if e not in g.edges:
            raise UnknownId(f"fixed edge {e} not in graph")
    uf = UnionFind(g.vertices)
    for u, v in sorted(fixed):
        if not uf.union(u, v):
            raise FixedSetCyclic(f"fixed edge set closes a cycle at {(u, v)}")


def maximal_subforest(g: Graph, order: EdgeOrder, fixed: Iterable[Edge] = (),
                      with_witnesses: bool = False) -> ForestResult:
    """Delete from each simple cycle its order-least edge outside `fixed`.

    Greedy realization: insert fixed edges, then the remaining edges in
    decreasing order; an edge is deleted exactly when it would close a
    cycle.  Pure function of (graph, potentials, tiebreak, fixed).
    """
    h = frozenset(fixed)
    _check_fixed(g, h)
    uf = UnionFind(g.vertices)
    for u, v in sorted(h):
        uf.union(u, v)
    kept = set(h)
    deleted = []
    rest = sorted((e for e in g.edges if e not in h), key=order.key, reverse=True)
    for e in rest:
        if uf.union(*e):
            kept.add(e)
        else:
            deleted.append(e)
    witness = None
    if with_witnesses:
        witness = {e: _fundamental_cycle(g, kept, e) for e in deleted}
    return ForestResult(kept=frozenset(kept), deleted=frozenset(deleted),
                        fixed=h, witness=witness)


def _kept_path(g: Graph, kept: frozenset[Edge], u: int, v: int) -> list[Edge] | None:
    """Unique path between u and v inside the kept forest, as edges."""
    adj: dict[int, list[int]] = {x: [] for x in g.vertices}
    for a, b in kept:
        adj[a].append(b)
        adj[b].append(a)
    prev = {u: u}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                stack.append(y)
    if v not in prev:
        return None
    path = []
    x = v
    while x != u:
        path.append(tuple(sorted((x, prev[x]))))
        x = prev[x]
    return path[::-1]


def _fundamental_cycle(g: Graph, kept, e: Edge) -> tuple[Edge, ...]:
    path = _kept_path(g, frozenset(kept), *e)
    if path is None:
        return (e,)
    return tuple([e] + path)


def maximal_subforest_oracle(g: Graph, order: EdgeOrder, fixed: Iterable[Edge] = (),
                             limit: int = 100_000) -> ForestResult:
    """Literal reading: enumerate every simple cycle, mark its order-least
    non-fixed edge, delete all marked edges simultaneously.

    Exponential; for cross-checking the greedy on small graphs.
    """
    h = frozenset(fixed)
    _check_fixed(g, h)
    marked: set[Edge] = set()
    for cyc in simple_cycles(g, limit=limit):
        candidates = [e for e in cyc if e not in h]
        # nonempty: a cycle inside the acyclic fixed set is impossible
        marked.add(min(candidates, key=order.key))
    kept = frozenset(g.edges - marked)
    return ForestResult(kept=kept, deleted=frozenset(marked), fixed=h)


def fmsf(g: Graph, labels: dict[Edge, object]) -> frozenset[Edge]:
    """Classical free minimal spanning forest: delete the largest-label edge
    of each cycle.

    Implemented independently of the greedy (per-edge connectivity search on
    the smaller-label subgraph) so it can serve as a cross-check.
    """
    for e in g.edges:
        if e not in labels:
            raise UnknownId(f"label missing for edge {e}")
    vals = [labels[e] for e in g.edges]
    if len(set(vals)) != len(vals):
        raise DuplicateLabel("edge labels are not injective")
    kept = set()
    for e in sorted(g.edges):
        below = [f for f in g.edges if f != e and labels[f] < labels[e]]
        adj: dict[int, list[int]] = {x: [] for x in g.vertices}
        for a, b in below:
            adj[a].append(b)
            adj[b].append(a)
        u, v = e
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if v not in seen:
            kept.add(e)
    return frozenset(kept)


class CutWitnessReport(NamedTuple):
    violations: tuple[tuple[Edge, str], ...]
    witnesses: dict[Edge, Edge]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_cut_witnesses(g: Graph, result: ForestResult, order: EdgeOrder) -> CutWitnessReport:
    """Verify the finite step of the increasing-sequence argument.

    For each deleted edge e: if its endpoints are joined in the kept forest,
    every non-fixed edge on that path must be order-greater than e (the
    fundamental cycle witnesses the deletion, and cutting any such greater
    edge leaves e crossing a cut with a greater partner).  If the endpoints
    lie in distinct kept components, some other non-fixed boundary edge of
    the component must be order-greater.  Report-only.
    """
    violations: list[tuple[Edge, str]] = []
    witnesses: dict[Edge, Edge] = {}
    kept = result.kept
    for e in sorted(result.deleted):
        path = _kept_path(g, kept, *e)
        if path is not None:
            loose = [f for f in path if f not in result.fixed]
            bad = [f for f in loose if order.key(f) < order.key(e)]
            if bad:
                violations.append((e, f"kept-path edge {bad[0]} is below the deleted edge"))
            elif loose:
                witnesses[e] = max(loose, key=order.key)
            continue
        comp = _kept_component(g, kept, e[0])
        partners = [
            f for f in g.edges
            if f != e and f not in result.fixed
            and (f[0] in comp) != (f[1] in comp)
            and order.key(f) > order.key(e)
        ]
        if partners:
            witnesses[e] = min(partners, key=order.key)
        else:
            violations.append((e, "no greater boundary partner for a cut edge"))
    return CutWitnessReport(violations=tuple(violations), witnesses=witnesses)


def _kept_component(g: Graph, kept, start: int) -> set[int]:
    adj: dict[int, list[int]] = {x: [] for x in g.vertices}
    for a, b in kept:
        adj[a].append(b)
        adj[b].append(a)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def restrict_forest(g: Graph, result: ForestResult, order: EdgeOrder,
                    Y: Iterable[int]) -> ForestResult:
    """Restrict a forest result to a cycle-invariant connected vertex set.

    Verifies the restriction property: restricting must equal recomputing on
    the induced subgraph with the restricted order and fixed set.
    """
    yset = set(Y)
    if not is_connected_set(g, yset):
        raise NotConnected("restriction set is empty or not connected")
    if not is_cycle_invariant(g, yset):
        raise NotCycleInvariant("restriction set is not cycle-invariant")
    inside = lambda e: e[0] in yset and e[1] in yset
    restricted = ForestResult(
        kept=frozenset(e for e in result.kept if inside(e)),
        deleted=frozenset(e for e in result.deleted if inside(e)),
        fixed=frozenset(e for e in result.fixed if inside(e)),
    )
    sub = induced_subgraph(g, yset)
    recomputed = maximal_subforest(sub, order.restrict(sub), restricted.fixed)
    if recomputed.kept != restricted.kept:
        raise InvariantViolation(
            "restriction differs from recomputation on the induced subgraph")
    return restricted


def is_acyclic(g: Graph, edges: Iterable[Edge]) -> bool:
    uf = UnionFind(g.vertices)
    return all(uf.union(u, v) for u, v in sorted(edges))
