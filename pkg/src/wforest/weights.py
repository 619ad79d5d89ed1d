"""Relative weight functions (cocycles), basepoint potentials, and the
strict total order on edges that drives the cycle-cutting algorithm.

Exact rational arithmetic is the default: the generated families only ever
produce ratios that are powers of small integers, and the edge order must be
deterministic — float ties would corrupt the forest.  A log-float mode with
tolerance 1e-9 exists as a fallback for user-supplied weights.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    CrossComponent,
    InvalidCocycle,
    MissingVertex,
    NonPositiveWeight,
)
from .graph import Edge, Graph, components, edge

EXACT = "exact"
LOG_FLOAT = "log-float"
DEFAULT_LOG_TOL = 1e-9


def _as_weight(x, mode: str):
    if mode == EXACT:
        val = Fraction(x)
    else:
        val = float(x)
    if val <= 0:
        raise NonPositiveWeight(f"weight {x!r} is not positive")
    return val


@dataclass(frozen=True)
class Cocycle:
    """Positive ratio per directed edge with product 1 around every cycle.

    ``ratio(x, y)`` is the weight of x relative to y, for adjacent x, y.
    """
    ratios: dict[tuple[int, int], Fraction | float]
    mode: str = EXACT

    def ratio(self, x: int, y: int):
        try:
            return self.ratios[(x, y)]
        except KeyError:
            raise MissingVertex(f"no ratio stored for directed edge ({x}, {y})") from None


def cocycle_from_potential(g: Graph, potential: Mapping[int, object],
                           mode: str = EXACT) -> Cocycle:
    """ratio(x, y) := potential(x) / potential(y) on every edge."""
    vals = {}
    for v in g.vertices:
        if v not in potential:
            raise MissingVertex(f"potential missing vertex {v}")
        vals[v] = _as_weight(potential[v], mode)
    ratios: dict[tuple[int, int], Fraction | float] = {}
    for u, v in g.edges:
        ratios[(u, v)] = vals[u] / vals[v]
        ratios[(v, u)] = vals[v] / vals[u]
    return Cocycle(ratios=ratios, mode=mode)


class CocycleReport(NamedTuple):
    ok: bool
    worst_defect: float            # |log of cycle product|, 0.0 when exact
    worst_cycle: tuple[int, ...]   # vertex sequence of the worst cycle, or ()


def validate_cocycle(g: Graph, c: Cocycle, tol: float = DEFAULT_LOG_TOL) -> CocycleReport:
    """Check the cocycle identity on every fundamental cycle of a BFS forest.

    Sufficient because every cycle is a symmetric difference of fundamental
    cycles.  Also checks ratio(x,y) * ratio(y,x) = 1 per edge.  Report-only.
    """
    worst = 0.0
    worst_cycle: tuple[int, ...] = ()

    def defect_of(product) -> float:
        if c.mode == EXACT:
            return 0.0 if product == 1 else abs(math.log(float(product)))
        return abs(math.log(product))

    for u, v in sorted(g.edges):
        d = defect_of(c.ratio(u, v) * c.ratio(v, u))
        if d > worst:
            worst, worst_cycle = d, (u, v, u)

    parent: dict[int, int | None] = {}
    value: dict[int, Fraction | float] = {}
    for comp in components(g):
        root = comp[0]
        parent[root] = None
        value[root] = Fraction(1) if c.mode == EXACT else 1.0
        queue = [root]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for y in g.adjacency[x]:
                if y in value:
                    continue
                value[y] = c.ratio(y, x) * value[x]
                parent[y] = x
                queue.append(y)
    # value[x] is the tree-path product from x down to its root: for a
    # non-tree edge (u,v), the fundamental-cycle product is
    # ratio(u,v) * value(v) / value(u).
    for u, v in sorted(g.edges):
        if parent.get(u) == v or parent.get(v) == u:
            continue
        prod = c.ratio(u, v) * value[v] / value[u]
        d = defect_of(prod)
        if d > worst:
            worst, worst_cycle = d, _tree_cycle(parent, u, v)
    ok = worst == 0.0 if c.mode == EXACT else worst <= tol
    return CocycleReport(ok=ok, worst_defect=worst, worst_cycle=worst_cycle)


def _tree_cycle(parent, u, v):
    def chain(x):
        out = [x]
        while parent.get(x) is not None:
            x = parent[x]
            out.append(x)
        return out
    cu, cv = chain(u), chain(v)
    common = set(cu) & set(cv)
    cu = cu[: next(i for i, x in enumerate(cu) if x in common) + 1]
    cv = cv[: next(i for i, x in enumerate(cv) if x in common) + 1]
    return tuple(cu + cv[-2::-1])


@dataclass(frozen=True)
class Potential:
    """Absolute weights on one component obtained by fixing a basepoint."""
    base: int
    values: dict[int, Fraction | float]

    def __getitem__(self, v: int):
        try:
            return self.values[v]
        except KeyError:
            raise MissingVertex(f"vertex {v} outside the potential's component") from None


def potential_from_cocycle(g: Graph, c: Cocycle, base: int,
                           tol: float = DEFAULT_LOG_TOL) -> Potential:
    """value(x) = product of ratios along any path from x to base; value(base)=1.

    Raises InvalidCocycle if two paths disagree (beyond tol in float mode).
    """
    if base not in g.adjacency:
        raise MissingVertex(f"basepoint {base} not in graph")
    one = Fraction(1) if c.mode == EXACT else 1.0
    values: dict[int, Fraction | float] = {base: one}
    queue = [base]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for y in g.adjacency[x]:
            w = c.ratio(y, x) * values[x]
            if y in values:
                if c.mode == EXACT:
                    bad = values[y] != w
                else:
                    bad = abs(math.log(values[y] / w)) > tol
                if bad:
                    raise InvalidCocycle(
                        f"path-dependent value at vertex {y}: {values[y]} vs {w}")
            else:
                values[y] = w
                queue.append(y)
    return Potential(base=base, values=values)


class EdgeOrder:
    """The strict total order: first by edge weight min of endpoint
    potentials, then by an injective tiebreak rank.

    Comparisons are invariant under rescaling a component's potential by a
    positive constant, so the order does not depend on basepoints.
    """

    def __init__(self, g: Graph, potential: Mapping[int, object],
                 tiebreak: Sequence[Edge] | Mapping[Edge, int] | None = None,
                 mode: str = EXACT):
        self.graph = g
        self.potential = {}
        for v in g.vertices:
            if v not in potential:
                raise MissingVertex(f"potential missing vertex {v}")
            self.potential[v] = _as_weight(potential[v], mode)
        if tiebreak is None:
            tiebreak = g.sorted_edges()
        if isinstance(tiebreak, Mapping):
            self.rank = dict(tiebreak)
        else:
            self.rank = {e: i for i, e in enumerate(tiebreak)}
        for e in g.edges:
            if e not in self.rank:
                raise ValueError(f"tiebreak missing edge {e}")
        if len(set(self.rank[e] for e in g.edges)) != len(g.edges):
            raise ValueError("tiebreak ranks are not injective")
        self._component: dict[int, int] = {}
        for comp in components(g):
            for v in comp:
                self._component[v] = comp[0]

    def weight(self, e: Edge):
        return min(self.potential[e[0]], self.potential[e[1]])

    def key(self, e: Edge):
        return (self.weight(e), self.rank[e])

    def same_component(self, e1: Edge, e2: Edge) -> bool:
        return self._component[e1[0]] == self._component[e2[0]]

    def restrict(self, sub: Graph) -> "EdgeOrder":
        """The same order on a subgraph (weights and ranks carried over)."""
        return EdgeOrder(sub, self.potential,
                         {e: self.rank[e] for e in sub.edges})


def compare_edges(o: EdgeOrder, e1: Edge, e2: Edge) -> int:
    """-1 if e1 comes first, +1 if e2 does; never 0 for distinct edges."""
    e1, e2 = edge(*e1), edge(*e2)
    if e1 == e2:
        raise ValueError("compare_edges requires distinct edges")
    if not o.same_component(e1, e2):
        raise CrossComponent(f"{e1} and {e2} lie in different components")
    return -1 if o.key(e1) < o.key(e2) else 1


def unit_potential(g: Graph) -> dict[int, Fraction]:
    return {v: Fraction(1) for v in g.vertices}


def level_potential(g: Graph, base_ratio=Fraction(1, 2)) -> dict[int, Fraction]:
    """Potential base_ratio**level from per-vertex level metadata.

    With base_ratio 1/k this realizes the grandparent-family weights, where
    the ratio across a parent->child edge is 1/k.
    """
    levels = g.meta.get("levels")
    if not levels:
        raise MissingVertex("graph has no per-vertex levels in meta")
    r = Fraction(base_ratio)
    if r <= 0:
        raise NonPositiveWeight(f"base ratio {base_ratio} is not positive")
    out = {}
    for v in g.vertices:
        if v not in levels:
            raise MissingVertex(f"no level for vertex {v}")
        out[v] = r ** levels[v]
    return out


def rescale(potential: Mapping[int, object], factor, vertices: Iterable[int]) -> dict:
    """Scale the potential on the given vertices by a positive constant."""
    f = Fraction(factor)
    if f <= 0:
        raise NonPositiveWeight(f"scale factor {factor} is not positive")
    out = dict(potential)
    for v in vertices:
        out[v] = out[v] * f
    return out
