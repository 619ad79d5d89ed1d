"""Seeded Bernoulli bond percolation, cluster analysis, the free weighted
maximal spanning forest over a configuration, and sweep harnesses.

All randomness is counter-based and keyed by (seed, domain, edge index), so
edge decisions are order-independent: the same seed gives monotone-coupled
configurations across p, and records are byte-reproducible.
"""

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping

from .errors import (
    BadProbability,
    InvariantViolation,
    NotAutomorphism,
    NotWeightPreserving,
    UnknownEdge,
)
from .ends import ProxyParams, qualifying_side_counts
from .forest import ForestResult, check_cut_witnesses, maximal_subforest
from .graph import Edge, Graph, components, edge, spanned_subgraph
from .rng import subseed, threshold, u64
from .unionfind import UnionFind
from .weights import EdgeOrder, cocycle_from_potential, potential_from_cocycle


@dataclass(frozen=True)
class PercolationConfig:
    host: Graph
    open_edges: frozenset[Edge]
    p: float
    seed: int
    edits: tuple[tuple[str, Edge], ...] = ()


def edge_indices(g: Graph) -> dict[Edge, int]:
    """Canonical per-edge draw indices: position in the sorted edge list."""
    return {e: i for i, e in enumerate(g.sorted_edges())}


def bernoulli_sample(g: Graph, p: float, seed: int) -> PercolationConfig:
    """Each edge open independently with probability p, decided by comparing
    its keyed 64-bit draw against the p-threshold (hence monotone in p)."""
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"p={p} outside [0, 1]")
    cut = threshold(p)
    open_edges = frozenset(
        e for e, i in edge_indices(g).items() if u64(seed, "open", i) < cut
    )
    return PercolationConfig(host=g, open_edges=open_edges, p=p, seed=seed)


def full_config(g: Graph) -> PercolationConfig:
    return PercolationConfig(host=g, open_edges=frozenset(g.edges), p=1.0, seed=0)


def insert_edge(cfg: PercolationConfig, e: Edge) -> PercolationConfig:
    e = edge(*e)
    if e not in cfg.host.edges:
        raise UnknownEdge(f"edge {e} not in host graph")
    return replace(cfg, open_edges=cfg.open_edges | {e},
                   edits=cfg.edits + (("insert", e),))


def delete_edge(cfg: PercolationConfig, e: Edge) -> PercolationConfig:
    e = edge(*e)
    if e not in cfg.host.edges:
        raise UnknownEdge(f"edge {e} not in host graph")
    return replace(cfg, open_edges=cfg.open_edges - {e},
                   edits=cfg.edits + (("delete", e),))


@dataclass(frozen=True)
class LabelAssignment:
    """Uniform 64-bit label per edge; the derived tiebreak puts larger
    labels earlier (so the order-least edge of a cycle has the largest
    label, matching minimal-forest deletion)."""
    labels: dict[Edge, int]
    collisions: tuple[tuple[Edge, Edge], ...] = ()

    def ranks(self, edges=None) -> dict[Edge, int]:
        pool = sorted(self.labels if edges is None else edges)
        ordered = sorted(pool, key=lambda e: (-self.labels[e], e))
        return {e: i for i, e in enumerate(ordered)}


def assign_labels(g: Graph, seed: int) -> LabelAssignment:
    labels = {e: u64(seed, "label", i) for e, i in edge_indices(g).items()}
    by_value: dict[int, list[Edge]] = {}
    for e, val in labels.items():
        by_value.setdefault(val, []).append(e)
    collisions = []
    for val, es in sorted(by_value.items()):
        if len(es) > 1:
            es.sort()
            collisions.extend((es[i], es[i + 1]) for i in range(len(es) - 1))
    return LabelAssignment(labels=labels, collisions=tuple(collisions))


def fwmsf(cfg: PercolationConfig, potential: Mapping[int, object],
          labels: LabelAssignment) -> ForestResult:
    """Weighted maximal subforest of the open subgraph under the random
    tiebreak; the weighted generalization of the free minimal forest."""
    sub = spanned_subgraph(cfg.host, cfg.open_edges)
    order = EdgeOrder(sub, potential, labels.ranks(sub.edges))
    return maximal_subforest(sub, order)


@dataclass(frozen=True)
class ClusterInfo:
    vertices: tuple[int, ...]
    mass: Fraction
    cls: str                      # "heavy" | "light"
    nonvanishing_side_count_max: int


@dataclass(frozen=True)
class ClusterReport:
    clusters: tuple[ClusterInfo, ...]
    counts: dict


def cluster_report(cfg: PercolationConfig, potential: Mapping[int, object],
                   params: ProxyParams, side_counts: bool = True) -> ClusterReport:
    """Clusters of the open subgraph with masses relative to each cluster's
    heaviest vertex, heavy/light proxy classes, and (optionally) the max
    number of nonvanishing-proxy sides over single-vertex furcations."""
    sub = spanned_subgraph(cfg.host, cfg.open_edges)
    flagged = cfg.host.boundary_vertices()
    side_max: dict[int, int] = {}
    if side_counts:
        relpot_all: dict[int, Fraction] = {}
        for comp in components(sub):
            top = max(Fraction(potential[v]) for v in comp)
            for v in comp:
                relpot_all[v] = Fraction(potential[v]) / top
        qual = lambda v: v in flagged and relpot_all[v] >= params.nonvanish_delta
        side_max = qualifying_side_counts(sub, qual)
    infos = []
    n_heavy = 0
    for comp in components(sub):
        top = max(Fraction(potential[v]) for v in comp)
        rel = {v: Fraction(potential[v]) / top for v in comp}
        mass = sum(rel.values())
        touches = any(v in flagged and rel[v] >= params.nonvanish_delta for v in comp)
        cls = "heavy" if (mass >= params.heavy_tau or touches) else "light"
        n_heavy += cls == "heavy"
        infos.append(ClusterInfo(
            vertices=comp,
            mass=mass,
            cls=cls,
            nonvanishing_side_count_max=max((side_max.get(v, 0) for v in comp),
                                            default=0),
        ))
    counts = {
        "count": len(infos),
        "heavy": n_heavy,
        "light": len(infos) - n_heavy,
        "largest": max((len(c.vertices) for c in infos), default=0),
    }
    return ClusterReport(clusters=tuple(infos), counts=counts)


def largest_cluster_fraction(cfg: PercolationConfig) -> float:
    uf = UnionFind(cfg.host.vertices)
    for u, v in sorted(cfg.open_edges):
        uf.union(u, v)
    if not cfg.host.vertices:
        return 0.0
    return max(uf.size[uf.find(v)] for v in cfg.host.vertices) / len(cfg.host.vertices)


def _apply_vertex_map(sigma: Mapping[int, int], e: Edge) -> Edge:
    return edge(sigma[e[0]], sigma[e[1]])


def equivariance_check(g: Graph, potential: Mapping[int, object],
                       sigma: Mapping[int, int], labels: LabelAssignment,
                       cfg: PercolationConfig | None = None) -> bool:
    """The forest must transport along a weight-preserving automorphism the
    same way its inputs do: pushing labels (and the configuration) forward
    through sigma pushes the forest forward edge-for-edge."""
    if sorted(sigma) != list(g.vertices) or sorted(sigma.values()) != list(g.vertices):
        raise NotAutomorphism("sigma is not a vertex bijection of the graph")
    image = {_apply_vertex_map(sigma, e) for e in g.edges}
    if image != set(g.edges):
        raise NotAutomorphism("sigma does not preserve the edge set")
    pot = {v: Fraction(potential[v]) for v in g.vertices}
    for comp in components(g):
        scale = pot[sigma[comp[0]]] / pot[comp[0]]
        for v in comp:
            if pot[sigma[v]] != pot[v] * scale:
                raise NotWeightPreserving(
                    f"potential not preserved up to a constant at vertex {v}")
    if cfg is None:
        cfg = full_config(g)
    pushed_labels = LabelAssignment(
        labels={_apply_vertex_map(sigma, e): val for e, val in labels.labels.items()},
        collisions=labels.collisions,
    )
    pushed_cfg = replace(cfg, open_edges=frozenset(
        _apply_vertex_map(sigma, e) for e in cfg.open_edges))
    base = fwmsf(cfg, potential, labels)
    moved = fwmsf(pushed_cfg, potential, pushed_labels)
    pushed_kept = frozenset(_apply_vertex_map(sigma, e) for e in base.kept)
    return pushed_kept == moved.kept


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def sweep(g: Graph, potential: Mapping[int, object], p_grid, trials: int,
          seed: int, params: ProxyParams, n_basepoints: int = 8) -> list[dict]:
    """One record per (p, trial): configuration stats, forest stats, and a
    visibility summary at deterministic basepoints.  Each run re-derives its
    own seed from (seed, p index, trial), so records are independent of
    execution order and reproducible byte-for-byte."""
    if trials < 1:
        raise BadProbability("trials must be >= 1")
    records = []
    for pi, p in enumerate(p_grid):
        for t in range(trials):
            run_seed = subseed(seed, "run", pi, t)
            records.append(_run_once(g, potential, float(p), t, run_seed, params,
                                     n_basepoints))
    return records


def _run_once(g: Graph, potential, p: float, trial: int, run_seed: int,
              params: ProxyParams, n_basepoints: int) -> dict:
    cfg = bernoulli_sample(g, p, run_seed)
    labels = assign_labels(g, run_seed)
    forest = fwmsf(cfg, potential, labels)
    report = cluster_report(cfg, potential, params)
    sub = spanned_subgraph(g, cfg.open_edges)

    # forest trees coincide with clusters on a finite host; count the trees
    # whose internal structure shows >= 3 nonvanishing-proxy directions
    kept_sub = spanned_subgraph(g, forest.kept)
    flagged = g.boundary_vertices()
    relpot: dict[int, Fraction] = {}
    for comp in components(kept_sub):
        top = max(Fraction(potential[v]) for v in comp)
        for v in comp:
            relpot[v] = Fraction(potential[v]) / top
    qual = lambda v: v in flagged and relpot[v] >= params.nonvanish_delta
    tree_side = qualifying_side_counts(kept_sub, qual)
    tree_max: dict[int, int] = {}
    tree_of: dict[int, int] = {}
    for comp in components(kept_sub):
        for v in comp:
            tree_of[v] = comp[0]
        tree_max[comp[0]] = max(tree_side[v] for v in comp)
    trees_3plus = sum(1 for m in tree_max.values() if m >= 3)

    _assert_heavy_split_witnesses(g, forest, report, potential, tree_of)
    sub_order = EdgeOrder(sub, potential, labels.ranks(sub.edges))
    witness_report = check_cut_witnesses(sub, forest, sub_order)
    if not witness_report.ok:
        raise InvariantViolation(
            f"cut-witness violation in sweep run (p={p}, seed={run_seed})")

    coc = cocycle_from_potential(sub, potential)
    baseclusters = sorted(report.clusters,
                          key=lambda c: (-len(c.vertices), c.vertices[0]))
    basepoints = []
    for c in baseclusters[:n_basepoints]:
        top = max(c.vertices, key=lambda v: (Fraction(potential[v]), -v))
        basepoints.append(top)
    masses = []
    vis_heavy = 0
    for x in basepoints:
        pot_x = potential_from_cocycle(sub, coc, x)
        seen = {x}
        stack = [x]
        while stack:
            v = stack.pop()
            for y in sub.adjacency[v]:
                if y not in seen and pot_x[y] <= 1:
                    seen.add(y)
                    stack.append(y)
        mass = sum(pot_x[y] for y in seen)
        touches = any(y in flagged and pot_x[y] >= params.nonvanish_delta
                      for y in seen)
        cls_heavy = mass >= params.heavy_tau or touches
        vis_heavy += cls_heavy
        masses.append(_fraction_str(Fraction(mass)))

    return {
        "p": p,
        "trial": trial,
        "seed": run_seed,
        "host_edges": len(g.edges),
        "clusters": {
            "count": report.counts["count"],
            "heavy": report.counts["heavy"],
            "light": report.counts["light"],
            "largest_fraction": report.counts["largest"] / len(g.vertices),
            "max_nonvanishing_sides": max(
                (c.nonvanishing_side_count_max for c in report.clusters), default=0),
            "clusters_with_3plus_sides": sum(
                1 for c in report.clusters if c.nonvanishing_side_count_max >= 3),
        },
        "forest": {
            "kept": len(forest.kept),
            "deleted": len(forest.deleted),
            "trees": len(tree_max),
            "trees_with_3plus_nonvanishing_dirs": trees_3plus,
            "witness_violations": 0,
        },
        "visibility": {
            "basepoints": basepoints,
            "masses": masses,
            "heavy": vis_heavy,
        },
        "open": len(cfg.open_edges),
        "label_collisions": len(labels.collisions),
    }


def _assert_heavy_split_witnesses(g, forest: ForestResult, report: ClusterReport,
                                  potential, tree_of) -> None:
    """Finite shadow of heavy-splits-into-heavy: a forest tree inside a
    split heavy cluster must hold a vertex at least as heavy as its least
    deleted boundary edge."""
    for cluster in report.clusters:
        if cluster.cls != "heavy":
            continue
        members = set(cluster.vertices)
        roots = {tree_of[v] for v in members}
        if len(roots) <= 1:
            continue  # the forest spans this cluster; nothing was split off
        for root in sorted(roots):
            tree_vs = {v for v in members if tree_of[v] == root}
            boundary = [
                e for e in forest.deleted
                if (e[0] in tree_vs) != (e[1] in tree_vs)
                and e[0] in members and e[1] in members
            ]
            if not boundary:
                continue
            least = min(min(Fraction(potential[e[0]]), Fraction(potential[e[1]]))
                        for e in boundary)
            if not any(Fraction(potential[v]) >= least for v in tree_vs):
                raise InvariantViolation(
                    "split heavy cluster lost its weight witness")


def records_to_jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n"
                   for r in records)


def summary_csv(records: list[dict]) -> str:
    """One row per (p, statistic), averaged over trials."""
    stats = (
        ("open_fraction", lambda r: r["open"] / max(1, r["host_edges"])),
        ("largest_cluster_fraction", lambda r: r["clusters"]["largest_fraction"]),
        ("heavy_clusters", lambda r: r["clusters"]["heavy"]),
        ("clusters_with_3plus_sides", lambda r: r["clusters"]["clusters_with_3plus_sides"]),
        ("trees_with_3plus_nonvanishing_dirs",
         lambda r: r["forest"]["trees_with_3plus_nonvanishing_dirs"]),
        ("visibility_heavy_basepoints", lambda r: r["visibility"]["heavy"]),
    )
    by_p: dict[float, list[dict]] = {}
    for r in records:
        by_p.setdefault(r["p"], []).append(r)
    lines = ["p,statistic,value"]
    for p in sorted(by_p):
        runs = by_p[p]
        for name, f in stats:
            value = sum(float(f(r)) for r in runs) / len(runs)
            lines.append(f"{p},{name},{value}")
    return "\n".join(lines) + "\n"
