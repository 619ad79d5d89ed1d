"""Command-line entry point: generate families, compute forests, run the
collapse pipeline, analyze ends proxies, and drive percolation sweeps.

Every command writes its outputs atomically and drops a manifest next to
the primary output recording the exact argv, input hashes, and output
hashes; `wforest rerun manifest.json` re-executes the recorded command and
verifies byte-identical outputs.  All randomness flows from --seed flags.
"""

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .ends import ProxyParams, collapsed_maximal_subforest, qualifying_side_counts
from .errors import BadParams, InvariantViolation, WForestError
from .forest import check_cut_witnesses, maximal_subforest, maximal_subforest_oracle
from .generators import build_family
from .graph import Graph, from_json, to_json
from .percolation import records_to_jsonl, summary_csv, sweep
from .weights import EdgeOrder, cocycle_from_potential, level_potential, unit_potential
from . import percolation as perc


def _sha256(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _atomic_write(path: str, data: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_with_manifest(command: str, argv: list[str], inputs: list[str],
                         outputs: dict[str, str], seed) -> None:
    for path, data in outputs.items():
        _atomic_write(path, data)
    manifest = {
        "tool": "wforest",
        "version": __version__,
        "command": command,
        "argv": argv,
        "inputs": {p: _sha256(open(p, "rb").read()) for p in inputs},
        "outputs": {p: _sha256(d.encode()) for p, d in outputs.items()},
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    primary = next(iter(outputs))
    _atomic_write(primary + ".manifest.json",
                  json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def load_graph(path: str) -> Graph:
    with open(path) as fh:
        return from_json(fh.read())


def load_weights(path: str, g: Graph) -> dict[int, Fraction]:
    """Weight JSON: explicit potential, level-derived, or unit."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("unit"):
        return unit_potential(g)
    if doc.get("levels_from_meta"):
        return level_potential(g, Fraction(doc.get("base_ratio", "1/2")))
    if "potential" in doc:
        return {int(k): Fraction(v) for k, v in doc["potential"].items()}
    raise BadParams(f"weight file {path} has no potential/levels_from_meta/unit key")


def _tiebreak(g: Graph, choice: str):
    if choice == "canonical":
        return None
    if choice == "meta":
        tb = g.meta.get("tiebreak")
        if not tb:
            raise BadParams("graph meta carries no tiebreak order")
        return [tuple(e) for e in tb]
    raise BadParams(f"unknown tiebreak {choice!r}")


def _edges_json(edges) -> list[list[int]]:
    return [list(e) for e in sorted(edges)]


def _forest_json(result, witness_report=None) -> str:
    doc = {
        "kept": _edges_json(result.kept),
        "deleted": _edges_json(result.deleted),
        "fixed": _edges_json(result.fixed),
    }
    if witness_report is not None:
        doc["cut_witnesses"] = {
            "ok": witness_report.ok,
            "violations": [[list(e), why] for e, why in witness_report.violations],
            "witnesses": [[list(e), list(w)]
                          for e, w in sorted(witness_report.witnesses.items())],
        }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_gen(args, argv) -> int:
    spec = {"family": args.family}
    for key in ("k", "up", "down", "d", "radius", "w", "h", "n", "m",
                "seed", "blades", "max_word"):
        val = getattr(args, key, None)
        if val is not None:
            spec[key] = val
    if args.factors:
        spec["factors"] = json.loads(args.factors)
    g = build_family(spec)
    _write_with_manifest("gen", argv, [], {args.output: to_json(g)},
                         getattr(args, "seed", None))
    return 0


def cmd_forest(args, argv) -> int:
    g = load_graph(args.graph)
    potential = load_weights(args.weights, g)
    order = EdgeOrder(g, potential, _tiebreak(g, args.tiebreak))
    fixed = ()
    inputs = [args.graph, args.weights]
    if args.fixed:
        with open(args.fixed) as fh:
            doc = json.load(fh)
        fixed = [tuple(e) for e in (doc["edges"] if isinstance(doc, dict) else doc)]
        inputs.append(args.fixed)
    engine = maximal_subforest_oracle if args.oracle else maximal_subforest
    result = engine(g, order, fixed)
    report = check_cut_witnesses(g, result, order) if args.check_witnesses else None
    _write_with_manifest("forest", argv, inputs,
                         {args.output: _forest_json(result, report)}, None)
    return 0


def _proxy_params(args) -> ProxyParams:
    return ProxyParams(nonvanish_delta=Fraction(args.delta),
                       heavy_tau=Fraction(args.tau))


def cmd_collapse(args, argv) -> int:
    g = load_graph(args.graph)
    potential = load_weights(args.weights, g)
    params = _proxy_params(args)
    res = collapsed_maximal_subforest(g, potential, _tiebreak(g, args.tiebreak),
                                      params, s_max=args.smax)
    family_doc = {
        "blocks": [list(b) for b in res.family.blocks],
        "phases": list(res.family.phases),
        "quotient": {"vertices": len(res.quot.qgraph.vertices),
                     "edges": len(res.quot.qgraph.edges)},
        "proxy_params": {"nonvanish_delta": str(params.nonvanish_delta),
                         "heavy_tau": str(params.heavy_tau)},
    }
    _write_with_manifest("collapse", argv, [args.graph, args.weights], {
        args.output: _forest_json(res.forest),
        args.family_out: json.dumps(family_doc, sort_keys=True,
                                    separators=(",", ":")) + "\n",
    }, None)
    return 0


def cmd_analyze(args, argv) -> int:
    from .graph import components
    from .ends import maximal_disjoint_furcations, quotient
    from .weights import potential_from_cocycle

    g = load_graph(args.graph)
    potential = load_weights(args.weights, g)
    params = _proxy_params(args)
    flagged = g.boundary_vertices()
    qual = lambda v: v in flagged and potential[v] >= params.nonvanish_delta
    counts = qualifying_side_counts(g, qual)
    comps = []
    for comp in components(g):
        comps.append({
            "size": len(comp),
            "least_vertex": comp[0],
            "furcation_vertex_counts": {
                str(n): sum(1 for v in comp if counts[v] >= n) for n in (1, 2, 3)
            },
        })
    family = maximal_disjoint_furcations(g, potential, params, s_max=args.smax)
    quot = quotient(g, potential, family.blocks)
    coc = cocycle_from_potential(g, potential)
    verts = list(g.vertices)
    if len(verts) > args.max_basepoints:
        stride = len(verts) / args.max_basepoints
        verts = [verts[int(i * stride)] for i in range(args.max_basepoints)]
    masses = []
    for x in verts:
        pot_x = potential_from_cocycle(g, coc, x)
        vis = _bounded_visibility(g, pot_x, x)
        masses.append(float(sum(pot_x[y] for y in vis)))
    masses.sort()
    quantiles = {}
    for q in (0.0, 0.25, 0.5, 0.75, 1.0):
        idx = min(len(masses) - 1, int(q * (len(masses) - 1) + 0.5))
        quantiles[str(q)] = masses[idx] if masses else 0.0
    report = {
        "components": comps,
        "family": {"blocks": [list(b) for b in family.blocks],
                   "phases": list(family.phases)},
        "quotient": {"vertices": len(quot.qgraph.vertices),
                     "edges": len(quot.qgraph.edges)},
        "visibility": {"basepoints": len(verts), "mass_quantiles": quantiles},
        "proxy_params": {"nonvanish_delta": str(params.nonvanish_delta),
                         "heavy_tau": str(params.heavy_tau)},
    }
    _write_with_manifest("analyze", argv, [args.graph, args.weights], {
        args.output: json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n",
    }, None)
    return 0


def _bounded_visibility(g, pot_x, x):
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for y in g.adjacency[v]:
            if y not in seen and pot_x[y] <= 1:
                seen.add(y)
                stack.append(y)
    return seen


def cmd_percolate(args, argv) -> int:
    g = load_graph(args.graph)
    potential = load_weights(args.weights, g)
    params = _proxy_params(args)
    p_grid = [float(p) for p in args.p_grid.split(",") if p != ""]
    workers = int(os.environ.get("WFOREST_WORKERS", "1"))
    if workers > 1:
        records = _parallel_sweep(g, potential, p_grid, args.trials, args.seed,
                                  params, workers)
    else:
        records = sweep(g, potential, p_grid, args.trials, args.seed, params)
    outputs = {args.output: records_to_jsonl(records)}
    if args.summary:
        outputs[args.summary] = summary_csv(records)
    _write_with_manifest("percolate", argv, [args.graph, args.weights],
                         outputs, args.seed)
    return 0


def _parallel_sweep(g, potential, p_grid, trials, seed, params, workers):
    from concurrent.futures import ProcessPoolExecutor
    from .rng import subseed

    jobs = [(pi, p, t) for pi, p in enumerate(p_grid) for t in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = [
            pool.submit(perc._run_once, g, potential, float(p), t,
                        subseed(seed, "run", pi, t), params, 8)
            for pi, p, t in jobs
        ]
        results = [f.result() for f in futs]
    # records are keyed by submission order, which is the deterministic order
    return results


def cmd_rerun(args, argv) -> int:
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    rc = main(manifest["argv"])
    if rc != 0:
        return rc
    mismatched = []
    for path, digest in manifest["outputs"].items():
        with open(path, "rb") as fh:
            if _sha256(fh.read()) != digest:
                mismatched.append(path)
    if mismatched:
        raise InvariantViolation(
            f"rerun outputs differ from the manifest: {mismatched}")
    print(f"rerun ok: {len(manifest['outputs'])} outputs byte-identical")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wforest")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph family")
    g.add_argument("--family", required=True)
    for flag in ("k", "up", "down", "d", "radius", "w", "h", "n", "m",
                 "seed", "blades", "max-word"):
        g.add_argument(f"--{flag}", type=int, dest=flag.replace("-", "_"))
    g.add_argument("--factors", help="JSON list of factor FamilySpecs")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("forest", help="weighted maximal subforest")
    f.add_argument("graph")
    f.add_argument("weights")
    f.add_argument("--fixed")
    f.add_argument("--oracle", action="store_true")
    f.add_argument("--check-witnesses", action="store_true", dest="check_witnesses")
    f.add_argument("--tiebreak", default="canonical", choices=["canonical", "meta"])
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(func=cmd_forest)

    c = sub.add_parser("collapse", help="furcation collapse pipeline")
    c.add_argument("graph")
    c.add_argument("weights")
    c.add_argument("--delta", default="1")
    c.add_argument("--tau", default="4")
    c.add_argument("--smax", type=int, default=3)
    c.add_argument("--tiebreak", default="canonical", choices=["canonical", "meta"])
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--family-out", required=True, dest="family_out")
    c.set_defaults(func=cmd_collapse)

    a = sub.add_parser("analyze", help="furcation/visibility report")
    a.add_argument("graph")
    a.add_argument("weights")
    a.add_argument("--delta", default="1")
    a.add_argument("--tau", default="4")
    a.add_argument("--smax", type=int, default=3)
    a.add_argument("--max-basepoints", type=int, default=512, dest="max_basepoints")
    a.add_argument("-o", "--output", required=True)
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("percolate", help="Bernoulli sweep")
    p.add_argument("graph")
    p.add_argument("weights")
    p.add_argument("--p-grid", required=True, dest="p_grid")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", default="1")
    p.add_argument("--tau", default="4")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--summary")
    p.set_defaults(func=cmd_percolate)

    r = sub.add_parser("rerun", help="re-execute a manifest and verify outputs")
    r.add_argument("manifest")
    r.set_defaults(func=cmd_rerun)
    return ap


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args, list(argv))
    except InvariantViolation as exc:
        _err("invariant_violation", exc)
        return 3
    except WForestError as exc:
        _err(type(exc).__name__, exc)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        _err(type(exc).__name__, exc)
        return 2


def _err(code: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": str(exc)}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
