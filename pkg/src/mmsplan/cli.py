"""Command line front end: plan, bench, render and scene export.

Exit codes: 0 path found, 2 no path, 1 error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict
from typing import Optional

from . import render, scenes
from .bench import PRMParams, grid_rows, tightness_rows, to_csv
from .geometry.polygons import collides
from .geometry.primitives import rotation_at
from .manifolds import angle_primitive, segment_constraint_around, segment_primitive
from .planner import PlannerParams, construct_connectivity_graph, path_validate, query
from .prm import build_roadmap, default_resolution, prm_path_valid, prm_query
from .scenefile import FileFormatError, Query, config_to_dict, dump_query, dump_scene, load_query, load_scene, parse_rational

FOUND, NOT_FOUND, ERROR = 0, 2, 1


def resolve_scene(arg: str, query_arg: Optional[str] = None) -> tuple:
    """Scene and query from files, or a built-in scene name with its default query."""
    if os.path.exists(arg):
        scene = load_scene(arg)
        q = None
    elif arg in scenes.SCENES:
        scene, q = scenes.get(arg)
    else:
        raise FileFormatError(f"no scene file or built-in scene named {arg!r}")
    if query_arg:
        q = load_query(query_arg)
    return scene, q


def planner_params(args) -> PlannerParams:
    return PlannerParams(
        n_theta=args.ntheta,
        n_segments=args.nsegments,
        seed=args.seed,
        random_threshold=args.random_threshold,
        small_cell_size=args.small_cell,
        large_cell_size=args.large_cell,
        filtering=not args.no_filtering,
        heuristic=not args.no_heuristic,
        roi_full=args.roi_full,
    )


def graph_stats(g) -> dict:
    layer_comps = {g.find(n) for n in g.layer_nodes()}
    return {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "components": g.num_components,
        "layer_components": len(layer_comps),
        "layers": len(g.layers),
        "slabs": len(g.slabs),
        "generated": g.stats["generated"],
        "filtered": g.stats["filtered"],
        "query_slabs": g.stats["query_slabs"],
        "branches": dict(g.stats["branches"]),
    }


def run_plan(scene, q: Query, params: PlannerParams, svg_dir: Optional[str] = None, validate_samples: int = 100) -> dict:
    """Build, query, validate; the returned dict is the result file content."""
    result = {"scene": scene.name, "planner": "mms", "seed": params.seed, "params": asdict(params), "query": {"source": config_to_dict(q.source), "target": config_to_dict(q.target)}}
    for which, c in (("source", q.source), ("target", q.target)):
        if collides(scene, c):
            result.update(status="invalid-query", error=f"{which} configuration collides")
            return result
    t0 = time.perf_counter()
    g = construct_connectivity_graph(scene, params)
    t1 = time.perf_counter()
    path = query(g, scene, q.source, q.target, params=params)
    t2 = time.perf_counter()
    result["graph"] = graph_stats(g)
    result["timing"] = {"build": round(t1 - t0, 6), "query": round(t2 - t1, 6)}
    if path is None:
        result["status"] = "not-found"
        s_comp = _endpoint_component(g, q.source)
        t_comp = _endpoint_component(g, q.target)
        result["diagnostics"] = {"source_component": s_comp, "target_component": t_comp, "components": g.num_components}
    else:
        v = path_validate(scene, path, validate_samples)
        result["timing"]["validate"] = round(time.perf_counter() - t2, 6)
        result["status"] = "found" if v.ok else "invalid-path"
        result["validation"] = {"ok": v.ok, "checked": v.checked, "violation": v.violation}
        result["legs"] = [
            {"kind": leg.kind, "manifold": leg.manifold, "cell": leg.cell, "waypoints": [config_to_dict(w) for w in leg.waypoints]}
            for leg in path.legs
        ]
        result["waypoints"] = [config_to_dict(w) for w in path.waypoints]
    if svg_dir:
        write_svgs(svg_dir, scene, q, g, path)
    return result


def _endpoint_component(g, c) -> Optional[int]:
    layer = g.layer_for(c.rotation)
    if layer is None:
        return None
    for i, cell in enumerate(layer.fscs):
        if cell.contains(c.position) >= 0:
            return g.find(g.node_of[(layer.id, i)])
    return None


def write_svgs(svg_dir: str, scene, q, g, path) -> None:
    os.makedirs(svg_dir, exist_ok=True)
    with open(os.path.join(svg_dir, "layers.svg"), "w") as fh:
        fh.write(render.render_graph(g))
    with open(os.path.join(svg_dir, "path.svg"), "w") as fh:
        fh.write(render.render_path(scene, path, q.source, q.target))
    for mid in g.slabs[:8]:
        with open(os.path.join(svg_dir, f"slab-{g.slabs.index(mid):03d}.svg"), "w") as fh:
            fh.write(render.render_slab(g.manifolds[mid]))


def run_prm_plan(scene, q: Query, args) -> dict:
    res = args.resolution or default_resolution(scene)
    t0 = time.perf_counter()
    rm = build_roadmap(scene, args.budget, k=args.k, sample_fraction=args.sample_fraction, seed=args.seed, resolution=res)
    t1 = time.perf_counter()
    path = prm_query(rm, scene, q.source, q.target)
    t2 = time.perf_counter()
    out = {
        "scene": scene.name,
        "planner": "prm",
        "seed": args.seed,
        "params": {"budget": args.budget, "k": args.k, "sample_fraction": args.sample_fraction, "resolution": res},
        "graph": dict(rm.stats),
        "timing": {"build": round(t1 - t0, 6), "query": round(t2 - t1, 6)},
    }
    if path is None:
        out["status"] = "not-found"
    else:
        ok = prm_path_valid(scene, path, res / 2)
        out["status"] = "found" if ok else "invalid-path"
        out["waypoints"] = [{"x": x, "y": y, "theta": th} for x, y, th in path.waypoints]
    return out


def _ints(s: str) -> list:
    return [int(v) for v in s.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mmsplan", description="Exact manifold-sample motion planner for a polygon in the plane.")
    sub = ap.add_subparsers(dest="command", required=True)

    def planner_flags(p):
        p.add_argument("--ntheta", type=int, default=20)
        p.add_argument("--nsegments", type=int, default=512)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--random-threshold", type=float, default=0.2)
        p.add_argument("--small-cell", type=float, default=0.002)
        p.add_argument("--large-cell", type=float, default=0.05)
        p.add_argument("--no-filtering", action="store_true", help="decompose every generated segment")
        p.add_argument("--no-heuristic", action="store_true", help="random segments only")
        p.add_argument("--roi-full", action="store_true", help="always use the widest angular range")
        p.add_argument("--k", type=int, default=10, help="PRM neighbours")
        p.add_argument("--budget", type=int, default=2000, help="PRM iterations")
        p.add_argument("--sample-fraction", type=float, default=0.7, help="PRM share of uniform samples")
        p.add_argument("--resolution", type=float, default=None, help="PRM collision-check step")

    p = sub.add_parser("plan", help="answer one query")
    p.add_argument("scene", help="scene JSON file or built-in scene name")
    p.add_argument("query", nargs="?", help="query JSON file (default query of a built-in scene otherwise)")
    p.add_argument("--planner", choices=("mms", "prm"), default="mms")
    p.add_argument("--out", help="result JSON path (stdout if omitted)")
    p.add_argument("--svg-dir")
    p.add_argument("--validate-samples", type=int, default=100)
    planner_flags(p)

    b = sub.add_parser("bench", help="parameter grid or tightness sweep, CSV output")
    b.add_argument("--scenes", default="flower")
    b.add_argument("--grid-ntheta", default="10,20")
    b.add_argument("--grid-nsegments", default="256,512")
    b.add_argument("--seeds", type=int, default=5)
    b.add_argument("--mode", choices=("mms", "prm", "both"), default="mms")
    b.add_argument("--tightness", action="store_true", help="robot-scaling sweep on the tunnel scene")
    b.add_argument("--prm-budgets", default="500,1000,2000,4000,8000")
    b.add_argument("--out")
    planner_flags(b)

    r = sub.add_parser("render", help="SVG of a layer, a slab, or the layer atlas")
    r.add_argument("scene")
    r.add_argument("what", choices=("layer", "slab", "graph"))
    r.add_argument("--theta", type=float, default=0.0)
    r.add_argument("--segment", help="x0,y0,x1,y1 for a slab")
    r.add_argument("--half-width", type=float, default=0.5)
    r.add_argument("--out")
    planner_flags(r)

    e = sub.add_parser("scenes", help="write the built-in scenes and queries as JSON")
    e.add_argument("directory")
    return ap


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (FileFormatError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR


def _dispatch(args) -> int:
    if args.command == "plan":
        scene, q = resolve_scene(args.scene, args.query)
        if q is None:
            raise FileFormatError("a query file is required for scene files")
        if args.planner == "mms":
            result = run_plan(scene, q, planner_params(args), args.svg_dir, args.validate_samples)
        else:
            result = run_prm_plan(scene, q, args)
        _emit(json.dumps(result, indent=1, sort_keys=True) + "\n", args.out)
        if result["status"] == "found":
            return FOUND
        if result["status"] == "not-found":
            return NOT_FOUND
        print(f"error: {result.get('error', result['status'])}", file=sys.stderr)
        return ERROR
    if args.command == "bench":
        params = planner_params(args)
        seeds = list(range(args.seeds))
        prm = PRMParams(budget=args.budget, k=args.k, sample_fraction=args.sample_fraction, resolution=args.resolution)
        if args.tightness:
            rows = tightness_rows(params, seeds, prm, budgets=_ints(args.prm_budgets), with_prm=args.mode != "mms")
        else:
            grid = [(a, b) for a in _ints(args.grid_ntheta) for b in _ints(args.grid_nsegments)]
            if not grid:
                raise ValueError("empty parameter grid")
            rows = grid_rows(args.scenes.split(","), grid, seeds, params, args.mode, prm)
        _emit(to_csv(rows), args.out)
        return FOUND
    if args.command == "render":
        scene, q = resolve_scene(args.scene)
        if args.what == "layer":
            layer = angle_primitive(scene, rotation_at(args.theta))
            svg = render.render_layer(scene, layer)
        elif args.what == "slab":
            if not args.segment:
                raise ValueError("--segment x0,y0,x1,y1 is required for a slab")
            x0, y0, x1, y1 = (parse_rational(v) for v in args.segment.split(","))
            c = segment_constraint_around((x0, y0), (x1, y1), args.theta, args.half_width)
            svg = render.render_slab(segment_primitive(scene, c))
        else:
            g = construct_connectivity_graph(scene, planner_params(args))
            svg = render.render_graph(g)
        _emit(svg, args.out)
        return FOUND
    if args.command == "scenes":
        os.makedirs(args.directory, exist_ok=True)
        for name in sorted(scenes.SCENES):
            scene, q = scenes.get(name)
            dump_scene(scene, os.path.join(args.directory, f"{name}.scene.json"))
            dump_query(q, os.path.join(args.directory, f"{name}.query.json"))
        return FOUND
    raise ValueError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
