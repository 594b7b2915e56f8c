"""Benchmark harness: parameter grids, tightness sweeps, MMS against PRM."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, replace
from typing import Optional

from . import scenes
from .planner import PlannerParams, construct_connectivity_graph, path_validate, query
from .prm import build_roadmap, prm_query


@dataclass
class PRMParams:
    budget: int = 2000
    k: int = 10
    sample_fraction: float = 0.7
    resolution: Optional[float] = None
    cycles: bool = False


@dataclass
class RunResult:
    found: bool
    seconds: float
    stats: dict


def run_mms(scene, q, params: PlannerParams, validate: int = 0) -> RunResult:
    t0 = time.perf_counter()
    g = construct_connectivity_graph(scene, params)
    path = query(g, scene, q.source, q.target, params=params)
    dt = time.perf_counter() - t0
    ok = path is not None
    if ok and validate:
        ok = path_validate(scene, path, validate).ok
    stats = {"nodes": len(g.nodes), "edges": len(g.edges), "slabs": g.stats["slabs"], "generated": g.stats["generated"]}
    return RunResult(ok, dt, stats)


def run_prm(scene, q, params: PRMParams, seed: int) -> RunResult:
    t0 = time.perf_counter()
    rm = build_roadmap(scene, params.budget, k=params.k, sample_fraction=params.sample_fraction, seed=seed, resolution=params.resolution, cycles=params.cycles)
    path = prm_query(rm, scene, q.source, q.target)
    return RunResult(path is not None, time.perf_counter() - t0, dict(rm.stats))


def grid_rows(scene_names, grid, seeds, base: PlannerParams, mode: str = "mms", prm: Optional[PRMParams] = None) -> list:
    """One row per (planner, scene, grid cell) with median time and success rate."""
    rows = []
    for name in scene_names:
        scene, q = scenes.get(name)
        if mode in ("mms", "both"):
            for n_theta, n_segments in grid:
                runs = [run_mms(scene, q, replace(base, n_theta=n_theta, n_segments=n_segments, seed=s)) for s in seeds]
                rows.append(_summary("mms", name, runs, n_theta=n_theta, n_segments=n_segments))
        if mode in ("prm", "both"):
            prm = prm or PRMParams()
            runs = [run_prm(scene, q, prm, s) for s in seeds]
            rows.append(_summary("prm", name, runs, budget=prm.budget, k=prm.k))
    return rows


def _summary(planner: str, scene: str, runs: list, **extra) -> dict:
    row = {"planner": planner, "scene": scene}
    row.update(extra)
    row["seeds"] = len(runs)
    row["success_rate"] = sum(r.found for r in runs) / len(runs)
    row["median_time"] = statistics.median(r.seconds for r in runs)
    return row


def prm_time_to_success(scene, q, prm: PRMParams, seeds, budgets, rate: float = 0.8) -> dict:
    """Smallest budget in ``budgets`` reaching ``rate`` success, with its median time."""
    for b in budgets:
        runs = [run_prm(scene, q, replace(prm, budget=b), s) for s in seeds]
        ok = sum(r.found for r in runs) / len(runs)
        med = statistics.median(r.seconds for r in runs)
        if ok >= rate:
            return {"prm_budget": b, "prm_success": ok, "prm_median_time": med, "prm_solved": True}
    return {"prm_budget": budgets[-1], "prm_success": ok, "prm_median_time": med, "prm_solved": False}


def tightness_rows(params: PlannerParams, seeds, prm: Optional[PRMParams] = None, budgets=(500, 1000, 2000, 4000, 8000), scales=scenes.TIGHTNESS_SCALES, with_prm: bool = True) -> list:
    prm = prm or PRMParams()
    rows = []
    for s in scales:
        scene, q = scenes.tunnel(s)
        runs = [run_mms(scene, q, replace(params, seed=seed)) for seed in seeds]
        row = {
            "scene": scene.name,
            "scale": str(s),
            "tightness": round(scenes.tunnel_tightness(s), 6),
            "mms_success": sum(r.found for r in runs) / len(runs),
            "mms_median_time": statistics.median(r.seconds for r in runs),
        }
        if with_prm:
            row.update(prm_time_to_success(scene, q, prm, seeds, list(budgets)))
        rows.append(row)
    return rows


def to_csv(rows: list) -> str:
    if not rows:
        return ""
    fields = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.4f}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
