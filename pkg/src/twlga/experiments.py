"""Experiment runners that turn a manifest into a set of output artifacts.

Every runner is a pure function from validated inputs to a ``{filename:
text}`` dict; the caller (CLI or service client) decides where the bytes
land.  Wall-clock measurements never enter a CSV or summary.json, only
timings.json, so repeated runs of the same manifest produce byte-identical
reports.
"""

from __future__ import annotations

import json
import time
from typing import Sequence

import numpy as np

from . import clustersim, ga, model, schedulers, sensors
from .schemas import (CompareManifest, PipelineManifest, ScalingManifest,
                      SingleRunManifest)

GA_SCHEDULERS = ("twlga", "time_ga")


def _fmt(x: float) -> str:
    """Shortest round-tripping decimal form; ints render without the dot."""
    f = float(x)
    if f.is_integer() and abs(f) < 1e16:
        return str(int(f))
    return repr(f)


def _json(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv(header: str, rows: Sequence[Sequence[object]]) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(
            _fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def run_one_scheduler(name: str, inst: model.Instance, seed: int,
                      ga_params) -> dict:
    """Produce one schedule and its headline numbers.

    ``ga_params`` is the GaParamsModel from the manifest; GA schedulers take
    their RNG seed and fitness mode from the run, not from the manifest.
    """
    trace = None
    if name == "twlga":
        trace = ga.evolve(inst, ga_params.to_core(seed=seed,
                                                  fitness_mode="twlga"))
        genes = trace.best_genes
    elif name == "time_ga":
        trace = ga.evolve(inst, ga_params.to_core(seed=seed,
                                                  fitness_mode="time_only"))
        genes = trace.best_genes
    elif name == "fifo":
        genes = schedulers.schedule_fifo(inst)
    elif name == "round_robin":
        genes = schedulers.schedule_round_robin(inst)
    elif name == "random":
        genes = schedulers.schedule_random(inst, seed=seed)
    else:
        raise ValueError(f"unknown scheduler {name!r}")

    times = ga.resource_times_for_genes(genes, inst.etc)
    makespan = float(times.max())
    bottleneck = int(times.argmax()) + 1
    workloads = inst.node_workloads()
    return {
        "scheduler": name,
        "genes": [int(g) for g in genes],
        "makespan": makespan,
        "each_resource_time": [float(t) for t in times],
        "bottleneck_node": bottleneck,
        "bottleneck_workload": float(workloads[bottleneck - 1]),
        "trace": trace,
    }


def run_compare(manifest: CompareManifest) -> dict[str, str]:
    """Scheduler shoot-out: report.csv, summary.json, timings.json."""
    t0 = time.perf_counter()
    instances = manifest.instances.resolve()
    names = sorted(set(manifest.schedulers))

    rows = []
    oracle_cache: dict[int, float | None] = {}
    cells: dict[tuple[int, int], dict[str, float]] = {}
    for idx, inst in enumerate(instances):
        space = inst.n_nodes ** inst.n_tasks
        if manifest.oracle_limit and space <= manifest.oracle_limit:
            _, oracle_cache[idx] = schedulers.brute_force_optimum(
                inst, limit=manifest.oracle_limit)
        else:
            oracle_cache[idx] = None
        for seed in manifest.seeds:
            for name in names:
                res = run_one_scheduler(name, inst, seed, manifest.ga)
                cells[(idx, seed)] = cells.get((idx, seed), {})
                cells[(idx, seed)][name] = res["makespan"]
                optimum = oracle_cache[idx]
                rows.append((
                    idx, seed, name, res["makespan"], res["bottleneck_node"],
                    res["bottleneck_workload"],
                    "" if optimum is None else _fmt(optimum),
                    "" if optimum is None
                    else str(res["makespan"] == optimum).lower(),
                ))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    report = _csv("instance,seed,scheduler,makespan,bottleneck_node,"
                  "bottleneck_workload,optimum_makespan,matched_optimum", rows)

    per_scheduler: dict[str, dict] = {}
    for name in names:
        spans = [r[3] for r in rows if r[2] == name]
        wins = sum(1 for cell in cells.values()
                   if cell[name] == min(cell.values()))
        matches = sum(1 for r in rows
                      if r[2] == name and r[7] == "true")
        oracle_runs = sum(1 for r in rows if r[2] == name and r[6] != "")
        per_scheduler[name] = {
            "mean_makespan": float(np.mean(spans)),
            "best_count": wins,
            "oracle_matches": matches,
            "oracle_runs": oracle_runs,
        }
    summary = {
        "mode": "compare",
        "instances": len(instances),
        "seeds": list(manifest.seeds),
        "schedulers": names,
        "runs": len(rows),
        "per_scheduler": per_scheduler,
    }
    timings = {
        "total_seconds": time.perf_counter() - t0,
        "runs": len(rows),
    }
    return {"report.csv": report, "summary.json": _json(summary),
            "timings.json": _json(timings)}


def run_scaling(manifest: ScalingManifest) -> dict[str, str]:
    """Even-split scaling sweep: scaling.csv plus summary.json."""
    t0 = time.perf_counter()
    template = (manifest.model.to_core() if manifest.model is not None
                else clustersim.OverheadModel(compute_rate=1.0))
    calibration = None
    observed = None
    if manifest.observations is not None:
        observed = [o.as_tuple() for o in manifest.observations]
        calibration = clustersim.calibrate(template, observed)
        used = calibration.model
    else:
        used = template
    sizes, node_counts = manifest.grid()
    table = clustersim.scaling_experiment(sizes, node_counts, used)
    csv_text = _csv("size_mb,nodes,makespan_s",
                    [(s, k, m) for (s, k, m) in table])

    summary: dict = {
        "mode": "scaling",
        "model": {
            "startup": used.startup,
            "coordination": used.coordination,
            "transfer_rate": used.transfer_rate,
            "compute_rate": used.compute_rate,
        },
        "sizes_mb": [float(s) for s in sizes],
        "node_counts": [int(k) for k in node_counts],
    }
    if calibration is not None:
        summary["calibration"] = {"sse": calibration.sse,
                                  "rmse": calibration.rmse}
    if observed is not None:
        summary["verdict"] = clustersim.scaling_verdict(table, observed)
    timings = {"total_seconds": time.perf_counter() - t0,
               "cells": len(table)}
    return {"scaling.csv": csv_text, "summary.json": _json(summary),
            "timings.json": _json(timings)}


def run_single(manifest: SingleRunManifest) -> dict[str, str]:
    """One scheduler on one instance; GA runs also emit the evolution trace."""
    t0 = time.perf_counter()
    inst = manifest.instances.resolve()[0]
    res = run_one_scheduler(manifest.scheduler, inst, manifest.seed,
                            manifest.ga)
    summary = {
        "mode": "single-run",
        "scheduler": res["scheduler"],
        "seed": manifest.seed,
        "n_tasks": inst.n_tasks,
        "n_nodes": inst.n_nodes,
        "genes": res["genes"],
        "makespan": res["makespan"],
        "each_resource_time": res["each_resource_time"],
        "bottleneck_node": res["bottleneck_node"],
        "bottleneck_workload": res["bottleneck_workload"],
    }
    artifacts = {"summary.json": _json(summary)}
    if res["trace"] is not None:
        artifacts["trace.csv"] = res["trace"].to_csv()
    artifacts["timings.json"] = _json(
        {"total_seconds": time.perf_counter() - t0})
    return artifacts


def run_pipeline(files: Sequence[tuple[str, str]], cal: sensors.Calibration,
                 include_day: bool = False) -> dict[str, str]:
    """Merge trace files by year, then extract temperatures.

    ``files`` carries (name, content) pairs so the runner never touches the
    filesystem; artifacts come back under ``merged/<year>.txt`` plus one
    combined ``extracted.csv`` ordered by year.
    """
    t0 = time.perf_counter()
    parsed = [(name, sensors.parse_trace_text(content, source=name))
              for name, content in files]
    by_year = sensors.merge_records_by_year(parsed)

    artifacts: dict[str, str] = {}
    all_rows: list[sensors.ExtractedRow] = []
    counts: dict[str, int] = {}
    for year in sorted(by_year):
        records = by_year[year]
        body = "".join(sensors.format_record(r) + "\n" for r in records)
        artifacts[f"merged/{year}.txt"] = body
        all_rows.extend(sensors.extract_records(records, cal,
                                                include_day=include_day))
        counts[str(year)] = len(records)

    artifacts["extracted.csv"] = sensors.extracted_to_csv(
        all_rows, include_day=include_day)
    summary = {
        "mode": "pipeline",
        "input_files": len(files),
        "input_records": sum(len(r) for _, r in parsed),
        "records_per_year": counts,
        "years": sorted(by_year),
        "extracted_rows": len(all_rows),
    }
    artifacts["summary.json"] = _json(summary)
    artifacts["timings.json"] = _json(
        {"total_seconds": time.perf_counter() - t0})
    return artifacts
