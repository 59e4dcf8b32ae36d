"""Command-line interface.

Each subcommand validates its --config file against the matching manifest
model, sends the request through the service client (in-process unless
--server points at a running instance) and writes the returned artifacts
under --out.  All file writing happens here; the service never sees a path.
"""

from __future__ import annotations

import json
from pathlib import Path

import click
from pydantic import ValidationError

from ._version import __version__
from .client import ServiceClient
from .errors import TwlgaError
from .schemas import (CompareManifest, GenerateInstancesModel,
                      PipelineManifest, ScalingManifest, SingleRunManifest)


def _parse_seeds(ctx, param, value):
    if value is None:
        return None
    try:
        seeds = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers")
    if not seeds:
        raise click.BadParameter("expected at least one integer")
    return seeds


_CONFIG = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                       help="JSON manifest for this subcommand.")
_SEED = click.option("--seed", callback=_parse_seeds, metavar="INT[,INT...]",
                     help="Override the manifest's seed list.")
_OUT = click.option("--out", type=click.Path(file_okay=False), default="out",
                    show_default=True, help="Directory for output artifacts.")
_SERVER = click.option("--server", metavar="URL", default=None,
                       help="Base URL of a running service; in-process when "
                            "omitted.")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot read config {path}: {exc}")


def _validate(model_cls, payload: dict):
    try:
        return model_cls.model_validate(payload)
    except ValidationError as exc:
        raise click.ClickException(f"invalid config:\n{exc}")


def _write_artifacts(out: str, files: dict[str, str]) -> None:
    base = Path(out)
    for name, content in sorted(files.items()):
        target = base / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(content.encode("utf-8"))
        click.echo(f"wrote {target}")


def _run(server: str | None, path: str, payload: dict, out: str) -> None:
    try:
        with ServiceClient(server) as client:
            files = client.artifacts(path, payload)
    except TwlgaError as exc:
        raise click.ClickException(str(exc))
    _write_artifacts(out, files)


@click.group()
@click.version_option(version=__version__, prog_name="twlga")
def main() -> None:
    """Task scheduling experiments for heterogeneous clusters."""


@main.command()
@_CONFIG
@_SEED
@_OUT
@_SERVER
def compare(config, seed, out, server) -> None:
    """Run every configured scheduler over instances x seeds."""
    payload = _load_config(config)
    payload.setdefault("mode", "compare")
    if seed is not None:
        payload["seeds"] = seed
    manifest = _validate(CompareManifest, payload)
    _run(server, "/experiments/compare", manifest.model_dump(mode="json"), out)


@main.command()
@_CONFIG
@_SEED
@_OUT
@_SERVER
def scaling(config, seed, out, server) -> None:
    """Sweep workload size against node count under the overhead model.

    --seed is accepted for interface uniformity but has no effect; the sweep
    is deterministic.
    """
    payload = _load_config(config)
    payload.setdefault("mode", "scaling")
    manifest = _validate(ScalingManifest, payload)
    _run(server, "/experiments/scaling", manifest.model_dump(mode="json"), out)


@main.command()
@_CONFIG
@_SEED
@_OUT
@_SERVER
@click.option("--input-dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="Directory of trace files; overrides the "
                                 "manifest's input_dir.")
def pipeline(config, seed, out, server, input_dir) -> None:
    """Merge sensor trace files by year and extract temperatures.

    --seed is accepted for interface uniformity but has no effect; the
    pipeline is deterministic.
    """
    payload = _load_config(config)
    payload.setdefault("mode", "pipeline")
    manifest = _validate(PipelineManifest, payload)
    directory = input_dir or manifest.input_dir
    if directory is None:
        raise click.ClickException("no input directory: set 'input_dir' in "
                                   "the config or pass --input-dir")
    paths = sorted(p for p in Path(directory).iterdir() if p.is_file())
    if not paths:
        raise click.ClickException(f"no trace files in {directory}")
    try:
        files = [{"name": p.name, "content": p.read_text()} for p in paths]
    except OSError as exc:
        raise click.ClickException(f"cannot read trace file: {exc}")
    request = {
        "files": files,
        "calibration": manifest.calibration.model_dump(mode="json"),
        "include_day": manifest.include_day,
    }
    _run(server, "/pipeline/run", request, out)


@main.command("single-run")
@_CONFIG
@_SEED
@_OUT
@_SERVER
def single_run(config, seed, out, server) -> None:
    """Run one scheduler on one instance, keeping the evolution trace."""
    payload = _load_config(config)
    payload.setdefault("mode", "single-run")
    if seed is not None:
        payload["seed"] = seed[0]
    manifest = _validate(SingleRunManifest, payload)
    _run(server, "/experiments/single-run", manifest.model_dump(mode="json"),
         out)


@main.command("gen-instance")
@_CONFIG
@_SEED
@_OUT
@_SERVER
@click.option("--tasks", type=click.IntRange(min=1), default=None,
              help="Number of subtasks.")
@click.option("--nodes", type=click.IntRange(min=1), default=None,
              help="Number of nodes.")
@click.option("--count", type=click.IntRange(min=1), default=None,
              help="How many instances to generate.")
@click.option("--heterogeneity", type=click.FloatRange(min=1.0), default=None,
              help="Upper bound of the per-node speed factor.")
def gen_instance(config, seed, out, server, tasks, nodes, count,
                 heterogeneity) -> None:
    """Generate random instance documents; flags override the config."""
    payload = _load_config(config)
    if tasks is not None:
        payload["tasks"] = tasks
    if nodes is not None:
        payload["nodes"] = nodes
    if count is not None:
        payload["count"] = count
    if heterogeneity is not None:
        payload["heterogeneity"] = heterogeneity
    if seed is not None:
        payload["seed"] = seed[0]
    recipe = _validate(GenerateInstancesModel, payload)

    base = Path(out)
    base.mkdir(parents=True, exist_ok=True)
    try:
        with ServiceClient(server) as client:
            for i in range(recipe.count):
                doc = client.post("/instances/generate", {
                    "tasks": recipe.tasks,
                    "nodes": recipe.nodes,
                    "heterogeneity": recipe.heterogeneity,
                    "seed": recipe.seed + i,
                    "weights": recipe.weights.model_dump(mode="json"),
                })
                name = ("instance.json" if recipe.count == 1
                        else f"instance_{i:03d}.json")
                target = base / name
                target.write_bytes(
                    (json.dumps(doc, sort_keys=True, indent=2) + "\n")
                    .encode("utf-8"))
                click.echo(f"wrote {target}")
    except TwlgaError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Start the HTTP service."""
    import uvicorn
    uvicorn.run("twlga.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
