"""Pydantic wire models: instance documents, experiment manifests and the
request/response bodies of the HTTP service.

These are the single source of truth for every JSON surface; the CLI parses
its --config files with the same models the service validates requests with,
so error messages name the offending field either way.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import clustersim, ga, model, sensors

SchedulerName = Literal["twlga", "time_ga", "fifo", "random", "round_robin"]
ALL_SCHEDULERS: tuple[SchedulerName, ...] = (
    "twlga", "time_ga", "fifo", "random", "round_robin")


class WeightsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    cpu: float = 0.4
    mem: float = 0.3
    disk: float = 0.2
    net: float = 0.1

    def to_core(self) -> model.WorkloadWeights:
        return model.WorkloadWeights(cpu=self.cpu, mem=self.mem,
                                     disk=self.disk, net=self.net)


class TasksModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    count: int = Field(ge=1)
    sizes: list[float] | None = None


class NodesModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    count: int = Field(ge=1)
    usage: list[tuple[float, float, float, float]]


class InstanceModel(BaseModel):
    """The documented instance JSON document (see docs/formats.md)."""

    model_config = ConfigDict(extra="forbid")
    tasks: TasksModel
    nodes: NodesModel
    etc: list[list[float]]
    weights: WeightsModel = WeightsModel()

    def to_core(self) -> model.Instance:
        return model.instance_from_dict(self.model_dump())

    @classmethod
    def from_core(cls, inst: model.Instance) -> "InstanceModel":
        return cls.model_validate(model.instance_to_dict(inst))


class GaParamsModel(BaseModel):
    """JSON mirror of the GA parameter set."""

    model_config = ConfigDict(extra="forbid")
    population: int = Field(default=30, ge=2)
    generations: int = Field(default=100, ge=0)
    p_c1: float = Field(default=0.9, ge=0, le=1)
    p_c2: float = Field(default=0.6, ge=0, le=1)
    p_m1: float = Field(default=0.1, ge=0, le=1)
    p_m2: float = Field(default=0.01, ge=0, le=1)
    elitism: int = Field(default=1, ge=0)
    tournament_size: int = Field(default=2, ge=1)
    fitness_mode: Literal["time_only", "twlga"] = "twlga"
    seed: int = 0
    rate_formula: Literal["literal", "interpolated"] = "literal"

    def to_core(self, *, seed: int | None = None,
                fitness_mode: str | None = None) -> ga.GaParams:
        return ga.GaParams(
            population=self.population, generations=self.generations,
            p_c1=self.p_c1, p_c2=self.p_c2, p_m1=self.p_m1, p_m2=self.p_m2,
            elitism=self.elitism, tournament_size=self.tournament_size,
            fitness_mode=ga.FitnessMode(fitness_mode or self.fitness_mode),
            seed=self.seed if seed is None else seed,
            rate_formula=ga.RateFormula(self.rate_formula))


class OverheadModelModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    startup: float = Field(default=0.0, ge=0)
    coordination: float = Field(default=0.0, ge=0)
    transfer_rate: float = Field(default=0.0, ge=0)
    compute_rate: float = Field(gt=0)

    def to_core(self) -> clustersim.OverheadModel:
        return clustersim.OverheadModel(
            startup=self.startup, coordination=self.coordination,
            transfer_rate=self.transfer_rate, compute_rate=self.compute_rate)

    @classmethod
    def from_core(cls, m: clustersim.OverheadModel) -> "OverheadModelModel":
        return cls(startup=m.startup, coordination=m.coordination,
                   transfer_rate=m.transfer_rate, compute_rate=m.compute_rate)


class ObservationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    size_mb: float = Field(gt=0)
    nodes: int = Field(ge=1)
    seconds: float = Field(gt=0)

    def as_tuple(self) -> tuple[float, int, float]:
        return (self.size_mb, self.nodes, self.seconds)


class CalibrationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    lambda0: float
    slope: float
    t0: float

    def to_core(self) -> sensors.Calibration:
        return sensors.Calibration(lambda0=self.lambda0, slope=self.slope,
                                   t0=self.t0)


# ---------------------------------------------------------------------------
# experiment manifests

class GenerateInstancesModel(BaseModel):
    """Recipe for synthetic instances; instance i uses seed ``seed + i``."""

    model_config = ConfigDict(extra="forbid")
    count: int = Field(default=1, ge=1)
    tasks: int = Field(ge=1)
    nodes: int = Field(ge=1)
    heterogeneity: float = Field(default=1.0, ge=1.0)
    seed: int = 0
    weights: WeightsModel = WeightsModel()


class InstanceSourceModel(BaseModel):
    """Exactly one of ``generate`` or ``inline`` must be given."""

    model_config = ConfigDict(extra="forbid")
    generate: GenerateInstancesModel | None = None
    inline: list[InstanceModel] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.generate is None) == (self.inline is None):
            raise ValueError("give exactly one of 'generate' or 'inline'")
        if self.inline is not None and not self.inline:
            raise ValueError("'inline' must list at least one instance")
        return self

    def resolve(self) -> list[model.Instance]:
        if self.inline is not None:
            return [doc.to_core() for doc in self.inline]
        spec = self.generate
        assert spec is not None
        return [
            model.generate_instance(spec.tasks, spec.nodes, spec.heterogeneity,
                                    seed=spec.seed + i,
                                    weights=spec.weights.to_core())
            for i in range(spec.count)
        ]


class CompareManifest(BaseModel):
    """Scheduler shoot-out over instances x seeds."""

    model_config = ConfigDict(extra="forbid")
    mode: Literal["compare"] = "compare"
    instances: InstanceSourceModel
    seeds: list[int] = Field(min_length=1)
    ga: GaParamsModel = GaParamsModel()
    schedulers: list[SchedulerName] = Field(default=list(ALL_SCHEDULERS),
                                            min_length=1)
    oracle_limit: int = Field(default=100_000, ge=0)


class ScalingManifest(BaseModel):
    """Size x node-count sweep; either a ready model or observations to fit."""

    model_config = ConfigDict(extra="forbid")
    mode: Literal["scaling"] = "scaling"
    model: OverheadModelModel | None = None
    observations: list[ObservationModel] | None = None
    sizes_mb: list[float] | None = None
    node_counts: list[int] | None = None

    @model_validator(mode="after")
    def _needs_model_or_observations(self):
        if self.model is None and self.observations is None:
            raise ValueError("give an overhead 'model', 'observations' to "
                             "calibrate one, or both")
        if self.observations is None:
            if not self.sizes_mb or not self.node_counts:
                raise ValueError("without observations, 'sizes_mb' and "
                                 "'node_counts' are required")
        return self

    def grid(self) -> tuple[list[float], list[int]]:
        if self.sizes_mb and self.node_counts:
            return list(self.sizes_mb), list(self.node_counts)
        assert self.observations is not None
        sizes = sorted({o.size_mb for o in self.observations})
        nodes = sorted({o.nodes for o in self.observations})
        return (list(self.sizes_mb) if self.sizes_mb else sizes,
                list(self.node_counts) if self.node_counts else nodes)


class SingleRunManifest(BaseModel):
    """One scheduler on one instance, with the evolution trace kept."""

    model_config = ConfigDict(extra="forbid")
    mode: Literal["single-run"] = "single-run"
    instances: InstanceSourceModel
    scheduler: SchedulerName = "twlga"
    ga: GaParamsModel = GaParamsModel()
    seed: int = 0

    @model_validator(mode="after")
    def _single_instance(self):
        if self.instances.generate is not None and self.instances.generate.count != 1:
            raise ValueError("single-run wants exactly one instance")
        if self.instances.inline is not None and len(self.instances.inline) != 1:
            raise ValueError("single-run wants exactly one instance")
        return self


class PipelineManifest(BaseModel):
    """Sensor trace merge + extract configuration.

    ``input_dir`` is resolved by the CLI, which ships file contents to the
    service; the service itself never touches the local filesystem.
    """

    model_config = ConfigDict(extra="forbid")
    mode: Literal["pipeline"] = "pipeline"
    input_dir: str | None = None
    calibration: CalibrationModel
    include_day: bool = False


ExperimentManifest = Annotated[
    Union[CompareManifest, ScalingManifest, SingleRunManifest, PipelineManifest],
    Field(discriminator="mode"),
]


class ManifestDocument(BaseModel):
    """Wrapper used to parse an arbitrary --config file."""

    root: ExperimentManifest


# ---------------------------------------------------------------------------
# service request/response bodies

class HealthResponse(BaseModel):
    status: str
    version: str


class GenerateInstanceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tasks: int = Field(ge=1)
    nodes: int = Field(ge=1)
    heterogeneity: float = Field(default=1.0, ge=1.0)
    seed: int = 0
    weights: WeightsModel = WeightsModel()


class WorkloadRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    usage: tuple[float, float, float, float]
    weights: WeightsModel = WeightsModel()


class WorkloadResponse(BaseModel):
    workload: float


class FitnessRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    chromosome: list[int]
    fitness_mode: Literal["time_only", "twlga"] = "twlga"


class FitnessResponse(BaseModel):
    each_resource_time: list[float]
    job_final_time: float
    p_time: float
    optimum: float
    bottleneck_node: int


class ScheduleResponse(BaseModel):
    """Common result shape for every scheduler endpoint."""

    scheduler: str
    chromosome: list[int]
    makespan: float
    each_resource_time: list[float]
    bottleneck_node: int
    bottleneck_workload: float


class EvolveRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    params: GaParamsModel = GaParamsModel()


class GenerationRowModel(BaseModel):
    generation: int
    best_fitness: float
    mean_fitness: float
    best_makespan: float


class EvolveResponse(BaseModel):
    best: ScheduleResponse
    best_fitness: float
    generations: list[GenerationRowModel]
    trace_csv: str


class BaselineRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    method: Literal["fifo", "random", "round_robin"]
    seed: int = 0


class BruteForceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    limit: int = Field(default=10_000_000, ge=1)


class IntervalModel(BaseModel):
    kind: str
    task: int | None
    start: float
    end: float


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    chromosome: list[int]
    model: OverheadModelModel


class SimulateResponse(BaseModel):
    makespan: float
    node_completion: list[float]
    compute_seconds: float
    transfer_seconds: float
    overhead_seconds: float
    node_intervals: list[list[IntervalModel]]


class CalibrateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    observations: list[ObservationModel] = Field(min_length=1)
    template: OverheadModelModel | None = None


class CalibrateResponse(BaseModel):
    model: OverheadModelModel
    sse: float
    rmse: float


class TraceFileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    content: str


class PipelineRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    files: list[TraceFileModel]
    calibration: CalibrationModel
    include_day: bool = False


class ArtifactsResponse(BaseModel):
    """File names mapped to their exact text content; the client writes them."""

    files: dict[str, str]


def chromosome_from_wire(genes: list[int], inst: model.Instance) -> np.ndarray:
    return ga.validate_chromosome(np.array(genes, dtype=np.int64),
                                  inst.n_tasks, inst.n_nodes)
