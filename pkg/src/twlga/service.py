"""HTTP service exposing the scheduler, simulator and pipeline.

The service is stateless and filesystem-free: every request carries its full
input (instances inline, trace files as name/content pairs) and every
response returns results or artifact text in the body.  Domain errors map to
HTTP 400 with the exception message as the detail.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import clustersim, experiments, ga, model, schedulers, sensors
from ._version import __version__
from .errors import TwlgaError
from .schemas import (ArtifactsResponse, BaselineRequest, BruteForceRequest,
                      CalibrateRequest, CalibrateResponse, CompareManifest,
                      EvolveRequest, EvolveResponse, FitnessRequest,
                      FitnessResponse, GenerateInstanceRequest,
                      GenerationRowModel, HealthResponse, InstanceModel,
                      IntervalModel, OverheadModelModel, PipelineRequest,
                      ScalingManifest, ScheduleResponse, SimulateRequest,
                      SimulateResponse, SingleRunManifest, WorkloadRequest,
                      WorkloadResponse, chromosome_from_wire)


def _schedule_response(name: str, genes, inst: model.Instance) -> ScheduleResponse:
    times = ga.resource_times_for_genes(genes, inst.etc)
    bottleneck = int(times.argmax()) + 1
    return ScheduleResponse(
        scheduler=name,
        chromosome=[int(g) for g in genes],
        makespan=float(times.max()),
        each_resource_time=[float(t) for t in times],
        bottleneck_node=bottleneck,
        bottleneck_workload=float(inst.node_workloads()[bottleneck - 1]),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="twlga", version=__version__)

    @app.exception_handler(TwlgaError)
    async def _domain_error(request: Request, exc: TwlgaError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/instances/generate", response_model=InstanceModel)
    def generate(req: GenerateInstanceRequest) -> InstanceModel:
        inst = model.generate_instance(req.tasks, req.nodes,
                                       req.heterogeneity, seed=req.seed,
                                       weights=req.weights.to_core())
        return InstanceModel.from_core(inst)

    @app.post("/workload", response_model=WorkloadResponse)
    def workload(req: WorkloadRequest) -> WorkloadResponse:
        usage = model.ResourceUsage(*req.usage)
        return WorkloadResponse(
            workload=model.node_workload(usage, req.weights.to_core()))

    @app.post("/fitness", response_model=FitnessResponse)
    def fitness(req: FitnessRequest) -> FitnessResponse:
        inst = req.instance.to_core()
        genes = chromosome_from_wire(req.chromosome, inst)
        rep = ga.fitness(genes, inst, mode=ga.FitnessMode(req.fitness_mode))
        return FitnessResponse(
            each_resource_time=list(rep.each_resource_time),
            job_final_time=rep.job_final_time,
            p_time=rep.p_time,
            optimum=rep.optimum,
            bottleneck_node=rep.bottleneck_node,
        )

    @app.post("/schedule/evolve", response_model=EvolveResponse)
    def evolve(req: EvolveRequest) -> EvolveResponse:
        inst = req.instance.to_core()
        trace = ga.evolve(inst, req.params.to_core())
        return EvolveResponse(
            best=_schedule_response(req.params.fitness_mode,
                                    trace.best_genes, inst),
            best_fitness=trace.best_fitness,
            generations=[
                GenerationRowModel(
                    generation=row.generation,
                    best_fitness=row.best_fitness,
                    mean_fitness=row.mean_fitness,
                    best_makespan=row.best_makespan,
                ) for row in trace.rows
            ],
            trace_csv=trace.to_csv(),
        )

    @app.post("/schedule/baseline", response_model=ScheduleResponse)
    def baseline(req: BaselineRequest) -> ScheduleResponse:
        inst = req.instance.to_core()
        if req.method == "fifo":
            genes = schedulers.schedule_fifo(inst)
        elif req.method == "round_robin":
            genes = schedulers.schedule_round_robin(inst)
        else:
            genes = schedulers.schedule_random(inst, seed=req.seed)
        return _schedule_response(req.method, genes, inst)

    @app.post("/schedule/brute-force", response_model=ScheduleResponse)
    def brute_force(req: BruteForceRequest) -> ScheduleResponse:
        inst = req.instance.to_core()
        genes, _ = schedulers.brute_force_optimum(inst, limit=req.limit)
        return _schedule_response("brute_force", genes, inst)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        inst = req.instance.to_core()
        genes = chromosome_from_wire(req.chromosome, inst)
        result = clustersim.simulate(ga.decode(genes, inst.n_nodes), inst,
                                     req.model.to_core())
        return SimulateResponse(
            makespan=result.makespan,
            node_completion=list(result.node_completion),
            compute_seconds=result.breakdown.compute,
            transfer_seconds=result.breakdown.transfer,
            overhead_seconds=result.breakdown.overhead,
            node_intervals=[
                [IntervalModel(kind=iv.kind, task=iv.task, start=iv.start,
                               end=iv.end) for iv in node]
                for node in result.node_intervals
            ],
        )

    @app.post("/calibrate", response_model=CalibrateResponse)
    def calibrate(req: CalibrateRequest) -> CalibrateResponse:
        template = (req.template.to_core() if req.template is not None
                    else clustersim.OverheadModel(compute_rate=1.0))
        result = clustersim.calibrate(
            template, [o.as_tuple() for o in req.observations])
        return CalibrateResponse(
            model=OverheadModelModel.from_core(result.model),
            sse=result.sse, rmse=result.rmse)

    @app.post("/experiments/compare", response_model=ArtifactsResponse)
    def compare(manifest: CompareManifest) -> ArtifactsResponse:
        return ArtifactsResponse(files=experiments.run_compare(manifest))

    @app.post("/experiments/scaling", response_model=ArtifactsResponse)
    def scaling(manifest: ScalingManifest) -> ArtifactsResponse:
        return ArtifactsResponse(files=experiments.run_scaling(manifest))

    @app.post("/experiments/single-run", response_model=ArtifactsResponse)
    def single_run(manifest: SingleRunManifest) -> ArtifactsResponse:
        return ArtifactsResponse(files=experiments.run_single(manifest))

    @app.post("/pipeline/run", response_model=ArtifactsResponse)
    def pipeline(req: PipelineRequest) -> ArtifactsResponse:
        files = [(f.name, f.content) for f in req.files]
        return ArtifactsResponse(files=experiments.run_pipeline(
            files, req.calibration.to_core(), include_day=req.include_day))

    return app


app = create_app()
