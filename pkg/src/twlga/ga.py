"""Genetic scheduler for independent tasks on heterogeneous nodes.

A chromosome is a length-N integer array; position t holds the 1-based id of
the node running subtask t.  Fitness is the reciprocal of the schedule
makespan, optionally damped by the workload of the node that sets it, and the
crossover/mutation probabilities adapt to how far an individual sits above the
population mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import CorruptChromosomeError, InvalidArgumentError, InvalidParamsError
from .model import EtcMatrix, Instance, node_workload

Chromosome = np.ndarray  # int array, values in [1, R]


class FitnessMode(str, Enum):
    """Which fitness the scheduler maximizes."""

    #: reciprocal makespan only
    TIME_ONLY = "time_only"
    #: reciprocal of makespan scaled by (1 + workload of the bottleneck node)
    TWLGA = "twlga"


class RateFormula(str, Enum):
    """How the adaptive probabilities map fitness to a rate.

    LITERAL uses ((p1 - p2) / p1) * (f_max - f) / (f_max - f_mean), clamped to
    [p2, p1].  INTERPOLATED uses the conventional decreasing ramp
    p1 - (p1 - p2) * (f - f_mean) / (f_max - f_mean), giving p1 at the mean and
    p2 at the maximum.
    """

    LITERAL = "literal"
    INTERPOLATED = "interpolated"


@dataclass(frozen=True)
class Assignment:
    """Decoded chromosome: per node, the sorted tuple of 0-based task indices."""

    node_tasks: tuple[tuple[int, ...], ...]

    @property
    def n_nodes(self) -> int:
        return len(self.node_tasks)

    @property
    def n_tasks(self) -> int:
        return sum(len(t) for t in self.node_tasks)

    def to_chromosome(self) -> Chromosome:
        genes = np.empty(self.n_tasks, dtype=np.int64)
        for node_idx, tasks in enumerate(self.node_tasks):
            for t in tasks:
                genes[t] = node_idx + 1
        return genes


@dataclass(frozen=True)
class FitnessReport:
    """Everything the fitness evaluation knows about one chromosome."""

    each_resource_time: np.ndarray  # seconds per node, ordered by node id
    job_final_time: float           # makespan, seconds
    p_time: float                   # 1 / makespan
    optimum: float                  # fitness actually used by the GA
    bottleneck_node: int            # 1-based id of the node setting the makespan


@dataclass(frozen=True)
class PopulationStats:
    """Maximum and mean fitness of the current population."""

    f_max: float
    f_mean: float

    def __post_init__(self):
        if not (math.isfinite(self.f_max) and math.isfinite(self.f_mean)):
            raise InvalidArgumentError("population stats must be finite")
        if self.f_max <= 0 or self.f_mean <= 0:
            raise InvalidArgumentError("population stats must be positive")
        if self.f_max < self.f_mean:
            raise InvalidArgumentError(
                f"f_max {self.f_max!r} < f_mean {self.f_mean!r}")


@dataclass(frozen=True)
class GaParams:
    """Knobs of the evolution loop.

    The defaults (population 30, 100 generations, crossover band 0.6..0.9,
    mutation band 0.01..0.1) are conventional values; nothing in the problem
    fixes them.
    """

    population: int = 30
    generations: int = 100
    p_c1: float = 0.9
    p_c2: float = 0.6
    p_m1: float = 0.1
    p_m2: float = 0.01
    elitism: int = 1
    tournament_size: int = 2
    fitness_mode: FitnessMode = FitnessMode.TWLGA
    seed: int = 0
    rate_formula: RateFormula = RateFormula.LITERAL

    def __post_init__(self):
        if self.population < 2:
            raise InvalidParamsError(f"population must be >= 2, got {self.population}")
        if self.generations < 0:
            raise InvalidParamsError(f"generations must be >= 0, got {self.generations}")
        if not 0.0 <= self.p_c2 <= self.p_c1 <= 1.0:
            raise InvalidParamsError(
                f"need 0 <= p_c2 <= p_c1 <= 1, got p_c1={self.p_c1}, p_c2={self.p_c2}")
        if not 0.0 <= self.p_m2 <= self.p_m1 <= 1.0:
            raise InvalidParamsError(
                f"need 0 <= p_m2 <= p_m1 <= 1, got p_m1={self.p_m1}, p_m2={self.p_m2}")
        if not 0 <= self.elitism < self.population:
            raise InvalidParamsError(
                f"need 0 <= elitism < population, got {self.elitism}")
        if self.tournament_size < 1:
            raise InvalidParamsError(
                f"tournament_size must be >= 1, got {self.tournament_size}")


@dataclass(frozen=True)
class GenerationRow:
    """Trace entry for one generation.

    ``mean_crossover_rate`` / ``mean_mutation_rate`` summarize the adaptive
    probabilities applied while breeding the next generation; the final row
    breeds nothing and holds NaN.
    """

    generation: int
    best_fitness: float
    mean_fitness: float
    best_makespan: float
    mean_crossover_rate: float
    mean_mutation_rate: float


@dataclass(frozen=True)
class EvolutionTrace:
    """Full record of one evolution run."""

    rows: tuple[GenerationRow, ...]
    best_genes: Chromosome
    best_fitness: float
    best_makespan: float

    def to_csv(self) -> str:
        """Per-generation CSV: generation, best_fitness, mean_fitness, best_makespan."""
        lines = ["generation,best_fitness,mean_fitness,best_makespan"]
        for row in self.rows:
            lines.append(f"{row.generation},{row.best_fitness!r},"
                         f"{row.mean_fitness!r},{row.best_makespan!r}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chromosome operations

def validate_chromosome(genes: Chromosome, n_tasks: int, n_nodes: int) -> np.ndarray:
    """Return ``genes`` as an int array, or raise CorruptChromosomeError."""
    arr = np.asarray(genes)
    if arr.ndim != 1 or arr.shape[0] != n_tasks:
        raise CorruptChromosomeError(
            f"chromosome has shape {arr.shape}, expected ({n_tasks},)")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise CorruptChromosomeError("genes must be integers")
        arr = arr.astype(np.int64)
    if arr.size and (arr.min() < 1 or arr.max() > n_nodes):
        raise CorruptChromosomeError(
            f"genes must lie in [1, {n_nodes}], got range "
            f"[{arr.min()}, {arr.max()}]")
    return arr.astype(np.int64, copy=False)


def random_chromosome(n_tasks: int, n_nodes: int,
                      rng: np.random.Generator) -> Chromosome:
    """Uniform random assignment; each gene independently in [1, n_nodes]."""
    if n_tasks < 1 or n_nodes < 1:
        raise InvalidArgumentError(
            f"dimensions must be >= 1, got tasks={n_tasks}, nodes={n_nodes}")
    return rng.integers(1, n_nodes + 1, size=n_tasks, dtype=np.int64)


def decode(genes: Chromosome, n_nodes: int) -> Assignment:
    """Split the gene string into per-node task lists (ascending task index)."""
    arr = np.atleast_1d(np.asarray(genes))
    arr = validate_chromosome(arr, arr.shape[0], n_nodes)
    buckets: list[list[int]] = [[] for _ in range(n_nodes)]
    for task, gene in enumerate(arr.tolist()):
        buckets[gene - 1].append(task)
    return Assignment(node_tasks=tuple(tuple(b) for b in buckets))


def _per_task_times(genes: np.ndarray, etc: EtcMatrix) -> np.ndarray:
    return etc.entries[np.arange(genes.shape[0]), genes - 1]


def resource_times_for_genes(genes: Chromosome, etc: EtcMatrix) -> np.ndarray:
    """Per-node busy seconds for a gene string.

    Accumulates in ascending task order per node (np.bincount is sequential),
    so results are bit-identical to a naive loop over tasks.
    """
    arr = validate_chromosome(genes, etc.n_tasks, etc.n_nodes)
    return np.bincount(arr - 1, weights=_per_task_times(arr, etc),
                       minlength=etc.n_nodes)


def each_resource_time(assignment: Assignment, etc: EtcMatrix) -> np.ndarray:
    """Per-node busy seconds: the sum of ETC entries of the tasks on each node."""
    if assignment.n_nodes != etc.n_nodes:
        raise InvalidArgumentError(
            f"assignment covers {assignment.n_nodes} nodes, ETC has {etc.n_nodes}")
    if assignment.n_tasks != etc.n_tasks:
        raise InvalidArgumentError(
            f"assignment covers {assignment.n_tasks} tasks, ETC has {etc.n_tasks}")
    return resource_times_for_genes(assignment.to_chromosome(), etc)


def job_final_time(assignment: Assignment, etc: EtcMatrix) -> float:
    """Makespan: the largest per-node busy time."""
    return float(each_resource_time(assignment, etc).max())


def fitness(genes: Chromosome, inst: Instance,
            mode: FitnessMode = FitnessMode.TWLGA) -> FitnessReport:
    """Evaluate one chromosome against an instance.

    ``p_time`` is the plain reciprocal makespan.  In TWLGA mode the fitness
    additionally divides by (1 + workload of the bottleneck node), so among
    equally fast schedules the one whose critical node is idler wins.
    """
    times = resource_times_for_genes(genes, inst.etc)
    jft = float(times.max())
    bottleneck = int(times.argmax())  # first occurrence = lowest node index
    p_time = 1.0 / jft
    if FitnessMode(mode) is FitnessMode.TWLGA:
        load = node_workload(inst.nodes.usage[bottleneck], inst.weights)
        optimum = 1.0 / (jft * (1.0 + load))
    else:
        optimum = p_time
    return FitnessReport(each_resource_time=times, job_final_time=jft,
                         p_time=p_time, optimum=optimum,
                         bottleneck_node=bottleneck + 1)


# ---------------------------------------------------------------------------
# adaptive rates

def raw_adaptive_rate(f_max: float, f_mean: float, f: float,
                      p1: float, p2: float) -> float:
    """Unclamped adaptive probability ((p1 - p2) / p1) * (f_max - f) / (f_max - f_mean).

    Linear and non-increasing in ``f``; callers clamp it into [p2, p1].
    """
    if p1 <= 0.0:
        raise InvalidParamsError("upper rate bound p1 must be positive")
    return ((p1 - p2) / p1) * ((f_max - f) / (f_max - f_mean))


def _adaptive_rate(stats: PopulationStats, f: float, p1: float, p2: float,
                   formula: RateFormula) -> float:
    if p1 <= 0.0:
        raise InvalidParamsError("upper rate bound p1 must be positive")
    if not math.isfinite(f):
        raise InvalidArgumentError(f"fitness must be finite, got {f!r}")
    if stats.f_max == stats.f_mean:
        return p1  # uniform population: keep exploring at the top rate
    if f < stats.f_mean:
        return p1  # below-average individuals get the full rate
    if RateFormula(formula) is RateFormula.INTERPOLATED:
        raw = p1 - (p1 - p2) * ((f - stats.f_mean) / (stats.f_max - stats.f_mean))
    else:
        raw = raw_adaptive_rate(stats.f_max, stats.f_mean, f, p1, p2)
    return min(p1, max(p2, raw))


def adaptive_crossover_rate(stats: PopulationStats, f_prime: float,
                            params: GaParams) -> float:
    """Crossover probability for a pair whose fitter parent has fitness ``f_prime``."""
    return _adaptive_rate(stats, f_prime, params.p_c1, params.p_c2,
                          params.rate_formula)


def adaptive_mutation_rate(stats: PopulationStats, f: float,
                           params: GaParams) -> float:
    """Mutation probability for the individual with fitness ``f``."""
    return _adaptive_rate(stats, f, params.p_m1, params.p_m2,
                          params.rate_formula)


# ---------------------------------------------------------------------------
# variation operators

def crossover(a: Chromosome, b: Chromosome,
              rng: np.random.Generator) -> tuple[Chromosome, Chromosome]:
    """Single-point crossover; the children swap suffixes at a random cut."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidArgumentError(
            f"parents must have equal length, got {a.shape} and {b.shape}")
    n = a.shape[0]
    if n <= 1:
        return a.copy(), b.copy()
    cut = int(rng.integers(1, n))
    return (np.concatenate([a[:cut], b[cut:]]),
            np.concatenate([b[:cut], a[cut:]]))


def mutate(genes: Chromosome, n_nodes: int,
           rng: np.random.Generator) -> Chromosome:
    """Reassign one uniformly chosen gene to a uniformly chosen node.

    The new value may equal the old one, so the output can be identical to the
    input; it always stays a valid chromosome.
    """
    out = np.asarray(genes).copy()
    pos = int(rng.integers(0, out.shape[0]))
    out[pos] = int(rng.integers(1, n_nodes + 1))
    return out


# ---------------------------------------------------------------------------
# evolution loop

def _population_eval(pop: np.ndarray, etc_entries: np.ndarray,
                     workloads: np.ndarray | None
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Fitness and makespan of every row of ``pop`` (shape P x N).

    np.add.at applies updates in C order, matching the per-chromosome bincount
    accumulation bit for bit.
    """
    n_pop, n_tasks = pop.shape
    n_nodes = etc_entries.shape[1]
    times = etc_entries[np.arange(n_tasks)[None, :], pop - 1]
    busy = np.zeros((n_pop, n_nodes))
    np.add.at(busy, (np.arange(n_pop)[:, None], pop - 1), times)
    makespans = busy.max(axis=1)
    if workloads is None:
        fit = 1.0 / makespans
    else:
        bottleneck = busy.argmax(axis=1)
        fit = 1.0 / (makespans * (1.0 + workloads[bottleneck]))
    return fit, makespans


def _scalar_fitness(genes: np.ndarray, etc_entries: np.ndarray,
                    workloads: np.ndarray | None) -> float:
    n_nodes = etc_entries.shape[1]
    times = etc_entries[np.arange(genes.shape[0]), genes - 1]
    busy = np.bincount(genes - 1, weights=times, minlength=n_nodes)
    jft = busy.max()
    if workloads is None:
        return 1.0 / jft
    return 1.0 / (jft * (1.0 + workloads[busy.argmax()]))


def _tournament_pick(fit: np.ndarray, candidates: np.ndarray) -> int:
    """Index of the fittest candidate; ties go to the lowest index."""
    best = fit[candidates].max()
    return int(candidates[fit[candidates] == best].min())


def evolve(inst: Instance, params: GaParams) -> EvolutionTrace:
    """Run the genetic scheduler and return the full per-generation trace.

    Each generation keeps the ``elitism`` best individuals unchanged and
    refills the population from tournament-selected parents passed through
    adaptive single-point crossover and single-gene mutation.  All randomness
    flows from ``params.seed``, so the trace is bit-reproducible.
    """
    if params.p_c1 <= 0.0 or params.p_m1 <= 0.0:
        raise InvalidParamsError(
            "adaptive rates need positive p_c1 and p_m1 "
            f"(got p_c1={params.p_c1}, p_m1={params.p_m1})")
    n_tasks, n_nodes = inst.n_tasks, inst.n_nodes
    etc_entries = inst.etc.entries
    workloads = (inst.node_workloads()
                 if params.fitness_mode is FitnessMode.TWLGA else None)
    rng = np.random.default_rng(params.seed)
    pop_size = params.population

    pop = rng.integers(1, n_nodes + 1, size=(pop_size, n_tasks), dtype=np.int64)
    rows: list[GenerationRow] = []
    best_genes: np.ndarray | None = None
    best_fit = -math.inf
    best_makespan = math.nan

    for gen in range(params.generations + 1):
        fit, makespans = _population_eval(pop, etc_entries, workloads)
        top = int(np.argmax(fit))  # first occurrence = lowest index on ties
        if fit[top] > best_fit:
            best_fit = float(fit[top])
            best_genes = pop[top].copy()
            best_makespan = float(makespans[top])

        if gen == params.generations:
            rows.append(GenerationRow(gen, float(fit[top]), float(fit.mean()),
                                      float(makespans[top]), math.nan, math.nan))
            break

        f_max = float(fit.max())
        # the exact mean of a uniform population is f_max itself; np.mean's
        # pairwise rounding can land one ulp off on either side, which would
        # either break the f_mean <= f_max contract or hide the degenerate
        # f_max == f_mean case that switches the rates to full exploration
        if float(fit.min()) == f_max:
            f_mean = f_max
        else:
            f_mean = min(float(fit.mean()), f_max)
        stats = PopulationStats(f_max=f_max, f_mean=f_mean)
        elite_order = np.argsort(-fit, kind="stable")[:params.elitism]
        next_pop = [pop[i].copy() for i in elite_order]

        n_pairs = -(-(pop_size - params.elitism) // 2)  # ceil division
        t_size = params.tournament_size
        tmt_idx = rng.integers(0, pop_size, size=(n_pairs, 2, t_size))
        cross_u = rng.random(n_pairs)
        cuts = rng.integers(1, n_tasks, size=n_pairs) if n_tasks > 1 else None
        mut_u = rng.random((n_pairs, 2))
        mut_pos = rng.integers(0, n_tasks, size=(n_pairs, 2))
        mut_val = rng.integers(1, n_nodes + 1, size=(n_pairs, 2))

        pc_applied: list[float] = []
        pm_applied: list[float] = []
        for pair in range(n_pairs):
            if len(next_pop) >= pop_size:
                break
            ia = _tournament_pick(fit, tmt_idx[pair, 0])
            ib = _tournament_pick(fit, tmt_idx[pair, 1])
            f_prime = max(float(fit[ia]), float(fit[ib]))
            p_c = adaptive_crossover_rate(stats, f_prime, params)
            pc_applied.append(p_c)
            if cuts is not None and cross_u[pair] < p_c:
                cut = int(cuts[pair])
                children = (np.concatenate([pop[ia][:cut], pop[ib][cut:]]),
                            np.concatenate([pop[ib][:cut], pop[ia][cut:]]))
            else:
                children = (pop[ia].copy(), pop[ib].copy())
            for ci, child in enumerate(children):
                if len(next_pop) >= pop_size:
                    break
                f_child = _scalar_fitness(child, etc_entries, workloads)
                # children may beat f_max; the clamp floors their rate at p_m2
                p_m = adaptive_mutation_rate(stats, f_child, params)
                pm_applied.append(p_m)
                if mut_u[pair, ci] < p_m:
                    child = child.copy()
                    child[mut_pos[pair, ci]] = mut_val[pair, ci]
                next_pop.append(child)

        rows.append(GenerationRow(
            gen, float(fit[top]), float(fit.mean()), float(makespans[top]),
            float(np.mean(pc_applied)) if pc_applied else math.nan,
            float(np.mean(pm_applied)) if pm_applied else math.nan))
        pop = np.array(next_pop, dtype=np.int64)

    assert best_genes is not None
    return EvolutionTrace(rows=tuple(rows), best_genes=best_genes,
                          best_fitness=best_fit, best_makespan=best_makespan)
