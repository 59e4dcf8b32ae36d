"""Baseline schedulers and the exhaustive optimum used as a test oracle."""

from __future__ import annotations

import numpy as np

from .errors import SearchSpaceTooLargeError
from .ga import Chromosome, random_chromosome
from .model import Instance

#: Hard cap on the number of assignments brute force will enumerate.
BRUTE_FORCE_GUARD = 10_000_000


def schedule_fifo(inst: Instance) -> Chromosome:
    """Queue-order greedy assignment.

    Tasks are taken in index order; each goes to the node that becomes free
    earliest given the load accumulated so far, ties broken by the lowest node
    id.  This mimics a default first-in-first-out cluster scheduler.
    """
    loads = np.zeros(inst.n_nodes)
    genes = np.empty(inst.n_tasks, dtype=np.int64)
    for task in range(inst.n_tasks):
        node = int(loads.argmin())  # first occurrence = lowest node id
        genes[task] = node + 1
        loads[node] += inst.etc.entries[task, node]
    return genes


def schedule_round_robin(inst: Instance) -> Chromosome:
    """Task t goes to node (t mod R) + 1."""
    return (np.arange(inst.n_tasks, dtype=np.int64) % inst.n_nodes) + 1


def schedule_random(inst: Instance, seed: int = 0) -> Chromosome:
    """Uniform random assignment from a dedicated generator."""
    return random_chromosome(inst.n_tasks, inst.n_nodes,
                             np.random.default_rng(seed))


def brute_force_optimum(inst: Instance,
                        limit: int = BRUTE_FORCE_GUARD) -> tuple[Chromosome, float]:
    """Exhaustively minimize the makespan over all R^N assignments.

    Returns the lexicographically smallest minimizing gene string and its
    makespan.  Enumeration is depth first in gene order with branch pruning on
    the running maximum, which cannot skip the first-found minimizer.
    """
    n_tasks, n_nodes = inst.n_tasks, inst.n_nodes
    space = n_nodes ** n_tasks
    if space > limit:
        raise SearchSpaceTooLargeError(
            f"search space {n_nodes}^{n_tasks} = {space} exceeds limit {limit}")

    etc = inst.etc.entries
    loads = [0.0] * n_nodes
    genes = [0] * n_tasks
    best_genes: list[int] | None = None
    best_makespan = float("inf")

    def descend(task: int, current_max: float) -> None:
        nonlocal best_genes, best_makespan
        if current_max >= best_makespan:
            return
        if task == n_tasks:
            best_makespan = current_max
            best_genes = genes.copy()
            return
        row = etc[task]
        for node in range(n_nodes):
            before = loads[node]
            after = before + row[node]
            loads[node] = after
            genes[task] = node + 1
            descend(task + 1, after if after > current_max else current_max)
            loads[node] = before

    descend(0, 0.0)
    assert best_genes is not None
    return np.array(best_genes, dtype=np.int64), best_makespan
