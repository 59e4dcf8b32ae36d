"""Shared fixtures and independently coded oracles.

The oracles here deliberately avoid the library's vectorized code paths
(plain Python loops, itertools enumeration) so agreement is evidence, not
tautology.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from twlga import model


def naive_resource_times(genes, etc_entries) -> list[float]:
    """Double loop over nodes and tasks, summing in ascending task order."""
    n_tasks = len(genes)
    n_nodes = etc_entries.shape[1]
    times = [0.0] * n_nodes
    for task in range(n_tasks):
        node = int(genes[task]) - 1
        times[node] += float(etc_entries[task, node])
    return times


def naive_makespan(genes, etc_entries) -> float:
    return max(naive_resource_times(genes, etc_entries))


def enumerate_optimum(etc_entries) -> tuple[tuple[int, ...], float]:
    """Smallest makespan over all assignments via itertools.product.

    Returns the lexicographically smallest argmin (product yields assignments
    in lexicographic order and ties keep the first).
    """
    n_tasks, n_nodes = etc_entries.shape
    best_genes = None
    best = float("inf")
    for genes in itertools.product(range(1, n_nodes + 1), repeat=n_tasks):
        span = naive_makespan(genes, etc_entries)
        if span < best:
            best = span
            best_genes = genes
    return best_genes, best


def build_instance(etc_rows, usage=None, weights=None, sizes=None) -> model.Instance:
    """Instance from plain lists; idle nodes unless usage rows are given."""
    etc = np.array(etc_rows, dtype=float)
    n_tasks, n_nodes = etc.shape
    if usage is None:
        usage = [(0.0, 0.0, 0.0, 0.0)] * n_nodes
    return model.Instance(
        tasks=model.TaskSet(count=n_tasks,
                            sizes=tuple(sizes) if sizes is not None else None),
        nodes=model.NodeSet(count=n_nodes,
                            usage=tuple(model.ResourceUsage(*u) for u in usage)),
        etc=model.EtcMatrix(etc),
        weights=weights if weights is not None else model.DEFAULT_WEIGHTS,
    )


@pytest.fixture
def two_by_two() -> model.Instance:
    """ETC [[2, 4], [3, 1]]: FIFO sends task 0 to node 1 and task 1 to node 2."""
    return build_instance([[2.0, 4.0], [3.0, 1.0]])


@pytest.fixture
def loaded_nodes() -> model.Instance:
    """Node 1 is fast but busy (workload 0.9); node 2 slower but idle (0.1)."""
    return build_instance(
        [[1.0, 2.0]] * 4,
        usage=[(0.9, 0.9, 0.9, 0.9), (0.1, 0.1, 0.1, 0.1)],
    )
