"""Tasks, nodes, the expected-time-to-complete matrix and node workload.

Node ids are 1-based everywhere they face the user (gene values, report
columns); arrays indexed by node use position ``node_id - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError

_FRACTION_FIELDS = ("cpu", "mem", "disk", "net")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ResourceUsage:
    """Utilization snapshot of one node; each component is a fraction in [0, 1]."""

    cpu: float
    mem: float
    disk: float
    net: float

    def __post_init__(self):
        for name in _FRACTION_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or not 0.0 <= value <= 1.0:
                raise InvalidArgumentError(
                    f"usage.{name} must be a fraction in [0, 1], got {value!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.cpu, self.mem, self.disk, self.net])


@dataclass(frozen=True)
class WorkloadWeights:
    """Relative importance of cpu/mem/disk/net utilization; must sum to 1."""

    cpu: float
    mem: float
    disk: float
    net: float

    def __post_init__(self):
        total = 0.0
        for name in _FRACTION_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise InvalidArgumentError(
                    f"weights.{name} must be nonnegative, got {value!r}")
            total += value
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError(
                f"weights must sum to 1 within 1e-9, got {total!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.cpu, self.mem, self.disk, self.net])


#: Default split used when an instance does not specify one.  The four factors
#: are fixed; the proportions are an arbitrary, documented choice.
DEFAULT_WEIGHTS = WorkloadWeights(cpu=0.4, mem=0.3, disk=0.2, net=0.1)


@dataclass(frozen=True)
class TaskSet:
    """N subtasks; optional nominal input sizes (megabytes) used by the simulator."""

    count: int
    sizes: tuple[float, ...] | None = None

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise InvalidArgumentError(f"task count must be >= 1, got {self.count!r}")
        if self.sizes is not None:
            object.__setattr__(self, "sizes", tuple(float(s) for s in self.sizes))
            if len(self.sizes) != self.count:
                raise InvalidArgumentError(
                    f"sizes has length {len(self.sizes)}, expected {self.count}")
            if any(not np.isfinite(s) or s <= 0 for s in self.sizes):
                raise InvalidArgumentError("all task sizes must be positive and finite")


@dataclass(frozen=True)
class NodeSet:
    """R computational resources with a static utilization snapshot each."""

    count: int
    usage: tuple[ResourceUsage, ...]

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise InvalidArgumentError(f"node count must be >= 1, got {self.count!r}")
        object.__setattr__(self, "usage", tuple(self.usage))
        if len(self.usage) != self.count:
            raise InvalidArgumentError(
                f"usage has length {len(self.usage)}, expected {self.count}")


@dataclass(frozen=True)
class EtcMatrix:
    """Expected completion time in seconds for every (task, node) pair.

    ``entries[t, r]`` is the time node ``r + 1`` needs to run task ``t``.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgumentError(
                f"ETC matrix must be 2-D and nonempty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
            raise InvalidArgumentError("all ETC entries must be positive and finite")
        object.__setattr__(self, "entries", _freeze(arr))

    @property
    def n_tasks(self) -> int:
        return self.entries.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[1]

    def time(self, task: int, node: int) -> float:
        """Seconds for 1-based ``node`` to execute 0-based ``task``."""
        return float(self.entries[task, node - 1])


@dataclass(frozen=True)
class Instance:
    """A scheduling problem: tasks, nodes, ETC matrix and workload weights."""

    tasks: TaskSet
    nodes: NodeSet
    etc: EtcMatrix
    weights: WorkloadWeights = field(default=DEFAULT_WEIGHTS)

    def __post_init__(self):
        if self.etc.n_tasks != self.tasks.count:
            raise InvalidArgumentError(
                f"ETC has {self.etc.n_tasks} task rows, expected {self.tasks.count}")
        if self.etc.n_nodes != self.nodes.count:
            raise InvalidArgumentError(
                f"ETC has {self.etc.n_nodes} node columns, expected {self.nodes.count}")

    @property
    def n_tasks(self) -> int:
        return self.tasks.count

    @property
    def n_nodes(self) -> int:
        return self.nodes.count

    def node_workloads(self) -> np.ndarray:
        """Per-node workload fractions, ordered by node id."""
        return np.array([node_workload(u, self.weights) for u in self.nodes.usage])


def node_workload(usage: ResourceUsage, weights: WorkloadWeights) -> float:
    """Weighted utilization of a node, a fraction in [0, 1].

    The four usage components are combined with their weight proportions;
    because the weights sum to 1 the result stays inside the unit interval.
    """
    return (weights.cpu * usage.cpu + weights.mem * usage.mem
            + weights.disk * usage.disk + weights.net * usage.net)


def generate_instance(n_tasks: int, n_nodes: int, heterogeneity: float = 1.0,
                      seed: int = 0,
                      weights: WorkloadWeights = DEFAULT_WEIGHTS) -> Instance:
    """Deterministic synthetic instance.

    Task ``t`` has a base cost drawn uniformly from [1, 100] seconds; node
    ``r`` has a slowdown factor drawn uniformly from [1, heterogeneity]; the
    ETC entry is their product.  Usage snapshots are uniform in [0, 1].  The
    same arguments always produce a bit-identical instance.
    """
    if n_tasks < 1 or n_nodes < 1:
        raise InvalidArgumentError(
            f"dimensions must be >= 1, got tasks={n_tasks}, nodes={n_nodes}")
    if heterogeneity < 1.0:
        raise InvalidArgumentError(
            f"heterogeneity must be >= 1, got {heterogeneity!r}")
    rng = np.random.default_rng(seed)
    base = rng.uniform(1.0, 100.0, size=n_tasks)
    speed = rng.uniform(1.0, float(heterogeneity), size=n_nodes)
    etc = np.outer(base, speed)
    usage = rng.uniform(0.0, 1.0, size=(n_nodes, 4))
    nodes = NodeSet(
        count=n_nodes,
        usage=tuple(ResourceUsage(*row) for row in usage.tolist()),
    )
    return Instance(tasks=TaskSet(count=n_tasks), nodes=nodes,
                    etc=EtcMatrix(etc), weights=weights)


def instance_to_dict(inst: Instance) -> dict:
    """Serialize to the documented JSON layout (see docs/formats.md)."""
    return {
        "tasks": {
            "count": inst.tasks.count,
            "sizes": list(inst.tasks.sizes) if inst.tasks.sizes is not None else None,
        },
        "nodes": {
            "count": inst.nodes.count,
            "usage": [[u.cpu, u.mem, u.disk, u.net] for u in inst.nodes.usage],
        },
        "etc": inst.etc.entries.tolist(),
        "weights": {
            "cpu": inst.weights.cpu,
            "mem": inst.weights.mem,
            "disk": inst.weights.disk,
            "net": inst.weights.net,
        },
    }


def instance_from_dict(doc: dict) -> Instance:
    """Inverse of :func:`instance_to_dict`; round-trips bit-exactly."""
    try:
        tasks_doc = doc["tasks"]
        nodes_doc = doc["nodes"]
        etc = doc["etc"]
        weights_doc = doc["weights"]
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"instance document missing field: {exc}") from exc
    sizes = tasks_doc.get("sizes")
    tasks = TaskSet(count=int(tasks_doc["count"]),
                    sizes=tuple(sizes) if sizes is not None else None)
    usage = tuple(ResourceUsage(*row) for row in nodes_doc["usage"])
    nodes = NodeSet(count=int(nodes_doc["count"]), usage=usage)
    weights = WorkloadWeights(**{k: float(v) for k, v in weights_doc.items()})
    return Instance(tasks=tasks, nodes=nodes, etc=EtcMatrix(np.array(etc, dtype=float)),
                    weights=weights)
