"""Time-and-workload genetic-algorithm task scheduling toolkit.

Core layers (no web dependencies): ``model``, ``ga``, ``schedulers``,
``clustersim``, ``sensors``.  Service layers: ``schemas``, ``experiments``,
``service``, ``client``, ``cli``.
"""

from ._version import __version__
from .errors import (CorruptChromosomeError, IllPosedError,
                     InvalidArgumentError, InvalidParamsError,
                     SearchSpaceTooLargeError, TraceIOError, TraceParseError,
                     TwlgaError)
from .ga import (Assignment, EvolutionTrace, FitnessMode, FitnessReport,
                 GaParams, PopulationStats, RateFormula,
                 adaptive_crossover_rate, adaptive_mutation_rate, decode,
                 each_resource_time, evolve, fitness, job_final_time)
from .model import (DEFAULT_WEIGHTS, EtcMatrix, Instance, NodeSet,
                    ResourceUsage, TaskSet, WorkloadWeights,
                    generate_instance, instance_from_dict, instance_to_dict,
                    node_workload)

__all__ = [
    "__version__",
    "TwlgaError", "InvalidArgumentError", "CorruptChromosomeError",
    "InvalidParamsError", "SearchSpaceTooLargeError", "IllPosedError",
    "TraceParseError", "TraceIOError",
    "ResourceUsage", "WorkloadWeights", "DEFAULT_WEIGHTS", "TaskSet",
    "NodeSet", "EtcMatrix", "Instance", "node_workload", "generate_instance",
    "instance_to_dict", "instance_from_dict",
    "FitnessMode", "RateFormula", "Assignment", "FitnessReport",
    "PopulationStats", "GaParams", "EvolutionTrace", "decode",
    "each_resource_time", "job_final_time", "fitness",
    "adaptive_crossover_rate", "adaptive_mutation_rate", "evolve",
]
