"""Run-level measures: makespan, TEPS proxy and per-phase dispersion."""
from dataclasses import dataclass, field
from typing import List, Sequence, Union
import logging

import numpy as np

from src.simulator.bsp import BspTrace

logger = logging.getLogger(__name__)


@dataclass
class RunMetrics:
    """Totals of one execution plus per-phase load and network dispersion."""
    system: str = ""
    execution: int = 1
    makespan: float = 0.0
    compute_time: float = 0.0
    network_units: int = 0
    edges_traversed: int = 0
    teps_proxy: float = 0.0
    edge_cut_messages: int = 0
    mean_response_time: float = 0.0
    load_stddev: List[float] = field(default_factory=list)
    net_stddev: List[float] = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.system}{self.execution}"

    @property
    def mean_load_stddev(self) -> float:
        return float(np.mean(self.load_stddev)) if self.load_stddev else 0.0

    def as_row(self) -> dict:
        return {
            "system": self.system,
            "execution": self.execution,
            "makespan": self.makespan,
            "compute_time": self.compute_time,
            "network_units": self.network_units,
            "edges_traversed": self.edges_traversed,
            "teps_proxy": self.teps_proxy,
            "edge_cut_messages": self.edge_cut_messages,
            "mean_response_time": self.mean_response_time,
        }


def metrics(
    traces: Union[BspTrace, Sequence[BspTrace]],
    system: str = "",
    execution: int = 1
) -> RunMetrics:
    """
    Combine the traces of one execution.

    Phases are numbered across queries in execution order; stddevs are
    population standard deviations across nodes.
    """
    if isinstance(traces, BspTrace):
        traces = [traces]
    result = RunMetrics(system=system, execution=execution)
    if not traces:
        return result

    for trace in traces:
        result.compute_time += trace.compute_time
        result.network_units += trace.network_units
        result.makespan += trace.makespan
        result.edges_traversed += trace.edges_traversed
        for loads, net in zip(trace.loads, trace.net_in):
            result.load_stddev.append(float(np.std(loads)))
            result.net_stddev.append(float(np.std(net)))

    result.edge_cut_messages = result.network_units
    result.mean_response_time = result.makespan / len(traces)
    result.teps_proxy = result.edges_traversed / result.makespan if result.makespan > 0 else 0.0
    return result
