"""
Paired static/dynamic runs of one workload.

Each system executes the workload twice without clearing its caches. The
static system keeps the hash distribution; DYDAP starts from it, records its
first execution into the node DN-trees, repartitions every
`repartition_interval` queries and once more after the last query, then
reuses the final distribution for the second execution.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import logging

import numpy as np
from tqdm import tqdm

from config.settings import settings
from src.partitioner import DistributionFunction
from src.simulator.bsp import BspTrace, run_query_bsp
from src.simulator.cluster import Cluster, ClusterConfig, RepartitionReport, hash_distribution
from src.simulator.graph import SyntheticGraph
from src.simulator.metrics import RunMetrics, metrics

logger = logging.getLogger(__name__)

STATIC = "static"
DYDAP = "DYDAP"


@dataclass
class ComparisonResult:
    """Metrics and traces of static1, static2, DYDAP1 and DYDAP2."""
    runs: Dict[str, RunMetrics] = field(default_factory=dict)
    traces: Dict[str, List[BspTrace]] = field(default_factory=dict)
    reports: List[RepartitionReport] = field(default_factory=list)
    hash_df: Optional[DistributionFunction] = None
    final_df: Optional[DistributionFunction] = None

    @property
    def recorded_cut_ok(self) -> bool:
        return all(r.cut_not_worse_than_hash for r in self.reports)

    @property
    def final_report(self) -> Optional[RepartitionReport]:
        active = [r for r in self.reports if not r.noop]
        return active[-1] if active else None

    def directions(self) -> Dict[str, bool]:
        """Improvement directions of DYDAP over the static baseline."""
        s1, d1, d2 = self.runs[f"{STATIC}1"], self.runs[f"{DYDAP}1"], self.runs[f"{DYDAP}2"]
        return {
            "edge_cut_messages": d1.edge_cut_messages <= s1.edge_cut_messages,
            "load_stddev": d1.mean_load_stddev < s1.mean_load_stddev,
            "teps_second_execution": d2.teps_proxy >= d1.teps_proxy,
            "teps_first_execution": d1.teps_proxy >= s1.teps_proxy,
        }


def _residency(traces: Sequence[BspTrace], num_extents: int, num_nodes: int) -> np.ndarray:
    resident = np.zeros((num_extents, num_nodes), dtype=bool)
    for trace in traces:
        resident |= trace.resident
    return resident


def compare_systems(
    graph: SyntheticGraph,
    workload: Sequence,
    config: ClusterConfig,
    show_progress: Optional[bool] = None
) -> ComparisonResult:
    """
    Run the workload under both systems.

    Args:
        graph: Graph the queries run on
        workload: Seeded query list
        config: Cluster configuration shared by both systems
        show_progress: Force tqdm bars on or off (settings default)

    Returns:
        ComparisonResult keyed by `static1`, `static2`, `DYDAP1`, `DYDAP2`
    """
    m, n = graph.num_extents, config.num_nodes
    hashed = hash_distribution(m, n)
    disable = settings.progress_disabled if show_progress is None else not show_progress
    result = ComparisonResult(hash_df=hashed)

    def static_run(residency):
        return [
            run_query_bsp(
                graph, hashed, q,
                residency=residency,
                cache_factor=config.cache_factor,
                unit_compute_cost=config.unit_compute_cost,
                unit_net_cost=config.unit_net_cost,
            )
            for q in tqdm(workload, desc="static", disable=disable)
        ]

    static1 = static_run(None)
    static2 = static_run(_residency(static1, m, n))

    cluster = Cluster(config, m, ds_tags=graph.extent_tags(), df=hashed)
    dydap1 = []
    for query in tqdm(workload, desc="DYDAP", disable=disable):
        dydap1.append(cluster.run_query(graph, query))
        if cluster.due():
            cluster.repartition()
    if cluster.queries_since_cycle > 0:
        cluster.repartition()
    warm = _residency(dydap1, m, n)
    dydap2 = [cluster.run_query(graph, q, residency=warm, record=False) for q in workload]

    for system, execution, traces in (
        (STATIC, 1, static1), (STATIC, 2, static2), (DYDAP, 1, dydap1), (DYDAP, 2, dydap2)
    ):
        run = metrics(traces, system, execution)
        result.runs[run.label] = run
        result.traces[run.label] = traces
    result.reports = list(cluster.reports)
    result.final_df = cluster.df

    if not result.recorded_cut_ok:
        logger.error("Repartitioned cut exceeds the hash cut on the recorded workload")
    for label, run in result.runs.items():
        logger.info(
            f"{label}: makespan {run.makespan:.1f}, cut messages {run.edge_cut_messages}, "
            f"mean load stddev {run.mean_load_stddev:.3f}"
        )
    return result
