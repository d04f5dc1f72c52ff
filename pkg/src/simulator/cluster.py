"""
Simulated cluster: per-node DN-trees and the repartition cycle.

Each node owns one DN-tree (single writer). A repartition cycle joins the
trees, reconstructs the transition matrix, partitions the access graph and
installs the new distribution function for subsequent queries.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import linear_sum_assignment

from config.settings import settings
from src.dntree import DnTree, DnTreeConfig, aggregate, deserialize, serialize
from src.partitioner import (
    DistributionFunction,
    PartitionMetrics,
    PartitionSpec,
    build_access_graph,
    build_constraints,
    derive_distribution,
    evaluate,
    get_engine,
    marginal_load,
)
from src.simulator.bsp import BspTrace, run_query_bsp

logger = logging.getLogger(__name__)


class ClusterConfig(BaseModel):
    """Cluster size, cost units and repartitioning policy."""

    model_config = ConfigDict(frozen=True)

    num_nodes: int = Field(ge=1)
    unit_compute_cost: float = Field(default=1.0, gt=0)
    unit_net_cost: float = Field(default=1.0, ge=0)
    base_threshold: int = Field(default_factory=lambda: settings.BASE_THRESHOLD, ge=0)
    growth_factor: float = Field(default_factory=lambda: settings.GROWTH_FACTOR, ge=1.0)
    repartition_interval: int = Field(default_factory=lambda: settings.REPARTITION_INTERVAL, ge=1)
    freeze_after: Optional[int] = Field(default=None, ge=0)
    reset_trees: bool = False
    tolerance: float = Field(default_factory=lambda: settings.TOLERANCE, ge=1.0)
    load_tolerance: Optional[float] = Field(default_factory=lambda: settings.LOAD_TOLERANCE)
    cache_factor: float = Field(default_factory=lambda: settings.CACHE_FACTOR, ge=0.0, le=1.0)
    restarts: int = Field(default_factory=lambda: settings.HEURISTIC_RESTARTS, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    def tree_config(self, extent_space: int) -> DnTreeConfig:
        return DnTreeConfig(
            base_threshold=self.base_threshold,
            growth_factor=self.growth_factor,
            extent_space=extent_space,
        )


def hash_distribution(m: int, n: int) -> DistributionFunction:
    """Static baseline: extent e lives on node e mod n."""
    return DistributionFunction(np.arange(m, dtype=np.int64) % n, n)


def align_labels(new: DistributionFunction, previous: DistributionFunction) -> DistributionFunction:
    """Relabel the nodes of `new` to keep as many extents in place as possible."""
    n = new.num_nodes
    overlap = np.zeros((n, n), dtype=np.int64)
    np.add.at(overlap, (new.mapping, previous.mapping), 1)
    rows, cols = linear_sum_assignment(-overlap)
    relabel = np.empty(n, dtype=np.int64)
    relabel[rows] = cols
    return DistributionFunction(relabel[new.mapping], n)


@dataclass
class RepartitionReport:
    """Outcome of one repartition cycle."""
    df: DistributionFunction
    previous: DistributionFunction
    remapped: int = 0
    joins: int = 0
    noop: bool = False
    metrics: Optional[PartitionMetrics] = None
    hash_metrics: Optional[PartitionMetrics] = None
    hash_feasible: bool = True
    tolerances: np.ndarray = field(default_factory=lambda: np.zeros(0))
    m_hat: Optional[np.ndarray] = None

    @property
    def cut_not_worse_than_hash(self) -> bool:
        """Recorded-workload cut of the new DF does not exceed the hash cut."""
        if self.noop or self.metrics is None or not self.hash_feasible:
            return True
        slack = 1e-9 * max(1.0, abs(self.hash_metrics.edge_cut))
        return self.metrics.edge_cut <= self.hash_metrics.edge_cut + slack


class Cluster:
    """Nodes, their DN-trees and the current distribution function."""

    def __init__(
        self,
        config: ClusterConfig,
        num_extents: int,
        ds_tags: Optional[Sequence[int]] = None,
        df: Optional[DistributionFunction] = None
    ):
        """
        Initialize cluster.

        Args:
            config: Cluster configuration
            num_extents: Size of the extent space
            ds_tags: Data-structure tag per extent (one balance constraint per tag)
            df: Initial distribution function (hash by default)
        """
        self.config = config
        self.num_extents = num_extents
        self.ds_tags = None if ds_tags is None else np.asarray(ds_tags, dtype=np.int64)
        self.df = df or hash_distribution(num_extents, config.num_nodes)
        self.tree_config = config.tree_config(num_extents)
        self.trees: List[DnTree] = [DnTree(self.tree_config) for _ in range(config.num_nodes)]
        self.queries_since_cycle = 0
        self.reports: List[RepartitionReport] = []

    @property
    def num_nodes(self) -> int:
        return self.config.num_nodes

    @property
    def recorded(self) -> int:
        return sum(tree.total_recorded for tree in self.trees)

    def run_query(self, graph, query, residency: Optional[np.ndarray] = None, record: bool = True) -> BspTrace:
        """Execute one query under the current DF, recording into the node trees."""
        trace = run_query_bsp(
            graph,
            self.df,
            query,
            recorders=self.trees if record else None,
            residency=residency,
            cache_factor=self.config.cache_factor,
            unit_compute_cost=self.config.unit_compute_cost,
            unit_net_cost=self.config.unit_net_cost,
            freeze_after=self.config.freeze_after,
        )
        if record:
            self.queries_since_cycle += 1
        return trace

    def due(self) -> bool:
        return self.queries_since_cycle >= self.config.repartition_interval

    def repartition(self) -> RepartitionReport:
        """Run a cycle and adopt its distribution function."""
        report = repartition_cycle(self)
        self.df = report.df
        self.queries_since_cycle = 0
        self.reports.append(report)
        if self.config.reset_trees and not report.noop:
            self.trees = [DnTree(self.tree_config) for _ in range(self.num_nodes)]
        return report


def repartition_cycle(cluster: Cluster) -> RepartitionReport:
    """
    Aggregate the node trees and partition the reconstructed access graph.

    Raises:
        InfeasiblePartitionError: If no assignment satisfies the tolerances
    """
    config = cluster.config
    previous = cluster.df
    if cluster.recorded == 0:
        logger.info("Repartition skipped: no transitions recorded")
        return RepartitionReport(df=previous, previous=previous, noop=True)

    result = aggregate([serialize(tree) for tree in cluster.trees])
    m_hat = deserialize(result.tree).reconstruct_matrix()
    graph = build_access_graph(m_hat)
    load = marginal_load(m_hat) if config.load_tolerance is not None else None
    constraints = build_constraints(cluster.num_extents, cluster.ds_tags, load)
    spec = PartitionSpec.for_constraints(config.num_nodes, constraints, config.tolerance, config.load_tolerance)
    tolerances = spec.tolerances(constraints.num_constraints)

    hashed = hash_distribution(cluster.num_extents, config.num_nodes)
    engine = get_engine("heuristic", seed=config.seed, restarts=config.restarts)
    partitioning = engine.partition(
        graph, constraints, spec, warm_starts=[previous.mapping, hashed.mapping]
    )
    df = align_labels(derive_distribution(partitioning), previous)

    new_metrics = evaluate(graph, constraints, df.to_partitioning())
    hash_metrics = evaluate(graph, constraints, hashed.to_partitioning())
    hash_feasible = hash_metrics.feasible(tolerances)
    if not hash_feasible:
        logger.warning(
            f"Hash distribution violates tolerances on the recorded workload: {hash_metrics.as_dict()}"
        )

    report = RepartitionReport(
        df=df,
        previous=previous,
        remapped=previous.remapped(df),
        joins=result.joins,
        metrics=new_metrics,
        hash_metrics=hash_metrics,
        hash_feasible=hash_feasible,
        tolerances=tolerances,
        m_hat=m_hat,
    )
    logger.info(
        f"Repartition done: cut {new_metrics.edge_cut:.1f} (hash {hash_metrics.edge_cut:.1f}), "
        f"{report.remapped} extents remapped, {result.joins} joins"
    )
    return report
