"""Deterministic BSP cluster simulator."""

from .graph import SyntheticGraph, graph_from_edges, rmat_graph, typed_graph
from .queries import BfsQuery, PhasedQuery, QueryPlan, TwoHopQuery, make_workload
from .bsp import BspTrace, run_query_bsp
from .metrics import RunMetrics, metrics
from .cluster import (
    Cluster,
    ClusterConfig,
    RepartitionReport,
    align_labels,
    hash_distribution,
    repartition_cycle,
)
from .compare import DYDAP, STATIC, ComparisonResult, compare_systems
from .io import metrics_frame, stddev_frame, trace_frame, write_comparison

__all__ = [
    'SyntheticGraph',
    'graph_from_edges',
    'rmat_graph',
    'typed_graph',
    'BfsQuery',
    'PhasedQuery',
    'QueryPlan',
    'TwoHopQuery',
    'make_workload',
    'BspTrace',
    'run_query_bsp',
    'RunMetrics',
    'metrics',
    'Cluster',
    'ClusterConfig',
    'RepartitionReport',
    'align_labels',
    'hash_distribution',
    'repartition_cycle',
    'DYDAP',
    'STATIC',
    'ComparisonResult',
    'compare_systems',
    'metrics_frame',
    'stddev_frame',
    'trace_frame',
    'write_comparison',
]
