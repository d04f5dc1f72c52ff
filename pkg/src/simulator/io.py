"""CSV export of comparison runs."""
from pathlib import Path
from typing import Dict, Union
import logging

import pandas as pd

from src.simulator.compare import ComparisonResult

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["system", "execution", "query", "phase", "node", "load", "cost", "net_in"]
METRICS_COLUMNS = [
    "system", "execution", "makespan", "compute_time", "network_units",
    "edges_traversed", "teps_proxy", "edge_cut_messages", "mean_response_time",
]
STDDEV_COLUMNS = ["system", "execution", "phase", "load_stddev", "net_stddev"]

FLOAT_FORMAT = "%.10g"


def trace_frame(result: ComparisonResult) -> pd.DataFrame:
    """One row per (system, execution, query, phase, node); phases restart per query."""
    rows = []
    for label, traces in result.traces.items():
        run = result.runs[label]
        for q, trace in enumerate(traces):
            for phase, (loads, costs, net) in enumerate(zip(trace.loads, trace.costs, trace.net_in)):
                for node in range(trace.num_nodes):
                    rows.append({
                        "system": run.system,
                        "execution": run.execution,
                        "query": q,
                        "phase": phase,
                        "node": node,
                        "load": int(loads[node]),
                        "cost": float(costs[node]),
                        "net_in": int(net[node]),
                    })
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def metrics_frame(result: ComparisonResult) -> pd.DataFrame:
    return pd.DataFrame([run.as_row() for run in result.runs.values()], columns=METRICS_COLUMNS)


def stddev_frame(result: ComparisonResult) -> pd.DataFrame:
    """Per-phase dispersion; phases are numbered across the whole execution."""
    rows = []
    for run in result.runs.values():
        for phase, (load_sd, net_sd) in enumerate(zip(run.load_stddev, run.net_stddev)):
            rows.append({
                "system": run.system,
                "execution": run.execution,
                "phase": phase,
                "load_stddev": load_sd,
                "net_stddev": net_sd,
            })
    return pd.DataFrame(rows, columns=STDDEV_COLUMNS)


def write_comparison(result: ComparisonResult, out_dir: Union[str, Path]) -> Dict[str, Path]:
    """
    Write trace.csv, metrics.csv and stddev.csv.

    Returns:
        File name -> written path
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = {
        "trace.csv": trace_frame(result),
        "metrics.csv": metrics_frame(result),
        "stddev.csv": stddev_frame(result),
    }
    paths = {}
    for name, frame in frames.items():
        path = out_dir / name
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        paths[name] = path
        logger.info(f"Wrote {len(frame)} rows to {path}")
    return paths
