"""
Experiment configuration files.

A config file is a plain `key=value` text file (comments with `#`). Values
not given fall back to the toolkit settings.
"""
from pathlib import Path
from typing import List, Literal, Optional, Union
import logging

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.settings import settings
from src.simulator import (
    ClusterConfig,
    SyntheticGraph,
    make_workload,
    rmat_graph,
    typed_graph,
)

logger = logging.getLogger(__name__)

_NONE_WORDS = {"", "none", "null", "off"}


class ExperimentConfig(BaseModel):
    """Everything one `compare` run needs."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes: int = Field(default=4, ge=1)
    extent_size: int = Field(default_factory=lambda: settings.EXTENT_SIZE, ge=1)
    t: int = Field(default_factory=lambda: settings.BASE_THRESHOLD, ge=0)
    k_growth: float = Field(default_factory=lambda: settings.GROWTH_FACTOR, ge=1.0)
    repartition_interval: int = Field(default_factory=lambda: settings.REPARTITION_INTERVAL, ge=1)
    tolerance: float = Field(default_factory=lambda: settings.TOLERANCE, ge=1.0)
    load_tolerance: Optional[float] = Field(default_factory=lambda: settings.LOAD_TOLERANCE)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    graph_seed: Optional[int] = None
    cache_factor: float = Field(default_factory=lambda: settings.CACHE_FACTOR, ge=0.0, le=1.0)
    scale: int = Field(default=16, ge=1, le=26)
    edge_factor: int = Field(default=16, ge=1)
    max_phases: int = Field(default=10, ge=1)
    queries: int = Field(default=4, ge=1)
    workload: Literal["bfs", "twohop"] = "bfs"
    restarts: int = Field(default_factory=lambda: settings.HEURISTIC_RESTARTS, ge=1)
    freeze_after: Optional[int] = Field(default=None, ge=0)
    reset_trees: bool = False

    @field_validator("load_tolerance", "freeze_after", "graph_seed", mode="before")
    @classmethod
    def _none_words(cls, value):
        if isinstance(value, str) and value.strip().lower() in _NONE_WORDS:
            return None
        return value

    def cluster_config(self) -> ClusterConfig:
        return ClusterConfig(
            num_nodes=self.nodes,
            base_threshold=self.t,
            growth_factor=self.k_growth,
            repartition_interval=self.repartition_interval,
            freeze_after=self.freeze_after,
            reset_trees=self.reset_trees,
            tolerance=self.tolerance,
            load_tolerance=self.load_tolerance,
            cache_factor=self.cache_factor,
            restarts=self.restarts,
            seed=self.seed,
        )

    def build_graph(self) -> SyntheticGraph:
        graph_seed = self.seed if self.graph_seed is None else self.graph_seed
        if self.workload == "twohop":
            return typed_graph(self.scale, seed=graph_seed, extent_size=self.extent_size)
        return rmat_graph(self.scale, self.edge_factor, seed=graph_seed, extent_size=self.extent_size)

    def build_workload(self, graph: SyntheticGraph) -> List:
        return make_workload(graph, self.workload, self.queries, self.seed, self.max_phases)


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    **overrides
) -> ExperimentConfig:
    """
    Read a config file and apply command-line overrides (None values are ignored).

    Raises:
        FileNotFoundError: If `path` does not exist
        pydantic.ValidationError: On unknown keys or invalid values
    """
    values = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"Config file not found: {path}")
        values = {k.strip().lower(): v for k, v in dotenv_values(path).items()}
        logger.debug(f"Loaded {len(values)} keys from {path}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)
