"""
Project configuration settings.
"""
from pathlib import Path
from typing import Optional

# Try to import from pydantic_settings first (Pydantic v2)
try:
    from pydantic_settings import BaseSettings, SettingsConfigDict
    PYDANTIC_V2 = True
except ImportError:
    # Fall back to pydantic for older versions
    from pydantic import BaseSettings
    PYDANTIC_V2 = False

from pydantic import Field


class Settings(BaseSettings):
    """Toolkit-wide defaults, overridable through DYDAP_* environment variables."""

    if PYDANTIC_V2:
        model_config = SettingsConfigDict(
            env_file=".env",
            env_file_encoding="utf-8",
            case_sensitive=False,
            extra="ignore",
            env_prefix="DYDAP_"
        )

    # Project paths
    BASE_DIR: Path = Path(__file__).resolve().parent.parent
    OUTPUT_DIR: Path = BASE_DIR / "results"

    # Reproducibility
    DEFAULT_SEED: int = Field(default=42)

    # DN-tree
    BASE_THRESHOLD: int = Field(default=16, ge=0)
    GROWTH_FACTOR: float = Field(default=1.5, ge=1.0)

    # Storage model
    EXTENT_SIZE: int = Field(default=256, ge=1)  # vertices per extent per data structure

    # Partitioner
    TOLERANCE: float = Field(default=1.05, ge=1.0)
    LOAD_TOLERANCE: Optional[float] = Field(default=1.5)
    HEURISTIC_RESTARTS: int = Field(default=8, ge=1)
    REFINEMENT_PASSES: int = Field(default=50, ge=0)
    EXHAUSTIVE_LIMIT: int = Field(default=1_000_000)

    # Simulator
    CACHE_FACTOR: float = Field(default=0.5, ge=0.0, le=1.0)
    REPARTITION_INTERVAL: int = Field(default=2, ge=1)

    # Output
    SHOW_PROGRESS: bool = Field(default=True)

    # Logging
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FILE: Optional[str] = Field(default=None)

    # Pydantic v1 configuration
    if not PYDANTIC_V2:
        class Config:
            env_file = ".env"
            env_file_encoding = "utf-8"
            case_sensitive = False
            env_prefix = "DYDAP_"

    @property
    def progress_disabled(self) -> Optional[bool]:
        """tqdm `disable` value: None lets tqdm turn bars off on non-TTY streams."""
        return None if self.SHOW_PROGRESS else True

    def output_path(self, out: Optional[Path] = None) -> Path:
        """Resolve and create the output directory for a command."""
        path = Path(out) if out is not None else self.OUTPUT_DIR
        path.mkdir(parents=True, exist_ok=True)
        return path


# Create global settings instance
settings = Settings()
