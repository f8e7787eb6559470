"""Application configuration loaded from environment variables."""

import os

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """All config from environment (GRAPHDIST_ prefix). CLI flags override these."""

    model_config = {
        "env_prefix": "GRAPHDIST_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore",
    }

    # All-pairs kernel
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    row_block: int = Field(default=256, ge=1)
    dense_threshold: float = Field(default=0.05, ge=0.0, le=1.0)

    # Experiment rows run concurrently
    jobs: int = Field(default=1, ge=1)

    # Exports
    hist_bins: int = Field(default=100, ge=1)
    ecdf_grid: int = Field(default=101, ge=2)

    # K-S p-value series truncation
    ks_series_terms: int = Field(default=101, ge=1)
    ks_series_tol: float = Field(default=1e-12, gt=0.0)

    # App
    log_level: str = Field(default="INFO")
    results_dir: str = Field(default="results")


settings = Settings()
