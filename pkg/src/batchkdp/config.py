"""Configuration definition."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseSettings, Field, PositiveFloat, PositiveInt, confloat

__all__ = ["Config", "Profile", "LogLevel", "config"]


class Profile(str, Enum):
    production = "production"

    development = "development"


class LogLevel(str, Enum):
    DEBUG = "DEBUG"

    INFO = "INFO"

    WARNING = "WARNING"

    ERROR = "ERROR"

    CRITICAL = "CRITICAL"


class Config(BaseSettings):
    name: str = Field("batchkdp", env="SAFIR_NAME")

    profile: Profile = Field(Profile.production, env="SAFIR_PROFILE")

    log_level: LogLevel = Field(LogLevel.INFO, env="SAFIR_LOG_LEVEL")

    logger_name: str = Field("batchkdp", env="SAFIR_LOGGER")

    timeout: PositiveFloat = Field(
        200.0,
        description=(
            "Default per-query time limit in seconds. The shared engine gets "
            "the limit times the batch size as a wall-clock budget."
        ),
        env="KDP_TIMEOUT",
    )

    oracle_max_vertices: PositiveInt = Field(
        10000,
        description="Largest graph the dense max-flow oracle accepts.",
        env="KDP_ORACLE_MAX_VERTICES",
    )

    exhaustive_path_limit: PositiveInt = Field(
        12,
        description=(
            "Simple-path count above which exhaustive disjoint-subset "
            "search is skipped."
        ),
        env="KDP_EXHAUSTIVE_PATH_LIMIT",
    )

    generator_attempt_factor: PositiveInt = Field(
        50,
        description="Sampling attempts per requested query before k drops.",
        env="KDP_GENERATOR_ATTEMPT_FACTOR",
    )

    generator_min_success: confloat(gt=0, le=1) = Field(  # type: ignore
        0.2,
        description=(
            "Fraction of sampled pairs that must be solvable for a k value "
            "to be kept."
        ),
        env="KDP_GENERATOR_MIN_SUCCESS",
    )

    k_schedule: list[int] = Field(
        [50, 20, 15, 10, 8, 5, 2],
        description="Descending k values tried by the query generator.",
        env="KDP_K_SCHEDULE",
    )

    workers: PositiveInt = Field(
        1,
        description=(
            "Worker processes for the independent engines (maxflow, oracle)."
        ),
        env="KDP_WORKERS",
    )


config = Config()
"""Configuration for batchkdp."""
