"""
config.py — Central configuration for the dihedral realizability engine.
Loads settings from environment variables / .env file.
"""

from pathlib import Path
from typing import List

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


# ── Project Paths ──────────────────────────────────────────────
ROOT_DIR = Path(__file__).resolve().parent
DATA_DIR = ROOT_DIR / "data"
LOG_DIR = DATA_DIR / "logs"
REGRESSION_DIR = DATA_DIR / "regression"

# Ensure data subdirectories exist at import time
for _dir in (LOG_DIR, REGRESSION_DIR):
    _dir.mkdir(parents=True, exist_ok=True)


# ── Application Settings ──────────────────────────────────────
class Settings(BaseSettings):
    """Typed application settings — loaded from env vars / .env file."""

    # --- Witness search ---
    max_segments: int = Field(
        default=8, ge=2,
        description="Largest number of boundary segments a witness gluing may use",
    )
    max_denominator: int = Field(
        default=24, ge=1,
        description="Largest length grid denominator tried by the witness search",
    )
    max_regular: int = Field(
        default=2, ge=0,
        description="Extra regular (angle 2π) equatorial vertices the search may add",
    )

    # --- Surface census ---
    enumerate_max_length: int = Field(
        default=2, ge=1,
        description="Largest integer segment length (in grid units) for enumerate",
    )
    enumerate_denominator: int = Field(
        default=1, ge=1,
        description="Grid denominator for enumerated segment lengths",
    )

    # --- Concurrency ---
    jobs: int = Field(
        default=1, ge=1,
        description="Worker threads for assignment evaluation and search partitions",
    )

    # --- Crosscheck grid ---
    crosscheck_coefficients: str = Field(
        default="1/2,3/4,1,5/4,3/2,2,5/2,3",
        description="Comma-separated angle coefficients (turn units) swept by crosscheck",
    )
    crosscheck_max_n: int = Field(default=5, ge=1)
    crosscheck_max_genus: int = Field(default=2, ge=0)

    # --- Logging ---
    log_level: str = Field(default="INFO", description="Console log level")
    log_to_file: bool = Field(
        default=True,
        description="Also write a rotating debug log under data/logs",
    )

    model_config = {
        "env_file": str(ROOT_DIR / ".env"),
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
    }

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @property
    def coefficient_grid(self) -> List[str]:
        return [part.strip() for part in self.crosscheck_coefficients.split(",") if part.strip()]


def get_settings() -> Settings:
    """Factory that loads and returns validated settings."""
    return Settings()
