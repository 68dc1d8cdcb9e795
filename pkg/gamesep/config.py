from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Centralized configuration loaded from environment."""

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="GAMESEP_", extra="ignore"
    )

    log_level: str = Field(default="INFO")

    # Size guards
    max_profiles: int = Field(default=2**20, ge=1)
    max_players: int = Field(default=16, ge=1)
    max_clique_nodes: int = Field(default=24, ge=1)
    max_solve_profiles: int = Field(default=4096, ge=1)

    # Arithmetic
    scalar_mode: Literal["rational", "float"] = Field(default="rational")
    tolerance: float = Field(default=1e-9, gt=0)
    mrf_tolerance: float = Field(default=1e-7, gt=0)

    # Generators
    planted_retries: int = Field(default=16, ge=1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Provide a cached Settings instance."""

    return Settings()
