import os
from functools import lru_cache
from pathlib import Path

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from qlerch.ring_series import Ring, parse_ring


class Settings(BaseSettings):
    default_order: int = 120
    default_ring: str = "int"
    log_level: str = "WARNING"
    jobs: int = 1
    precision_retries: int = 4
    cache_dir: Path | None = None
    metrics_file: Path | None = None

    model_config = SettingsConfigDict(env_prefix="QLERCH_", env_file=".env", case_sensitive=False, extra="ignore")

    @property
    def ring(self) -> Ring:
        return parse_ring(self.default_ring)

    @model_validator(mode="after")
    def validate_limits(self) -> "Settings":
        if self.default_order <= 0:
            raise ValueError("default_order_must_be_positive")
        if self.jobs <= 0:
            raise ValueError("jobs_must_be_positive")
        if self.precision_retries < 0:
            raise ValueError("precision_retries_must_be_non_negative")
        try:
            parse_ring(self.default_ring)
        except ValueError as exc:
            raise ValueError("default_ring_invalid") from exc
        return self


@lru_cache
def get_settings() -> Settings:
    env_file = os.getenv("QLERCH_ENV_FILE", ".env")
    return Settings(_env_file=env_file)  # type: ignore[call-arg]
