from __future__ import annotations

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from RMD_* environment variables."""

    # Runtime
    log_level: str = "INFO"

    # Experiment harness
    output_dir: str = "output"
    workers: int = 1

    # Metrics
    metrics_backend: str = "stdout"
    metrics_namespace: str = "rmd"
    metrics_disable: bool = False
    metrics_sample_rate: float = 1.0
    metrics_statsd_host: str = "127.0.0.1"
    metrics_statsd_port: int = 8125

    model_config = SettingsConfigDict(env_prefix="RMD_", env_file=".env", case_sensitive=False)


settings = Settings()
