"""
Configuration management for the sliding-window AUC toolkit.
Uses environment variables with sensible defaults.
"""
from decimal import Decimal
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SLIDING_AUC_",
        case_sensitive=False,
        extra="ignore"
    )

    # Application
    app_name: str = "Sliding Window AUC"
    app_version: str = "0.1.0"
    debug: bool = False
    log_level: str = "INFO"

    # Estimator Configuration
    window: int = 1000
    epsilon: Decimal = Decimal("0.1")
    flip: bool = False

    # Pipeline Configuration
    emit_every: int = 1
    verify_every: int = 0  # 0 disables periodic invariant checks

    # Synthetic Stream Configuration
    gen_events: int = 10000
    gen_positive_rate: float = 0.3
    gen_separation: float = 1.5
    gen_seed: int = 0

    # Benchmark Configuration
    bench_baseline_events: int = 0  # 0 times the baseline over the whole stream
    sweep_epsilons: str = "0,0.1,0.3,0.5,0.9"


settings = Settings()
