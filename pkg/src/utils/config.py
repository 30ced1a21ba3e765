"""Configuration management"""

from typing import Literal, Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):
    """Application configuration from environment variables (prefix PQS_)"""

    model_config = SettingsConfigDict(
        env_prefix="PQS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False
    )

    # Logging
    debug: bool = False
    log_level: str = "WARNING"
    color: bool = True

    # Real-number kernel
    numeric_precision: Literal["double", "decimal"] = "double"
    decimal_digits: int = 50
    series_tolerance: float = 1e-15
    guard_window: int = 5
    max_series_terms: int = 20000

    # Rational-point sampling
    sample_height: int = 13
    min_points: int = 5
    default_seed: int = 0

    # Symbolic checks
    default_series_order: int = 12
    enumeration_limit: int = 12

    @field_validator("decimal_digits")
    @classmethod
    def validate_decimal_digits(cls, v: int) -> int:
        """Decimal mode is only worth having at 50 digits or more"""
        if v < 50:
            raise ValueError(f"decimal_digits must be at least 50, got {v}")
        return v

    @field_validator("guard_window", "min_points", "sample_height")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @property
    def working_digits(self) -> int:
        """Significant decimal digits used by the mpmath kernel"""
        return 15 if self.numeric_precision == "double" else self.decimal_digits


# Global config instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get or create global config instance"""
    global _config
    if _config is None:
        _config = Config()
    return _config


def reset_config() -> None:
    """Drop the cached config so the next get_config() re-reads the environment"""
    global _config
    _config = None
