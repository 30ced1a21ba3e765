"""Utility functions"""

from .config import Config, get_config, reset_config
from .logger import configure_logging, get_logger
from .sampling import point_count, sample_points

__all__ = [
    "Config",
    "get_config",
    "reset_config",
    "configure_logging",
    "get_logger",
    "point_count",
    "sample_points",
]
