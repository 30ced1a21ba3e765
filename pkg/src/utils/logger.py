"""Structured logging setup"""

import logging
import sys
from typing import Any

import structlog

from .config import get_config

_configured = False


def configure_logging(force: bool = False) -> None:
    """Configure structlog and the stdlib root handler from the current Config

    Logs go to stderr; stdout is reserved for emitted documents.

    Args:
        force: Reconfigure even if logging was already set up (used after --debug)
    """
    global _configured
    if _configured and not force:
        return

    config = get_config()
    level = logging.DEBUG if config.debug else getattr(logging, config.log_level.upper())

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.dev.ConsoleRenderer(colors=config.color) if config.debug
            else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=not force,
    )

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=force)
    _configured = True


def get_logger(name: str) -> Any:
    """Get a structured logger instance

    Args:
        name: Logger name (usually __name__)

    Returns:
        Structured logger instance
    """
    configure_logging()
    return structlog.get_logger(name)
