"""Logging configuration for SymNet."""

import logging
import os
import sys
from datetime import datetime
from typing import Any

import structlog

from symnet.version import version_string


def configure_logging(level: int = logging.INFO, log_dir: str | None = None) -> None:
    """Configure structlog for the application.

    Console output goes to stderr; stdout carries JSON reports and loss logs.

    Args:
        level: Logging level for the console (default: INFO)
        log_dir: Directory for a DEBUG-level log file, if wanted
    """
    shared_processors: list[Any] = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    structlog.configure(
        processors=shared_processors
        + [
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        if getattr(handler, "_symnet", False):
            root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processor=structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        )
    )
    console_handler.setLevel(level)
    console_handler._symnet = True  # type: ignore[attr-defined]
    root_logger.addHandler(console_handler)

    if log_dir is not None:
        os.makedirs(log_dir, exist_ok=True)
        log_filename = (
            datetime.now().strftime("%Y-%m-%d-%H-%M-%S") + f"-{os.getpid()}.log"
        )
        file_handler = logging.FileHandler(os.path.join(log_dir, log_filename))
        file_handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                processor=structlog.dev.ConsoleRenderer(colors=False),
            )
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler._symnet = True  # type: ignore[attr-defined]
        root_logger.addHandler(file_handler)

    # Root must be DEBUG so the file handler sees everything
    root_logger.setLevel(logging.DEBUG if log_dir is not None else level)

    logger = structlog.get_logger(__name__)
    logger.debug("symnet_starting", version=version_string())


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a configured logger instance.

    Args:
        name: Logger name (typically __name__ of the module)

    Returns:
        Configured structlog bound logger
    """
    return structlog.get_logger(name)
