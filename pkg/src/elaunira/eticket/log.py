"""Logging helpers shared by the protocol actors."""

from __future__ import annotations

import logging
from functools import cached_property

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


class LoggingMixin:
    """Give an object a ``log`` attribute named after its class."""

    @cached_property
    def log(self) -> logging.Logger:
        cls = self.__class__
        return logging.getLogger(f"{cls.__module__}.{cls.__qualname__}")


def configure_logging(level: str | int = "INFO") -> None:
    """Configure the root ``elaunira`` logger once for command-line use."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logger = logging.getLogger("elaunira")
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level)
