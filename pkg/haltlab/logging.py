"""Logging helpers for haltlab."""

from __future__ import annotations

import logging
from typing import Optional, Union

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"

_LOGGER_CONFIGURED = False


def _resolve_level(level: Union[int, str, None]) -> int:
    if level is None:
        from .config import get_settings

        level = get_settings().log_level
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        return resolved if isinstance(resolved, int) else logging.INFO
    return int(level)


def configure_logging(level: Union[int, str, None] = None) -> None:
    """Configure the root logger once; later explicit levels only adjust it.

    Without ``level`` the value of ``HALTLAB_LOG_LEVEL`` is used.
    """

    global _LOGGER_CONFIGURED
    if _LOGGER_CONFIGURED:
        if level is not None:
            logging.getLogger().setLevel(_resolve_level(level))
        return

    logging.basicConfig(level=_resolve_level(level), format=LOG_FORMAT)
    _LOGGER_CONFIGURED = True


def get_logger(name: Optional[str] = None) -> logging.Logger:
    configure_logging()
    return logging.getLogger(name or "haltlab")


__all__ = ["LOG_FORMAT", "configure_logging", "get_logger"]
