"""
Tagged console logging: every record renders as ``[TAG] message``.
The level comes from GE_LOG (see src.config).
"""

import logging
import sys

from src.config import LOG_LEVEL

_ROOT = "ge"
_configured = False


def _configure() -> None:
    global _configured
    if _configured:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(tag)s] %(message)s"))
    root = logging.getLogger(_ROOT)
    root.addHandler(handler)
    root.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    root.propagate = False
    _configured = True


def get_logger(tag: str) -> logging.LoggerAdapter:
    """Logger whose records are prefixed with ``[tag]``."""
    _configure()
    logger = logging.getLogger(f"{_ROOT}.{tag.lower()}")
    return logging.LoggerAdapter(logger, {"tag": tag.upper()})
