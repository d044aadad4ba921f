"""Logger factory shared by the engine modules."""

from __future__ import annotations

import logging

from .config import log_level

_ROOT_NAME = "bbq"


def _root_logger() -> logging.Logger:
    root = logging.getLogger(_ROOT_NAME)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
        root.propagate = False
    root.setLevel(log_level())
    return root


def get_logger(name: str) -> logging.Logger:
    """Return a child of the package logger, e.g. ``bbq.ubase`` for ``src.ubase``."""

    _root_logger()
    short = name.rsplit(".", 1)[-1]
    return logging.getLogger(f"{_ROOT_NAME}.{short}")
