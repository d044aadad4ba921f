"""Configuration helpers for the algebra workbench."""

from __future__ import annotations

import os
from pathlib import Path

try:
    from dotenv import load_dotenv
except Exception:
    load_dotenv = None


if load_dotenv is not None:
    load_dotenv()


def _project_root() -> Path:
    return Path(__file__).resolve().parent.parent


def data_dir() -> Path:
    override = os.getenv("BBQ_DATA_DIR")
    if override:
        return Path(override)
    return _project_root() / "data"


def datum_path(name: str) -> Path:
    return data_dir() / f"{name}.json"


def root_multiplicities_path() -> Path:
    return Path(os.getenv("BBQ_ROOT_MULT_CACHE", str(data_dir() / "root_multiplicities.json")))


def cutoff_limit() -> int:
    try:
        return int(os.getenv("BBQ_CUTOFF_LIMIT", "8"))
    except ValueError:
        return 8


def default_cutoff() -> int:
    try:
        return int(os.getenv("BBQ_DEFAULT_CUTOFF", "4"))
    except ValueError:
        return 4


def tau_series_order() -> int:
    try:
        return int(os.getenv("BBQ_TAU_SERIES_ORDER", "12"))
    except ValueError:
        return 12


def log_level() -> str:
    level = os.getenv("BBQ_LOG_LEVEL", "WARNING").strip().upper()
    if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        return "WARNING"
    return level
