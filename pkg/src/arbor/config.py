# src/arbor/config.py

"""
Runtime limits and observability switches, read from the environment.

Values come from ``ARBOR_*`` variables (a ``.env`` file is honoured by the CLI
through python-dotenv). Callers fetch the process-wide instance with
``get_settings()``; the CLI applies per-run overrides with ``override_settings``.
"""

from __future__ import annotations

import logging
import os
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from arbor.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    max_leaves: int = Field(default=8, ge=1)
    max_partition_ground: int = Field(default=12, ge=0)
    max_degree: int = Field(default=12, ge=0)
    max_cells: int = Field(default=2_000_000, ge=1)
    log_level: str = "WARNING"
    trace_export: str = "none"

    @classmethod
    def from_env(cls) -> "Settings":
        raw = {
            "max_leaves": os.getenv("ARBOR_MAX_LEAVES"),
            "max_partition_ground": os.getenv("ARBOR_MAX_PARTITION_GROUND"),
            "max_degree": os.getenv("ARBOR_MAX_DEGREE"),
            "max_cells": os.getenv("ARBOR_MAX_CELLS"),
            "log_level": os.getenv("LOG_LEVEL"),
            "trace_export": os.getenv("ARBOR_TRACE_EXPORT"),
        }
        try:
            return cls(**{key: value for key, value in raw.items() if value is not None})
        except ValidationError as exc:
            raise InvalidArgumentError(f"invalid arbor configuration: {exc.errors()[0]['msg']}") from exc


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
        logger.debug("Loaded settings: %s", _settings.model_dump())
    return _settings


def override_settings(**changes) -> Settings:
    """Replace selected fields of the active settings (CLI flags)."""
    global _settings
    updates = {key: value for key, value in changes.items() if value is not None}
    current = get_settings()
    try:
        _settings = Settings(**{**current.model_dump(), **updates})
    except ValidationError as exc:
        raise InvalidArgumentError(f"invalid arbor configuration: {exc.errors()[0]['msg']}") from exc
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
