"""
Runtime configuration for alexlab.

Everything is read from the environment on each call to ``settings()``:

    ALEXLAB_MAX_VARS      variable limit for polynomial gcd (default 6)
    ALEXLAB_MAX_HULL_DIM  dimension limit for exact convex hulls (default 4)
    ALEXLAB_KMAX          default kmax for the obstruction tests (default 3)
    ALEXLAB_LOG_LEVEL     level of the ``alexlab`` logger tree (default WARNING)
"""

import logging
import os
import sys
from dataclasses import dataclass

DEFAULT_MAX_VARS = 6
DEFAULT_MAX_HULL_DIM = 4
DEFAULT_KMAX = 3
DEFAULT_LOG_LEVEL = "WARNING"


@dataclass(frozen=True)
class Settings:
    max_vars: int = DEFAULT_MAX_VARS
    max_hull_dim: int = DEFAULT_MAX_HULL_DIM
    kmax: int = DEFAULT_KMAX
    log_level: str = DEFAULT_LOG_LEVEL


def _positive_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} environment variable must be an integer, got {raw!r}.")
    if value < minimum:
        raise ValueError(f"{name} environment variable must be >= {minimum}, got {value}.")
    return value


def settings() -> Settings:
    """Read the current settings from the environment."""
    level = os.environ.get("ALEXLAB_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper() or DEFAULT_LOG_LEVEL
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"ALEXLAB_LOG_LEVEL environment variable names no logging level: {level!r}.")
    return Settings(
        max_vars=_positive_int("ALEXLAB_MAX_VARS", DEFAULT_MAX_VARS),
        max_hull_dim=_positive_int("ALEXLAB_MAX_HULL_DIM", DEFAULT_MAX_HULL_DIM),
        kmax=_positive_int("ALEXLAB_KMAX", DEFAULT_KMAX, minimum=0),
        log_level=level,
    )


def configure_logging(level: str | None = None) -> None:
    """Send the ``alexlab`` logs to stderr; stdout is reserved for results."""
    level = (level or settings().log_level).upper()
    root = logging.getLogger("alexlab")
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(level)
